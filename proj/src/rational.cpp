#include "bml/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace bml {

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw input_error("empty rational");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = std::strtoll(s.substr(0, slash).c_str(), nullptr, 10);
        std::int64_t d = std::strtoll(s.substr(slash + 1).c_str(), nullptr, 10);
        if (d == 0) throw input_error("rational with zero denominator: " + s);
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string intpart = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (frac.size() > 17) frac = frac.substr(0, 17);
        bool neg = !intpart.empty() && intpart[0] == '-';
        std::int64_t ip = intpart.empty() || intpart == "-" ? 0
                           : std::strtoll(intpart.c_str(), nullptr, 10);
        std::int64_t den = 1;
        std::int64_t fp = 0;
        for (char c : frac) {
            if (!std::isdigit((unsigned char)c)) throw input_error("bad rational: " + s);
            fp = fp * 10 + (c - '0');
            den *= 10;
        }
        Rational r = Rational(ip < 0 ? -ip : ip) + Rational(fp, den);
        return neg || ip < 0 ? -r : r;
    }
    char* end = nullptr;
    std::int64_t v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw input_error("bad rational: " + s);
    return Rational(v);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

} // namespace bml
