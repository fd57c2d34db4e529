#pragma once

#include <cstdint>
#include <compare>
#include <limits>
#include <string>

#include "bml/errors.hpp"

namespace bml {

// Exact rational arithmetic on int64 numerator/denominator, always normalized
// (gcd-reduced, positive denominator).  Intermediate products run through
// __int128 and are reduced before the fit-check, so anything at the scales
// this library touches (domains up to 2^24, edge counts up to |S||T|) stays
// well inside range.  Overflow of a *stored* value throws.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make128((i128)a.num_ * b.den_ + (i128)b.num_ * a.den_,
                       (i128)a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make128((i128)a.num_ * b.den_ - (i128)b.num_ * a.den_,
                       (i128)a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make128((i128)a.num_ * b.num_, (i128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw input_error("rational division by zero");
        return make128((i128)a.num_ * b.den_, (i128)a.den_ * b.num_);
    }
    Rational operator-() const { Rational r; r.num_ = -num_; r.den_ = den_; return r; }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        i128 l = (i128)a.num_ * b.den_;
        i128 r = (i128)b.num_ * a.den_;
        if (l < r) return std::strong_ordering::less;
        if (l > r) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    // Largest integer <= value.
    std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    // Smallest integer >= value.
    std::int64_t ceil() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) ++q;
        return q;
    }

    double to_double() const { return (double)num_ / (double)den_; }

    // "3", "3/4" or a plain decimal like "0.25".
    static Rational parse(const std::string& s);
    std::string str() const;

private:
    using i128 = __int128;

    static i128 gcd128(i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a;
    }
    static std::int64_t fit(i128 v) {
        if (v > std::numeric_limits<std::int64_t>::max() ||
            v < std::numeric_limits<std::int64_t>::min())
            throw std::overflow_error("rational out of range");
        return (std::int64_t)v;
    }
    static Rational make128(i128 n, i128 d) {
        if (d == 0) throw input_error("rational zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n, d);
        if (g > 1) { n /= g; d /= g; }
        Rational r;
        r.num_ = fit(n);
        r.den_ = fit(d);
        return r;
    }
    void assign(std::int64_t n, std::int64_t d) { *this = make128(n, d); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// ceil(a/b) for positive 128-bit intermediates, as a convenience for the
// many ceil(alpha * count) size floors.
inline std::int64_t ceil_mul(const Rational& r, std::int64_t count) {
    __int128 n = (__int128)r.num() * count;
    __int128 d = r.den();
    __int128 q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return (std::int64_t)q;
}

} // namespace bml
