#include "bml/classes/decision_list.hpp"
#include "bml/classes/equal_piece.hpp"
#include "bml/classes/threshold.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bml {

std::vector<std::uint64_t> HypothesisClass::labels(std::uint64_t h) const {
    check_index(h);
    std::uint64_t m = domain().size();
    std::vector<std::uint64_t> words((m + 63) / 64, 0);
    for (std::uint64_t x = 0; x < m; ++x)
        if (evaluate(h, x)) words[x / 64] |= (std::uint64_t)1 << (x % 64);
    return words;
}

std::uint64_t ThresholdClass::nearest(const Rational& v) const {
    // cut values are (2i+1)/(2n); minimize |v - cut| with lower index on ties
    Rational t = v * Rational(2 * (std::int64_t)dom_.n); // compare against 2i+1
    std::int64_t i = ((t - Rational(1)) / Rational(2)).floor(); // largest cut <= v
    std::int64_t best = 0;
    if (i < 0)
        best = 0;
    else if ((std::uint64_t)i >= count() - 1)
        best = (std::int64_t)count() - 1;
    else {
        Rational below = (t - Rational(2 * i + 1)).abs();
        Rational above = (Rational(2 * i + 3) - t).abs();
        best = below <= above ? i : i + 1;
    }
    return (std::uint64_t)best;
}

// --- equal-piece -----------------------------------------------------------

EqualPieceClass::EqualPieceClass(int n, Rational piece_len)
    : dom_(Domain::grid(n)), p_(std::move(piece_len)) {
    if (!(p_ > Rational(0) && p_ < Rational(1)))
        throw input_error("piece length must be in (0,1)");
    // enumerate start tuples when the family is small enough
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur;
    Rational pn = p_ * Rational(n); // start j admits the piece iff j + pn < n
    bool capped = false;
    auto rec = [&](auto&& self, std::int64_t from) -> void {
        if (capped) return;
        out.push_back(cur);
        if (out.size() > kEnumerationCap) { capped = true; return; }
        for (std::int64_t j = from; Rational(j) + pn < Rational(n); ++j) {
            cur.push_back(j);
            // next start must satisfy j/n + p < j'/n, i.e. j' > j + pn
            self(self, (Rational(j) + pn).floor() + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    if (!capped) {
        all_ = std::move(out);
        enumerated_ = true;
    }
}

std::uint64_t EqualPieceClass::count() const {
    if (!enumerated_) throw input_error("equal-piece family too large to enumerate");
    return all_.size();
}

bool EqualPieceClass::evaluate(std::uint64_t h, std::uint64_t x) const {
    return eval_description(starts_of(h), x);
}

std::string EqualPieceClass::name() const {
    return "equal-piece(n=" + std::to_string(dom_.n) + ",p=" + p_.str() + ")";
}

std::string EqualPieceClass::describe(std::uint64_t h) const {
    return description_str(starts_of(h));
}

const std::vector<std::int64_t>& EqualPieceClass::starts_of(std::uint64_t h) const {
    check_index(h);
    return all_[h];
}

std::optional<std::uint64_t> EqualPieceClass::index_of(
    const std::vector<std::int64_t>& starts) const {
    if (!enumerated_) return std::nullopt;
    auto it = std::find(all_.begin(), all_.end(), starts);
    if (it == all_.end()) return std::nullopt;
    return (std::uint64_t)(it - all_.begin());
}

bool EqualPieceClass::description_valid(const std::vector<std::int64_t>& starts) const {
    Rational n((std::int64_t)dom_.n);
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (starts[i] < 0) return false;
        Rational end = Rational(starts[i]) / n + p_;
        if (!(end < Rational(1))) return false;
        if (i + 1 < starts.size() && !(end < Rational(starts[i + 1]) / n)) return false;
    }
    return true;
}

bool EqualPieceClass::eval_description(const std::vector<std::int64_t>& starts,
                                       std::uint64_t x) const {
    Rational v = dom_.point_value(x);
    for (std::int64_t j : starts) {
        Rational a(j, dom_.n);
        if (a <= v && v <= a + p_) return true;
    }
    return false;
}

std::string EqualPieceClass::description_str(
    const std::vector<std::int64_t>& starts) const {
    std::string s = "pieces[";
    for (std::size_t i = 0; i < starts.size(); ++i)
        s += (i ? "," : "") + Rational(starts[i], dom_.n).str();
    return s + "]";
}

std::uint64_t EqualPieceClass::recursive_count(int n, const Rational& p) {
    Rational pn = p * Rational(n);
    // T(j) = number of tuples (empty included) with every start >= j:
    // T(j) = T(j+1) + [start j admissible] * T(smallest j' > j + pn)
    std::vector<std::uint64_t> T((std::size_t)n + 2, 1);
    for (std::int64_t j = n; j >= 0; --j) {
        std::uint64_t t = T[(std::size_t)j + 1];
        if (Rational(j) + pn < Rational(n)) {
            std::int64_t next = (Rational(j) + pn).floor() + 1;
            t += T[(std::size_t)std::min<std::int64_t>(next, n + 1)];
        }
        T[(std::size_t)j] = t;
    }
    return T[0];
}

std::vector<std::uint64_t> EqualPieceClass::window_subset(bool contains_window,
                                                          const Rational& lo,
                                                          const Rational& hi) const {
    if (!enumerated_) throw input_error("window subset needs the enumerable family");
    std::vector<std::uint64_t> out;
    for (std::uint64_t h = 0; h < all_.size(); ++h) {
        bool cont = false, meets = false;
        for (std::int64_t j : all_[h]) {
            Rational a(j, dom_.n);
            Rational b = a + p_;
            if (a <= lo && hi <= b) cont = true;
            if (!(b < lo || hi < a)) meets = true;
        }
        if (contains_window ? cont : !meets) out.push_back(h);
    }
    return out;
}

// --- decision lists --------------------------------------------------------

DecisionList::DecisionList(int n_, std::vector<Level> lv, bool dflt)
    : n(n_), levels(std::move(lv)), default_bit(dflt) {
    std::vector<bool> used((std::size_t)n, false);
    for (const auto& l : levels) {
        if (l.lit.var < 0 || l.lit.var >= n)
            throw input_error("decision-list variable out of range");
        if (used[(std::size_t)l.lit.var])
            throw input_error("decision-list uses a variable twice");
        used[(std::size_t)l.lit.var] = true;
    }
}

std::string DecisionList::text() const {
    std::string s = "[";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        s += (i ? "," : "");
        s += "(" + levels[i].lit.str() + "," + (levels[i].out ? "1" : "0") + ")";
    }
    return s + "]:" + (default_bit ? "1" : "0");
}

DecisionList DecisionList::parse(int n, const std::string& text) {
    auto fail = [&] { throw input_error("bad decision-list text: " + text); };
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace((unsigned char)text[i])) ++i; };
    skip_ws();
    if (i >= text.size() || text[i] != '[') fail();
    ++i;
    std::vector<Level> levels;
    skip_ws();
    while (i < text.size() && text[i] != ']') {
        if (text[i] == ',') { ++i; skip_ws(); continue; }
        if (text[i] != '(') fail();
        ++i;
        skip_ws();
        if (i >= text.size() || (text[i] != '+' && text[i] != '-')) fail();
        bool neg = text[i] == '-';
        ++i;
        std::size_t start = i;
        while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
        if (start == i) fail();
        int var = std::stoi(text.substr(start, i - start)) - 1;
        skip_ws();
        if (i >= text.size() || text[i] != ',') fail();
        ++i;
        skip_ws();
        if (i >= text.size() || (text[i] != '0' && text[i] != '1')) fail();
        bool out = text[i] == '1';
        ++i;
        skip_ws();
        if (i >= text.size() || text[i] != ')') fail();
        ++i;
        skip_ws();
        levels.push_back({Literal{var, neg}, out});
    }
    if (i >= text.size() || text[i] != ']') fail();
    ++i;
    skip_ws();
    if (i >= text.size() || text[i] != ':') fail();
    ++i;
    skip_ws();
    if (i >= text.size() || (text[i] != '0' && text[i] != '1')) fail();
    bool dflt = text[i] == '1';
    return DecisionList(n, std::move(levels), dflt);
}

DecisionListClass::DecisionListClass(int n) : dom_(Domain::cube(n)) {
    if (n > 10) throw input_error("decision-list family too large to index");
    std::uint64_t c = 2; // default bit
    for (int i = 1; i <= n; ++i) c *= (std::uint64_t)i; // permutations
    for (int i = 0; i < n; ++i) c *= 2;                 // output bits
    for (int i = 0; i + 1 < n; ++i) c *= 2;             // negation flags (not the last level)
    count_ = c;
}

DecisionList DecisionListClass::decode(std::uint64_t h) const {
    check_index(h);
    int n = dom_.n;
    bool dflt = h & 1;
    h >>= 1;
    std::uint64_t outs = h & (((std::uint64_t)1 << n) - 1);
    h >>= n;
    std::uint64_t negs = n > 1 ? h & (((std::uint64_t)1 << (n - 1)) - 1) : 0;
    h >>= (n > 1 ? n - 1 : 0);
    // factorial-number-system decode of the variable permutation
    std::vector<int> avail(n);
    for (int i = 0; i < n; ++i) avail[i] = i;
    std::vector<DecisionList::Level> levels;
    std::uint64_t rank = h;
    for (int lvl = 0; lvl < n; ++lvl) {
        std::uint64_t fact = 1;
        for (int r = 2; r < n - lvl; ++r) fact *= (std::uint64_t)r;
        std::uint64_t pick = n - lvl > 1 ? rank / fact : 0;
        rank = n - lvl > 1 ? rank % fact : 0;
        int var = avail[pick];
        avail.erase(avail.begin() + (std::ptrdiff_t)pick);
        bool neg = lvl + 1 < n ? ((negs >> lvl) & 1) : false;
        bool out = (outs >> lvl) & 1;
        levels.push_back({Literal{var, neg}, out});
    }
    return DecisionList(n, std::move(levels), dflt);
}

} // namespace bml
