#include "bml/graph_ops.hpp"

#include <bit>

namespace bml {

std::uint64_t edge_count(const HypothesisClass& cls, const ExampleSet& S,
                         std::uint64_t h) {
    cls.check_index(h);
    std::uint64_t e = 0;
    for (std::uint64_t x : S.expand(cls.domain()))
        if (cls.evaluate(h, x)) ++e;
    return e;
}

std::uint64_t edge_count(const HypothesisClass& cls, const ExampleSet& S,
                         const HypothesisSet& T) {
    std::uint64_t e = 0;
    auto pts = S.expand(cls.domain());
    for (std::uint64_t h : T.expand()) {
        cls.check_index(h);
        for (std::uint64_t x : pts)
            if (cls.evaluate(h, x)) ++e;
    }
    return e;
}

Rational density(const HypothesisClass& cls, const ExampleSet& S,
                 const HypothesisSet& T) {
    std::uint64_t s = S.size(cls.domain());
    std::uint64_t t = T.size();
    if (s == 0 || t == 0) throw input_error("density over an empty set");
    return Rational((std::int64_t)edge_count(cls, S, T),
                    (std::int64_t)(s * t));
}

Rational density(const HypothesisClass& cls, const ExampleSet& S, std::uint64_t h) {
    std::uint64_t s = S.size(cls.domain());
    if (s == 0) throw input_error("density over an empty set");
    return Rational((std::int64_t)edge_count(cls, S, h), (std::int64_t)s);
}

Rational distance(const HypothesisClass& cls, std::uint64_t h1, std::uint64_t h2) {
    cls.check_index(h1);
    cls.check_index(h2);
    std::uint64_t m = cls.domain().size();
    std::uint64_t diff = 0;
    for (std::uint64_t x = 0; x < m; ++x)
        if (cls.evaluate(h1, x) != cls.evaluate(h2, x)) ++diff;
    return Rational((std::int64_t)diff, (std::int64_t)m);
}

std::vector<std::uint64_t> ball(const HypothesisClass& cls, std::uint64_t center,
                                const Rational& eps) {
    cls.check_index(center);
    std::vector<std::uint64_t> out;
    auto cw = cls.labels(center);
    std::uint64_t m = cls.domain().size();
    for (std::uint64_t h = 0; h < cls.count(); ++h) {
        auto hw = cls.labels(h);
        std::uint64_t diff = 0;
        for (std::size_t w = 0; w < hw.size(); ++w)
            diff += (std::uint64_t)std::popcount(cw[w] ^ hw[w]);
        if (Rational((std::int64_t)diff, (std::int64_t)m) <= eps) out.push_back(h);
    }
    return out;
}

LabelTable::LabelTable(const HypothesisClass& cls,
                       const std::vector<std::uint64_t>& hs) {
    rows_ = hs.size();
    words_ = (cls.domain().size() + 63) / 64;
    bits_.resize(rows_ * words_);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto w = cls.labels(hs[i]);
        std::copy(w.begin(), w.end(), bits_.begin() + (std::ptrdiff_t)(i * words_));
    }
}

std::uint64_t LabelTable::disagreements(std::size_t i, std::size_t j) const {
    std::uint64_t d = 0;
    const std::uint64_t* a = bits_.data() + i * words_;
    const std::uint64_t* b = bits_.data() + j * words_;
    for (std::size_t w = 0; w < words_; ++w)
        d += (std::uint64_t)std::popcount(a[w] ^ b[w]);
    return d;
}

std::uint64_t LabelTable::disagreements_with(
    std::size_t i, const std::vector<std::uint64_t>& other) const {
    std::uint64_t d = 0;
    const std::uint64_t* a = bits_.data() + i * words_;
    for (std::size_t w = 0; w < words_; ++w)
        d += (std::uint64_t)std::popcount(a[w] ^ other[w]);
    return d;
}

std::uint64_t LabelTable::ones(std::size_t i,
                               const std::vector<std::uint64_t>& mask) const {
    std::uint64_t d = 0;
    const std::uint64_t* a = bits_.data() + i * words_;
    for (std::size_t w = 0; w < words_ && w < mask.size(); ++w)
        d += (std::uint64_t)std::popcount(a[w] & mask[w]);
    return d;
}

std::vector<std::uint64_t> point_mask(const Domain& d, const ExampleSet& S) {
    std::vector<std::uint64_t> mask((d.size() + 63) / 64, 0);
    for (std::uint64_t x : S.expand(d)) mask[x / 64] |= (std::uint64_t)1 << (x % 64);
    return mask;
}

std::optional<std::uint64_t> tight_center(const HypothesisClass& cls,
                                          const std::vector<std::uint64_t>& T,
                                          const Rational& alpha,
                                          const Rational& eps,
                                          Exec exec) {
    if (T.empty()) throw input_error("tightness query over empty T");
    if (!(alpha > Rational(0) && alpha <= Rational(1)))
        throw input_error("alpha must be in (0,1]");
    const std::uint64_t m = cls.domain().size();
    LabelTable table(cls, T);

    // |T intersect B_h(eps)| >= alpha |T|, all comparisons exact:
    // member iff diff * eps.den <= eps.num * m; covered * alpha.den >= alpha.num * |T|.
    auto test_center = [&](std::int64_t h) -> bool {
        auto hw = cls.labels((std::uint64_t)h);
        std::int64_t covered = 0;
        for (std::size_t i = 0; i < T.size(); ++i) {
            std::uint64_t diff = table.disagreements_with(i, hw);
            if ((__int128)diff * eps.den() <= (__int128)eps.num() * m) ++covered;
        }
        return (__int128)covered * alpha.den() >=
               (__int128)alpha.num() * (std::int64_t)T.size();
    };

    const std::int64_t n_count = (std::int64_t)cls.count();
    if (exec == Exec::serial) {
        for (std::int64_t h = 0; h < n_count; ++h)
            if (test_center(h)) return (std::uint64_t)h;
        return std::nullopt;
    }

    std::int64_t found = n_count; // lowest qualifying index, n_count = none
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t h = 0; h < n_count; ++h) {
        std::int64_t cur;
#pragma omp atomic read
        cur = found;
        if (h > cur) continue;
        if (test_center(h)) {
#pragma omp critical(bml_tight_center)
            if (h < found) found = h;
        }
    }
    if (found == n_count) return std::nullopt;
    return (std::uint64_t)found;
}

} // namespace bml
