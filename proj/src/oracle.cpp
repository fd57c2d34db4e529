#include "bml/oracle.hpp"

#include <algorithm>
#include <random>

#include "bml/classes/equal_piece.hpp"

namespace bml {

namespace {

constexpr std::uint64_t kExhaustiveCap = 24;

struct SortedEdges {
    // (edge count, hypothesis) ascending; deterministic tie-break by index.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> by_count;
    std::uint64_t s_size = 0;
};

SortedEdges sorted_edges(const HypothesisClass& cls, const LabelTable& table,
                         const std::vector<std::uint64_t>& T,
                         const ExampleSet& S) {
    SortedEdges out;
    out.s_size = S.size(cls.domain());
    auto mask = point_mask(cls.domain(), S);
    out.by_count.reserve(T.size());
    for (std::size_t i = 0; i < T.size(); ++i)
        out.by_count.emplace_back(table.ones(i, mask), T[i]);
    std::sort(out.by_count.begin(), out.by_count.end());
    return out;
}

std::vector<std::uint64_t> take_hyps(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& v,
    std::size_t from, std::size_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    for (std::size_t i = from; i < from + count; ++i) out.push_back(v[i].second);
    return out;
}

} // namespace

void validate_witness(const HypothesisClass& cls,
                      const std::vector<std::uint64_t>& T, const Rational& alpha,
                      const SeparationWitness& w, const WitnessChecks& checks) {
    const Domain& dom = cls.domain();
    auto t0 = w.T0.expand();
    auto t1 = w.T1.expand();
    if (t0.empty() || t1.empty()) throw contract_error("witness side is empty");
    std::vector<std::uint64_t> tsorted = T;
    std::sort(tsorted.begin(), tsorted.end());
    for (std::uint64_t h : t0)
        if (!std::binary_search(tsorted.begin(), tsorted.end(), h))
            throw contract_error("T0 not contained in T");
    for (std::uint64_t h : t1)
        if (!std::binary_search(tsorted.begin(), tsorted.end(), h))
            throw contract_error("T1 not contained in T");
    for (std::uint64_t h : t1)
        if (std::binary_search(t0.begin(), t0.end(), h))
            throw contract_error("T0 and T1 intersect");

    std::uint64_t s_size = w.S.size(dom);
    if (s_size == 0) throw contract_error("witness S is empty");

    if (checks.size_floors) {
        if ((__int128)s_size * alpha.den() < (__int128)alpha.num() * dom.size())
            throw contract_error("witness S below the alpha |X| floor");
        std::int64_t m = std::max<std::int64_t>(
            1, ceil_mul(alpha * alpha / Rational(2), (std::int64_t)T.size()));
        if ((std::int64_t)t0.size() < m || (std::int64_t)t1.size() < m)
            throw contract_error("witness side below the alpha^2 |T| / 2 floor");
    }
    if (checks.pointwise) {
        if (!(w.d1 - w.d0 >= alpha / Rational(4) * Rational((std::int64_t)s_size)))
            throw contract_error("witness gap below (alpha/4) |S|");
        for (std::uint64_t h : t0)
            if (!(Rational((std::int64_t)edge_count(cls, w.S, h)) <= w.d0))
                throw contract_error("T0 member exceeds d0");
        for (std::uint64_t h : t1)
            if (!(Rational((std::int64_t)edge_count(cls, w.S, h)) >= w.d1))
                throw contract_error("T1 member under d1");
    }
}

SCandidates::SCandidates(const Domain& d, bool exhaustive) : dom_(d) {
    structured_.push_back(ExampleSet::full());
    if (d.kind == Domain::Kind::unit_grid) {
        // closed index ranges [i..j], longest first, then leftmost
        for (int len = d.n; len >= 1; --len)
            for (int i = 0; i + len <= d.n; ++i)
                structured_.push_back(ExampleSet::range(d.point_value((std::uint64_t)i),
                                                        d.point_value((std::uint64_t)(i + len - 1))));
    } else {
        // literal restrictions, fewest literals (largest S) first
        int n = d.n;
        for (int k = 1; k <= n; ++k) {
            std::vector<int> combo(k);
            for (int i = 0; i < k; ++i) combo[i] = i;
            while (true) {
                for (std::uint64_t signs = 0; signs < ((std::uint64_t)1 << k); ++signs) {
                    std::vector<Literal> lits;
                    for (int i = 0; i < k; ++i)
                        lits.push_back({combo[i], ((signs >> i) & 1) != 0});
                    structured_.push_back(ExampleSet::restriction(std::move(lits)));
                }
                int pos = k - 1;
                while (pos >= 0 && combo[pos] == n - k + pos) --pos;
                if (pos < 0) break;
                ++combo[pos];
                for (int i = pos + 1; i < k; ++i) combo[i] = combo[i - 1] + 1;
            }
        }
    }
    if (exhaustive) {
        if (d.size() > kExhaustiveCap)
            throw input_error("domain too large for exhaustive search");
        mask_count_ = (std::uint64_t)1 << d.size();
    }
}

ExampleSet SCandidates::get(std::uint64_t rank) const {
    if (rank < structured_.size()) return structured_[rank];
    std::uint64_t mask = rank - structured_.size();
    std::vector<std::uint64_t> pts;
    for (std::uint64_t x = 0; x < dom_.size(); ++x)
        if ((mask >> x) & 1) pts.push_back(x);
    return ExampleSet::explicit_set(std::move(pts));
}

SeparabilityVerdict check_separability(const HypothesisClass& cls,
                                       const std::vector<std::uint64_t>& T,
                                       const Rational& alpha, const Rational& eps,
                                       std::optional<SampledSearch> sampled,
                                       SearchOrder order, Exec exec) {
    if (T.empty()) throw input_error("empty candidate set");
    if (!sampled && (T.size() > kExhaustiveCap || cls.domain().size() > kExhaustiveCap))
        throw input_error("instance too large for exhaustive separability check");

    if (auto center = tight_center(cls, T, alpha, eps, exec)) {
        SeparabilityVerdict v;
        v.kind = SeparabilityVerdict::Kind::tight;
        v.center = *center;
        return v;
    }

    const Domain& dom = cls.domain();
    LabelTable table(cls, T);
    const std::int64_t N = (std::int64_t)T.size();
    const std::int64_t m = std::max<std::int64_t>(1, ceil_mul(alpha, N));
    const std::int64_t s_floor = std::max<std::int64_t>(1, ceil_mul(alpha, (std::int64_t)dom.size()));

    auto try_candidate = [&](const ExampleSet& S) -> std::optional<SeparabilityVerdict> {
        if (2 * m > N) return std::nullopt;
        std::uint64_t s_size = S.size(dom);
        if ((std::int64_t)s_size < s_floor) return std::nullopt;
        auto se = sorted_edges(cls, table, T, S);
        __int128 bot = 0, top = 0;
        for (std::int64_t i = 0; i < m; ++i) {
            bot += se.by_count[(std::size_t)i].first;
            top += se.by_count[(std::size_t)(N - 1 - i)].first;
        }
        // d(S,T1) - d(S,T0) >= alpha  <=>  (top - bot) alpha.den >= alpha.num m |S|
        if ((top - bot) * alpha.den() < (__int128)alpha.num() * m * s_size)
            return std::nullopt;
        SeparabilityVerdict v;
        v.kind = SeparabilityVerdict::Kind::witness;
        v.S = S;
        v.T0 = HypothesisSet::explicit_set(take_hyps(se.by_count, 0, (std::size_t)m));
        v.T1 = HypothesisSet::explicit_set(
            take_hyps(se.by_count, (std::size_t)(N - m), (std::size_t)m));
        v.gap = Rational((std::int64_t)(top - bot), m * (std::int64_t)s_size);
        return v;
    };

    if (sampled) {
        SCandidates cands(dom, false);
        std::mt19937_64 rng(sampled->seed);
        std::uint64_t budget = sampled->budget;
        for (std::uint64_t r = 0; r < cands.structured_count() && budget > 0; ++r, --budget)
            if (auto v = try_candidate(cands.get(r))) return *v;
        std::uint64_t msize = dom.size();
        while (budget-- > 0) {
            std::vector<std::uint64_t> pts;
            for (std::uint64_t x = 0; x < msize; ++x)
                if (rng() & 1) pts.push_back(x);
            if (auto v = try_candidate(ExampleSet::explicit_set(std::move(pts)))) return *v;
        }
        SeparabilityVerdict v;
        v.kind = SeparabilityVerdict::Kind::counterexample;
        return v;
    }

    SCandidates cands(dom, true);
    const std::uint64_t total = cands.total();
    if (order == SearchOrder::reverse) {
        for (std::uint64_t r = total; r-- > 0;)
            if (auto v = try_candidate(cands.get(r))) return *v;
    } else if (exec == Exec::serial) {
        for (std::uint64_t r = 0; r < total; ++r)
            if (auto v = try_candidate(cands.get(r))) return *v;
    } else {
        // block-parallel scan, lowest qualifying rank wins
        const std::uint64_t block = 8192;
        for (std::uint64_t base = 0; base < total; base += block) {
            const std::int64_t hi = (std::int64_t)std::min(total, base + block);
            std::int64_t best = -1;
#pragma omp parallel for schedule(dynamic, 64)
            for (std::int64_t r = (std::int64_t)base; r < hi; ++r) {
                std::int64_t cur;
#pragma omp atomic read
                cur = best;
                if (cur >= 0 && r > cur) continue;
                if (try_candidate(cands.get((std::uint64_t)r))) {
#pragma omp critical(bml_sep_scan)
                    if (best < 0 || r < best) best = r;
                }
            }
            if (best >= 0) return *try_candidate(cands.get((std::uint64_t)best));
        }
    }
    SeparabilityVerdict v;
    v.kind = SeparabilityVerdict::Kind::counterexample;
    return v;
}

SeparationWitness localize_witness(const HypothesisClass& cls, const ExampleSet& S,
                                   const std::vector<std::uint64_t>& T,
                                   const Rational& alpha) {
    if (T.empty()) throw input_error("empty candidate set");
    LabelTable table(cls, T);
    auto se = sorted_edges(cls, table, T, S);
    const std::int64_t N = (std::int64_t)T.size();
    const std::int64_t m =
        std::max<std::int64_t>(1, ceil_mul(alpha * alpha / Rational(2), N));
    if (2 * m > N) throw contract_error("candidate set too small to split");
    SeparationWitness w;
    w.S = S;
    w.T0 = HypothesisSet::explicit_set(take_hyps(se.by_count, 0, (std::size_t)m));
    w.T1 = HypothesisSet::explicit_set(
        take_hyps(se.by_count, (std::size_t)(N - m), (std::size_t)m));
    w.d0 = Rational((std::int64_t)se.by_count[(std::size_t)(m - 1)].first);
    w.d1 = Rational((std::int64_t)se.by_count[(std::size_t)(N - m)].first);
    if (!(w.d1 - w.d0 >= alpha / Rational(4) * Rational((std::int64_t)se.s_size)))
        throw contract_error("localized gap below (alpha/4) |S|; S does not separate T");
    return w;
}

OracleResponse brute_force_oracle(const HypothesisClass& cls,
                                  const std::vector<std::uint64_t>& T,
                                  const Rational& alpha, const Rational& eps,
                                  Exec exec) {
    if (T.empty()) throw input_error("empty candidate set");
    if (auto center = tight_center(cls, T, alpha, eps, exec))
        return OracleResponse::make_tight(*center, cls.describe(*center));

    const Domain& dom = cls.domain();
    if (dom.size() > kExhaustiveCap)
        throw input_error("domain too large for the brute-force oracle");
    LabelTable table(cls, T);
    const std::int64_t N = (std::int64_t)T.size();
    const std::int64_t m =
        std::max<std::int64_t>(1, ceil_mul(alpha * alpha / Rational(2), N));
    if (2 * m > N)
        throw contract_error("non-tight candidate set too small to split");

    SCandidates cands(dom, true);
    for (std::uint64_t r = 0; r < cands.total(); ++r) {
        ExampleSet S = cands.get(r);
        std::uint64_t s_size = S.size(dom);
        if ((__int128)s_size * alpha.den() < (__int128)alpha.num() * dom.size())
            continue;
        auto se = sorted_edges(cls, table, T, S);
        std::uint64_t d0 = se.by_count[(std::size_t)(m - 1)].first;
        std::uint64_t d1 = se.by_count[(std::size_t)(N - m)].first;
        if ((__int128)(d1 - d0) * 4 * alpha.den() >= (__int128)alpha.num() * s_size &&
            d1 > d0) {
            SeparationWitness w;
            w.S = std::move(S);
            w.T0 = HypothesisSet::explicit_set(take_hyps(se.by_count, 0, (std::size_t)m));
            w.T1 = HypothesisSet::explicit_set(
                take_hyps(se.by_count, (std::size_t)(N - m), (std::size_t)m));
            w.d0 = Rational((std::int64_t)d0);
            w.d1 = Rational((std::int64_t)d1);
            return OracleResponse::make_separated(std::move(w));
        }
    }
    throw contract_error("no tightness proof and no separation witness found");
}

OracleResponse threshold_interval_oracle(const ThresholdClass& cls,
                                         const ThresholdInterval& t,
                                         const Rational& eps) {
    if (!(t.a1 < t.a2)) throw input_error("degenerate threshold interval");
    Rational len = t.a2 - t.a1;
    if (len <= eps) {
        std::uint64_t h = cls.nearest((t.a1 + t.a2) / Rational(2));
        return OracleResponse::make_tight(h, cls.describe(h));
    }
    Rational third = len / Rational(3);
    Rational s_lo = t.a1 + third;
    Rational s_hi = t.a2 - third;
    ExampleSet S = ExampleSet::range(s_lo, s_hi);
    std::uint64_t s_size = S.size(cls.domain());
    if (s_size == 0) throw contract_error("middle third holds no grid point");

    // cut values (2i+1)/(2n): T0 = cuts in [a1, s_lo), T1 = cuts in (s_hi, a2]
    std::int64_t two_n = 2 * (std::int64_t)cls.domain().n;
    auto cut_ge = [&](const Rational& v) { // smallest i with (2i+1)/(2n) >= v
        return ((v * Rational(two_n) - Rational(1)) / Rational(2)).ceil();
    };
    auto cut_gt = [&](const Rational& v) { // smallest i with (2i+1)/(2n) > v
        Rational bound = (v * Rational(two_n) - Rational(1)) / Rational(2);
        return bound.is_integer() ? bound.floor() + 1 : bound.ceil();
    };
    std::int64_t lo0 = std::max<std::int64_t>(0, cut_ge(t.a1));
    std::int64_t hi0 = cut_ge(s_lo) - 1; // largest i with cut < s_lo
    std::int64_t lo1 = cut_gt(s_hi);
    std::int64_t hi1 = std::min<std::int64_t>((std::int64_t)cls.count() - 1,
                                              cut_gt(t.a2) - 1);
    if (hi0 < lo0 || hi1 < lo1)
        throw contract_error("interval third holds no cut value");
    SeparationWitness w;
    w.S = std::move(S);
    w.T0 = HypothesisSet::range((std::uint64_t)lo0, (std::uint64_t)hi0);
    w.T1 = HypothesisSet::range((std::uint64_t)lo1, (std::uint64_t)hi1);
    w.d0 = Rational(0);
    w.d1 = Rational((std::int64_t)s_size);
    return OracleResponse::make_separated(std::move(w));
}

OracleResponse equal_piece_oracle(const EqualPieceClass& cls, const EpScanState& st,
                                  const Rational& alpha) {
    Rational half = alpha / Rational(2);
    if (!(st.jump < Rational(1))) {
        std::string text = "pieces[";
        for (std::size_t i = 0; i < st.starts.size(); ++i)
            text += (i ? "," : "") + st.starts[i].str();
        return OracleResponse::make_tight(0, text + "]");
    }
    Rational hi = st.jump + half;
    if (hi > Rational(1)) hi = Rational(1);
    ExampleSet S = ExampleSet::range(st.jump, hi);
    std::uint64_t s_size = S.size(cls.domain());
    if (s_size == 0) throw contract_error("scan window holds no grid point");
    SeparationWitness w;
    w.S = std::move(S);
    w.T0 = HypothesisSet::symbolic("ep-avoids[" + st.jump.str() + "," + hi.str() + "]");
    w.T1 = HypothesisSet::symbolic("ep-contains[" + st.jump.str() + "," + hi.str() + "]");
    w.d0 = Rational(0);
    w.d1 = Rational((std::int64_t)s_size);
    return OracleResponse::make_separated(std::move(w));
}

} // namespace bml
