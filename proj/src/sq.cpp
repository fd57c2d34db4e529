#include "bml/sq.hpp"

#include <cmath>

#include "bml/errors.hpp"

namespace bml {

SQOracle::SQOracle(ClassPtr cls, std::uint64_t target, Rational eta, Rational tau,
                   Backend backend, std::uint64_t seed, bool zero_perturbation)
    : cls_(std::move(cls)), target_(target), eta_(std::move(eta)),
      tau_(std::move(tau)), backend_(backend), zero_perturbation_(zero_perturbation),
      rng_(seed) {
    cls_->check_index(target_);
    if (!(tau_ > Rational(0))) throw input_error("tau must be positive");
    if (!(eta_ >= Rational(0) && eta_ < Rational(1, 2)))
        throw input_error("noise rate must be in [0, 1/2)");
}

SQOracle::SQOracle(ClassPtr cls, std::function<bool(std::uint64_t)> target_fn,
                   Rational eta, Rational tau, Backend backend, std::uint64_t seed,
                   bool zero_perturbation)
    : cls_(std::move(cls)), target_fn_(std::move(target_fn)), eta_(std::move(eta)),
      tau_(std::move(tau)), backend_(backend), zero_perturbation_(zero_perturbation),
      rng_(seed) {
    if (!(tau_ > Rational(0))) throw input_error("tau must be positive");
    if (!(eta_ >= Rational(0) && eta_ < Rational(1, 2)))
        throw input_error("noise rate must be in [0, 1/2)");
}

SQOracle SQOracle::exact_replay(ClassPtr cls, std::uint64_t target) {
    return SQOracle(std::move(cls), target, Rational(0), Rational(1, 1000000000),
                    Backend::exact_adversarial, 0, true);
}
SQOracle SQOracle::exact_replay(ClassPtr cls, std::function<bool(std::uint64_t)> fn) {
    return SQOracle(std::move(cls), std::move(fn), Rational(0),
                    Rational(1, 1000000000), Backend::exact_adversarial, 0, true);
}

Rational SQOracle::exact_expectation(const SQQuery& q) const {
    std::uint64_t m = cls_->domain().size();
    std::uint64_t plain = 0, flipped = 0;
    for (std::uint64_t x = 0; x < m; ++x) {
        bool fx = target_label(x);
        if (q.psi(x, fx)) ++plain;
        if (q.psi(x, !fx)) ++flipped;
    }
    Rational one_minus(eta_.den() - eta_.num(), eta_.den());
    return (one_minus * Rational((std::int64_t)plain) +
            eta_ * Rational((std::int64_t)flipped)) /
           Rational((std::int64_t)m);
}

Rational SQOracle::answer(const SQQuery& q) {
    ++queries_;
    if (backend_ == Backend::exact_adversarial) {
        Rational e = exact_expectation(q);
        if (!zero_perturbation_) {
            constexpr std::int64_t R = 16;
            std::int64_t r = (std::int64_t)(rng_() % (2 * R + 1)) - R;
            e += tau_ * Rational(r, R);
        }
        if (e < Rational(0)) return Rational(0);
        if (e > Rational(1)) return Rational(1);
        return e;
    }
    // sampled: Hoeffding-sized Monte Carlo at confidence 0.99 per query
    double t = tau_.to_double();
    std::uint64_t m = (std::uint64_t)std::ceil(std::log(2.0 / 0.01) / (2 * t * t));
    std::uint64_t dsize = cls_->domain().size();
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % dsize;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint64_t r;
        do { r = rng_(); } while (r >= limit);
        std::uint64_t x = r % dsize;
        bool y = target_label(x);
        if (eta_.num() > 0) {
            std::uint64_t el = UINT64_MAX - UINT64_MAX % (std::uint64_t)eta_.den();
            std::uint64_t e;
            do { e = rng_(); } while (e >= el);
            if ((std::int64_t)(e % (std::uint64_t)eta_.den()) < eta_.num()) y = !y;
        }
        if (q.psi(x, y)) ++hits;
    }
    return Rational((std::int64_t)hits, (std::int64_t)m);
}

bool is_close_sq(SQOracle& oracle, const std::function<bool(std::uint64_t)>& h,
                 const Rational& eps) {
    SQQuery q{[&](std::uint64_t x, bool y) { return h(x) == y; }, "agree"};
    Rational a = oracle.answer(q);
    const Rational& eta = oracle.eta();
    // E[psi] = 1 - eta - (1 - 2 eta) d
    Rational d = (Rational(1) - eta - a) / (Rational(1) - Rational(2) * eta);
    return d <= Rational(2) * eps;
}

bool is_close_sq(SQOracle& oracle, std::uint64_t h, const Rational& eps) {
    const HypothesisClass& cls = oracle.hypothesis_class();
    cls.check_index(h);
    return is_close_sq(oracle, [&](std::uint64_t x) { return cls.evaluate(h, x); },
                       eps);
}

Rational estimate_sq(SQOracle& oracle, const ExampleSet& S, const Rational& tau) {
    const Domain& dom = oracle.hypothesis_class().domain();
    std::uint64_t s_size = S.size(dom);
    if (s_size == 0) throw input_error("estimate over an empty set");
    Rational weight((std::int64_t)s_size, (std::int64_t)dom.size());
    if (!(oracle.tau() <= tau * weight))
        throw input_error("oracle tolerance too coarse for the requested tau");
    SQQuery q{[&](std::uint64_t x, bool y) { return y && S.contains(dom, x); },
              "in-set-positive"};
    Rational a = oracle.answer(q);
    Rational raw = a / weight;
    const Rational& eta = oracle.eta();
    Rational d = (raw - eta) / (Rational(1) - Rational(2) * eta);
    if (d < Rational(0)) return Rational(0);
    if (d > Rational(1)) return Rational(1);
    return d;
}

} // namespace bml
