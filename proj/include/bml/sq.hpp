#pragma once

#include <functional>
#include <random>

#include "bml/hypothesis_class.hpp"
#include "bml/subsets.hpp"

namespace bml {

// A statistical query: a total binary predicate over labeled examples.
struct SQQuery {
    std::function<bool(std::uint64_t x, bool y)> psi;
    std::string name;
};

// Answers E[psi(x, y)] within an additive tolerance tau, for x uniform and
// y the target label flipped with probability eta.
//
// Backends: `exact_adversarial` computes the exact expectation by
// enumeration and adds a seeded perturbation of magnitude <= tau (zero
// perturbation gives exact answers, the deterministic-replay mode);
// `sampled` answers from enough Monte Carlo draws for the tolerance.
class SQOracle {
public:
    enum class Backend { exact_adversarial, sampled };

    SQOracle(ClassPtr cls, std::uint64_t target, Rational eta, Rational tau,
             Backend backend, std::uint64_t seed, bool zero_perturbation = false);
    SQOracle(ClassPtr cls, std::function<bool(std::uint64_t)> target_fn, Rational eta,
             Rational tau, Backend backend, std::uint64_t seed,
             bool zero_perturbation = false);

    Rational answer(const SQQuery& q);

    const HypothesisClass& hypothesis_class() const { return *cls_; }
    const Rational& eta() const { return eta_; }
    const Rational& tau() const { return tau_; }
    std::uint64_t queries() const { return queries_; }
    bool exact_zero() const {
        return backend_ == Backend::exact_adversarial && zero_perturbation_;
    }

    bool target_label(std::uint64_t x) const {
        return target_fn_ ? target_fn_(x) : cls_->evaluate(target_, x);
    }

    // Replay oracle: exact expectations, no perturbation, no noise.
    static SQOracle exact_replay(ClassPtr cls, std::uint64_t target);
    static SQOracle exact_replay(ClassPtr cls, std::function<bool(std::uint64_t)> fn);

private:
    Rational exact_expectation(const SQQuery& q) const;

    ClassPtr cls_;
    std::uint64_t target_ = 0;
    std::function<bool(std::uint64_t)> target_fn_;
    Rational eta_, tau_;
    Backend backend_;
    bool zero_perturbation_ = false;
    std::mt19937_64 rng_;
    std::uint64_t queries_ = 0;
};

// One-query closeness test: asks [h(x) = y] and inverts the known noise
// rate; under the exact zero-perturbation backend this equals
// [distance(h, f) <= 2 eps] exactly.
bool is_close_sq(SQOracle& oracle, const std::function<bool(std::uint64_t)>& h,
                 const Rational& eps);
bool is_close_sq(SQOracle& oracle, std::uint64_t h, const Rational& eps);

// One-query density estimate: asks [x in S and y = 1] and rescales by
// |X| / |S|.  Requires oracle tolerance <= tau |S| / |X|.
Rational estimate_sq(SQOracle& oracle, const ExampleSet& S, const Rational& tau);

} // namespace bml
