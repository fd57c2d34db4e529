#pragma once

#include <functional>
#include <random>

#include "bml/hypothesis_class.hpp"

namespace bml {

struct LabeledExample {
    std::uint64_t x = 0;
    bool y = false;
};

// Uniform i.i.d. labeled examples with a hidden target and optional
// classification noise (each label flipped independently with probability
// eta).  The draw counter is the sample-complexity meter.  All randomness
// comes from an owned mt19937_64 through rejection sampling, so a (seed,
// class, target, eta) tuple fully determines the example sequence on any
// platform.  Single-owner mutable: each trial gets its own stream.
class Stream {
public:
    Stream(ClassPtr cls, std::uint64_t target, Rational eta, std::uint64_t seed)
        : cls_(std::move(cls)), target_(target), eta_(std::move(eta)), rng_(seed) {
        cls_->check_index(target_);
        if (!(eta_ >= Rational(0) && eta_ < Rational(1, 2)))
            throw input_error("noise rate must be in [0, 1/2)");
    }

    // Target given as an evaluation function instead of a family index
    // (explicit equal-piece / decision-list descriptions).
    Stream(ClassPtr cls, std::function<bool(std::uint64_t)> target_fn, Rational eta,
           std::uint64_t seed)
        : cls_(std::move(cls)), target_fn_(std::move(target_fn)),
          eta_(std::move(eta)), rng_(seed) {
        if (!(eta_ >= Rational(0) && eta_ < Rational(1, 2)))
            throw input_error("noise rate must be in [0, 1/2)");
    }

    LabeledExample draw() {
        std::uint64_t x = uniform_below(cls_->domain().size());
        bool y = target_label(x);
        if (eta_.num() > 0 &&
            (std::int64_t)uniform_below((std::uint64_t)eta_.den()) < eta_.num())
            y = !y;
        ++draws_;
        return {x, y};
    }

    bool target_label(std::uint64_t x) const {
        return target_fn_ ? target_fn_(x) : cls_->evaluate(target_, x);
    }

    const HypothesisClass& hypothesis_class() const { return *cls_; }
    const Rational& eta() const { return eta_; }
    std::uint64_t draws() const { return draws_; }

private:
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw input_error("uniform draw over empty range");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do { r = rng_(); } while (r >= limit);
        return r % n;
    }

    ClassPtr cls_;
    std::uint64_t target_ = 0;
    std::function<bool(std::uint64_t)> target_fn_;
    Rational eta_;
    std::mt19937_64 rng_;
    std::uint64_t draws_ = 0;
};

} // namespace bml
