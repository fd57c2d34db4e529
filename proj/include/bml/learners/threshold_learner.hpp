#pragma once

#include <functional>

#include "bml/classes/threshold.hpp"
#include "bml/streaming.hpp"

namespace bml {

// Interval-trisection learner for thresholds.  Keeps [a1, a2] as two indices
// on the 1/(2n) grid; while the interval is longer than eps, it waits for an
// example in the middle third and discards the outer third inconsistent with
// the observed label.  Snapping is outward, so the cut of a noiseless target
// never leaves the interval by more than one grid cell.  State is the two
// indices; the rejection-wait counter is instrumentation and is not charged.
class ThresholdLearner final : public StreamingLearner {
public:
    ThresholdLearner(std::shared_ptr<const ThresholdClass> cls, Rational eps);

    void reset() override;
    bool finished() const override { return done_; }
    bool step(const LabeledExample& ex) override;
    BitString encode_state() const override;
    std::uint64_t semantic_bits() const override;
    std::string name() const override { return "threshold-learner"; }
    std::string result_text() const override;

    std::uint64_t result() const; // hypothesis index at the midpoint
    // decode an encoded state into this learner (round-trip testing)
    void decode_state(const BitString& bs);

    // invariant probe: called after every interval update with (a1, a2)
    std::function<void(const Rational&, const Rational&)> on_update;

private:
    Rational a1() const { return Rational(j1_, 2 * (std::int64_t)cls_->domain().n); }
    Rational a2() const { return Rational(j2_, 2 * (std::int64_t)cls_->domain().n); }
    Rational window_lo() const;
    Rational window_hi() const;
    void check_done();

    std::shared_ptr<const ThresholdClass> cls_;
    Rational eps_;
    std::int64_t j1_ = 0, j2_ = 0; // interval bounds, denominator 2n
    bool done_ = false;
    std::uint64_t wait_ = 0; // draws since the window last produced a hit
};

} // namespace bml
