#include "bml/learners/threshold_learner.hpp"

#include "bml/errors.hpp"

namespace bml {

ThresholdLearner::ThresholdLearner(std::shared_ptr<const ThresholdClass> cls,
                                   Rational eps)
    : cls_(std::move(cls)), eps_(std::move(eps)) {
    if (!(eps_ > Rational(0))) throw input_error("eps must be positive");
    reset();
}

void ThresholdLearner::reset() {
    j1_ = 0;
    j2_ = 2 * (std::int64_t)cls_->domain().n;
    done_ = false;
    wait_ = 0;
    check_done();
}

void ThresholdLearner::check_done() {
    if (a2() - a1() <= eps_) done_ = true;
}

Rational ThresholdLearner::window_lo() const {
    return a1() + (a2() - a1()) / Rational(3);
}
Rational ThresholdLearner::window_hi() const {
    return a2() - (a2() - a1()) / Rational(3);
}

bool ThresholdLearner::step(const LabeledExample& ex) {
    if (done_) return true;
    const Domain& dom = cls_->domain();
    Rational lo = window_lo(), hi = window_hi();
    Rational x = dom.point_value(ex.x);
    if (!(lo <= x && x <= hi)) {
        // expected wait is |X| / |middle third|; 64x that and we give up
        std::int64_t pts = std::max<std::int64_t>(
            1, (hi * Rational(dom.n)).floor() - (lo * Rational(dom.n)).ceil() + 1);
        if (++wait_ > 64 * (std::uint64_t)((dom.n + pts - 1) / pts))
            throw non_termination("threshold learner starved of window examples");
        return false;
    }
    wait_ = 0;
    // label 0: cut below x, drop the upper third; label 1: drop the lower.
    // Snap outward to the 1/(2n) grid so the target stays inside.
    if (!ex.y)
        j2_ = (hi * Rational(2 * (std::int64_t)dom.n)).ceil();
    else
        j1_ = (lo * Rational(2 * (std::int64_t)dom.n)).floor();
    if (on_update) on_update(a1(), a2());
    check_done();
    return done_;
}

std::uint64_t ThresholdLearner::result() const {
    return cls_->nearest((a1() + a2()) / Rational(2));
}

std::string ThresholdLearner::result_text() const {
    return cls_->describe(result());
}

BitString ThresholdLearner::encode_state() const {
    BitWriter w;
    unsigned width = bits_for(2 * (std::uint64_t)cls_->domain().n);
    w.put_bit(done_);
    w.put((std::uint64_t)j1_, width);
    w.put((std::uint64_t)j2_, width);
    return w.take();
}

void ThresholdLearner::decode_state(const BitString& bs) {
    BitReader r(bs);
    unsigned width = bits_for(2 * (std::uint64_t)cls_->domain().n);
    done_ = r.get_bit();
    j1_ = (std::int64_t)r.get(width);
    j2_ = (std::int64_t)r.get(width);
    wait_ = 0;
}

std::uint64_t ThresholdLearner::semantic_bits() const {
    return 2 * bits_for(2 * (std::uint64_t)cls_->domain().n);
}

} // namespace bml
