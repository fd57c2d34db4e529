#include "bml/learners/general_learner.hpp"

#include <algorithm>
#include <cmath>

namespace bml {

BitsetDriver::BitsetDriver(ClassPtr cls, Rational alpha, Rational eps, Exec exec)
    : cls_(std::move(cls)), alpha_(std::move(alpha)), eps_(std::move(eps)),
      exec_(exec) {
    reset();
}

void BitsetDriver::reset() {
    t_.resize(cls_->count());
    for (std::uint64_t h = 0; h < cls_->count(); ++h) t_[h] = h;
}

OracleResponse BitsetDriver::respond() {
    return brute_force_oracle(*cls_, t_, alpha_, eps_, exec_);
}

void BitsetDriver::delete_ball(std::uint64_t center, const Rational& eps) {
    auto b = ball(*cls_, center, eps);
    std::vector<std::uint64_t> keep;
    keep.reserve(t_.size());
    for (std::uint64_t h : t_)
        if (!std::binary_search(b.begin(), b.end(), h)) keep.push_back(h);
    t_ = std::move(keep);
}

void BitsetDriver::delete_half(const SeparationWitness& w, bool delete_t1) {
    auto gone = (delete_t1 ? w.T1 : w.T0).expand();
    std::vector<std::uint64_t> keep;
    keep.reserve(t_.size());
    for (std::uint64_t h : t_)
        if (!std::binary_search(gone.begin(), gone.end(), h)) keep.push_back(h);
    t_ = std::move(keep);
}

void BitsetDriver::encode(BitWriter& w) const {
    std::uint64_t n = cls_->count();
    std::size_t i = 0;
    for (std::uint64_t h = 0; h < n; ++h) {
        bool in = i < t_.size() && t_[i] == h;
        w.put_bit(in);
        if (in) ++i;
    }
}

void BitsetDriver::decode(BitReader& r) {
    t_.clear();
    for (std::uint64_t h = 0; h < cls_->count(); ++h)
        if (r.get_bit()) t_.push_back(h);
}

IntervalDriver::IntervalDriver(std::shared_ptr<const ThresholdClass> cls,
                               Rational eps)
    : cls_(std::move(cls)), eps_(std::move(eps)) {
    reset();
}

void IntervalDriver::reset() {
    j1_ = 0;
    j2_ = 2 * (std::int64_t)cls_->domain().n;
}

OracleResponse IntervalDriver::respond() {
    std::int64_t two_n = 2 * (std::int64_t)cls_->domain().n;
    return threshold_interval_oracle(
        *cls_, ThresholdInterval{Rational(j1_, two_n), Rational(j2_, two_n)}, eps_);
}

void IntervalDriver::delete_ball(std::uint64_t, const Rational&) {
    throw learner_failure("interval descriptor cannot exclude a rejected ball");
}

void IntervalDriver::delete_half(const SeparationWitness& w, bool delete_t1) {
    const GridRange* r = w.S.as_range();
    if (!r) throw contract_error("interval oracle witness without a grid range");
    std::int64_t two_n = 2 * (std::int64_t)cls_->domain().n;
    if (delete_t1)
        j2_ = (r->hi * Rational(two_n)).ceil();
    else
        j1_ = (r->lo * Rational(two_n)).floor();
}

std::uint64_t IntervalDriver::t_size() const {
    return t_members().size();
}

std::vector<std::uint64_t> IntervalDriver::t_members() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t h = 0; h < cls_->count(); ++h) {
        std::int64_t cut = 2 * (std::int64_t)h + 1; // value cut/(2n)
        if (cut >= j1_ && cut <= j2_) out.push_back(h);
    }
    return out;
}

void IntervalDriver::encode(BitWriter& w) const {
    unsigned width = bits_for(2 * (std::uint64_t)cls_->domain().n);
    w.put((std::uint64_t)j1_, width);
    w.put((std::uint64_t)j2_, width);
}

void IntervalDriver::decode(BitReader& r) {
    unsigned width = bits_for(2 * (std::uint64_t)cls_->domain().n);
    j1_ = (std::int64_t)r.get(width);
    j2_ = (std::int64_t)r.get(width);
}

GeneralLearner::GeneralLearner(ClassPtr cls, std::unique_ptr<OracleDriver> driver,
                               Rational alpha, Rational eps, std::uint64_t k,
                               Rational eta)
    : cls_(std::move(cls)), driver_(std::move(driver)), alpha_(std::move(alpha)),
      eps_(std::move(eps)), eta_(std::move(eta)), k_(k) {
    if (k_ == 0) throw input_error("subroutine parameter k must be >= 1");
    // widest possible estimate cap: 2k / (weight of the smallest legal S)
    cap_width_ = bits_for(2 * k_ * cls_->domain().size() + 1);
    reset();
}

void GeneralLearner::reset() {
    driver_->reset();
    done_ = false;
    result_ = 0;
    result_text_.clear();
    iterations_ = 0;
    close_.reset();
    est_.reset();
    ensure_pending();
}

std::uint64_t GeneralLearner::iterations_bound() const {
    double a = alpha_.to_double();
    double shrink = -std::log1p(-a * a / 2);
    return (std::uint64_t)std::ceil(std::log((double)cls_->count()) / shrink);
}

void GeneralLearner::ensure_pending() {
    while (!done_ && !close_ && !est_) {
        if (driver_->empty())
            throw learner_failure("candidate set emptied: the target was deleted");
        OracleResponse resp = driver_->respond();
        if (resp.tight) {
            close_ = PendingClose{resp.center, 0, 0};
            return;
        }
        validate_witness(*cls_, driver_->t_members(), alpha_, resp.witness,
                         driver_->validation());
        PendingEstimate pe;
        pe.s_size = resp.witness.S.size(cls_->domain());
        // alpha_min is the exact weight of this S
        Rational weight((std::int64_t)pe.s_size, (std::int64_t)cls_->domain().size());
        pe.cap = (std::uint64_t)(Rational(2 * (std::int64_t)k_) / weight).ceil();
        pe.w = std::move(resp.witness);
        est_ = std::move(pe);
    }
}

bool GeneralLearner::estimate_deletes_t0(const Rational& r,
                                         const SeparationWitness& w) const {
    Rational s((std::int64_t)w.S.size(cls_->domain()));
    return r * s > (w.d0 + w.d1) / Rational(2);
}

void GeneralLearner::apply_close(bool accept, std::uint64_t h,
                                 const std::string& text) {
    if (accept) {
        done_ = true;
        result_ = h;
        result_text_ = text;
        return;
    }
    // iterations count deletion rounds: the removal-log length
    ++iterations_;
    driver_->delete_ball(h, eps_);
}

void GeneralLearner::apply_estimate(const Rational& r, const SeparationWitness& w) {
    ++iterations_;
    driver_->delete_half(w, !estimate_deletes_t0(r, w));
}

bool GeneralLearner::step(const LabeledExample& ex) {
    if (done_) return true;
    if (close_) {
        if (cls_->evaluate(close_->h, ex.x) != ex.y) ++close_->disagree;
        if (++close_->seen >= k_) {
            Rational rate((std::int64_t)close_->disagree, (std::int64_t)k_);
            Rational threshold =
                eta_ + (Rational(1) - Rational(2) * eta_) * Rational(2) * eps_;
            std::uint64_t h = close_->h;
            close_.reset();
            apply_close(rate <= threshold, h, cls_->describe(h));
            if (!done_) ensure_pending();
        }
        return done_;
    }
    PendingEstimate& pe = *est_;
    ++pe.drawn;
    if (pe.w.S.contains(cls_->domain(), ex.x)) {
        ++pe.in_s;
        if (ex.y) ++pe.positive;
    }
    if (pe.in_s >= k_ || pe.drawn >= pe.cap) {
        if (pe.in_s == 0)
            throw estimation_failure("no example landed in the witness set");
        Rational raw((std::int64_t)pe.positive, (std::int64_t)pe.in_s);
        if (eta_.num() > 0) {
            raw = (raw - eta_) / (Rational(1) - Rational(2) * eta_);
            if (raw < Rational(0)) raw = Rational(0);
            if (raw > Rational(1)) raw = Rational(1);
        }
        SeparationWitness w = std::move(pe.w);
        est_.reset();
        apply_estimate(raw, w);
        if (!done_) ensure_pending();
    }
    return done_;
}

BitString GeneralLearner::encode_state() const {
    BitWriter w;
    w.put(done_ ? 2 : (est_ ? 1 : 0), 2);
    driver_->encode(w);
    unsigned kw = bits_for(k_);
    if (close_) {
        w.put(close_->seen, kw);
        w.put(close_->disagree, kw);
    } else if (est_) {
        w.put(est_->drawn, (unsigned)cap_width_);
        w.put(est_->in_s, kw);
        w.put(est_->positive, kw);
    }
    return w.take();
}

std::uint64_t GeneralLearner::semantic_bits() const {
    // removal log (one branch bit per iteration) plus the subroutine scratch
    return iterations_ + 2 * bits_for(k_) + cap_width_;
}

void GeneralLearner::decode_state(const BitString& bs) {
    BitReader r(bs);
    std::uint64_t tag = r.get(2);
    driver_->decode(r);
    close_.reset();
    est_.reset();
    done_ = tag == 2;
    if (done_) return;
    // the pending subroutine's identifiers live with the oracle: replaying
    // respond() on the decoded candidate set reproduces them exactly
    OracleResponse resp = driver_->respond();
    unsigned kw = bits_for(k_);
    if (tag == 0) {
        if (!resp.tight) throw input_error("state tag disagrees with the oracle");
        PendingClose pc{resp.center, 0, 0};
        pc.seen = r.get(kw);
        pc.disagree = r.get(kw);
        close_ = pc;
    } else {
        if (resp.tight) throw input_error("state tag disagrees with the oracle");
        PendingEstimate pe;
        pe.s_size = resp.witness.S.size(cls_->domain());
        Rational weight((std::int64_t)pe.s_size, (std::int64_t)cls_->domain().size());
        pe.cap = (std::uint64_t)(Rational(2 * (std::int64_t)k_) / weight).ceil();
        pe.w = std::move(resp.witness);
        pe.drawn = r.get((unsigned)cap_width_);
        pe.in_s = r.get(kw);
        pe.positive = r.get(kw);
        est_ = std::move(pe);
    }
}

GeneralRun GeneralLearner::run_exact(SQOracle& oracle) {
    reset();
    close_.reset();
    est_.reset();
    GeneralRun out;
    while (true) {
        if (driver_->empty())
            throw learner_failure("candidate set emptied: the target was deleted");
        OracleResponse resp = driver_->respond();
        if (resp.tight) {
            if (is_close_sq(oracle, resp.center, eps_)) {
                out.hypothesis = resp.center;
                out.hypothesis_text = resp.center_text;
                break;
            }
            ++out.iterations;
            driver_->delete_ball(resp.center, eps_);
            continue;
        }
        validate_witness(*cls_, driver_->t_members(), alpha_, resp.witness,
                         driver_->validation());
        ++out.iterations;
        Rational s((std::int64_t)resp.witness.S.size(cls_->domain()));
        Rational tau = (resp.witness.d1 - resp.witness.d0) / (Rational(2) * s);
        Rational r = estimate_sq(oracle, resp.witness.S, tau);
        driver_->delete_half(resp.witness, !estimate_deletes_t0(r, resp.witness));
    }
    out.queries = oracle.queries();
    iterations_ = out.iterations;
    done_ = true;
    result_ = out.hypothesis;
    result_text_ = out.hypothesis_text;
    return out;
}

std::uint64_t auto_subroutine_k(std::uint64_t class_count, const Rational& alpha,
                                double confidence) {
    if (confidence <= 0 || confidence >= 1)
        throw input_error("confidence must be in (0,1)");
    double a = alpha.to_double();
    double shrink = -std::log1p(-a * a / 2);
    double iters = std::ceil(std::log((double)class_count) / shrink);
    iters = std::max(iters, 1.0);
    double budget = 1.0 - confidence;
    auto fail = [&](double k) {
        double t = a / 8;
        return iters * 2 * (std::exp(-k * a) + std::exp(-2 * k * t * t));
    };
    std::uint64_t lo = 1, hi = 1;
    while (fail((double)hi) > budget) {
        hi *= 2;
        if (hi > (std::uint64_t)1 << 40)
            throw input_error("confidence unreachable at this alpha");
    }
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (fail((double)mid) <= budget)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

} // namespace bml
