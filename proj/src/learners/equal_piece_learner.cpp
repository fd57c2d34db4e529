#include "bml/learners/equal_piece_learner.hpp"

#include "bml/errors.hpp"

namespace bml {

EqualPieceLearner::EqualPieceLearner(std::shared_ptr<const EqualPieceClass> cls,
                                     Rational eps, std::optional<Rational> alpha)
    : cls_(std::move(cls)), eps_(std::move(eps)) {
    if (!(eps_ > Rational(0) && eps_ < Rational(1)))
        throw input_error("eps must be in (0,1)");
    const Rational p = cls_->piece_len();
    Rational floor_a = Rational(2, (std::int64_t)cls_->domain().size());
    if (alpha) {
        alpha_ = *alpha;
    } else {
        alpha_ = p * p * eps_ / Rational(48);
        if (!(alpha_ < p * p * eps_ / Rational(24)))
            throw input_error("default alpha outside the admissible band");
    }
    if (!(alpha_ > floor_a))
        throw input_error("alpha must exceed 2/|X| for the window scan");
    half_ = alpha_ / Rational(2);
    t_max_ = (std::uint64_t)(Rational(1) / half_).ceil() + 2;
    hits_max_ = (std::uint64_t)(Rational(1) / p).floor() + 2;
    reset();
}

void EqualPieceLearner::reset() {
    t_ = 0;
    hits_.clear();
    done_ = false;
    wait_ = 0;
    skip_unsampleable();
}

Rational EqualPieceLearner::jump() const {
    return Rational((std::int64_t)t_) * half_ +
           Rational((std::int64_t)hits_.size()) * cls_->piece_len();
}

Rational EqualPieceLearner::window_hi() const {
    Rational hi = jump() + half_;
    return hi > Rational(1) ? Rational(1) : hi;
}

void EqualPieceLearner::skip_unsampleable() {
    const Domain& dom = cls_->domain();
    while (!done_) {
        Rational lo = jump();
        if (lo > Rational(1)) { done_ = true; break; }
        Rational hi = window_hi();
        // window ends as grid indices: points i with lo <= (i+1)/n <= hi
        win_lo_ = (lo * Rational(dom.n)).ceil() - 1;
        win_hi_ = (hi * Rational(dom.n)).floor() - 1;
        if (win_lo_ < 0) win_lo_ = 0;
        std::int64_t pts = win_hi_ - win_lo_ + 1;
        if (pts > 0 && win_lo_ < dom.n) {
            wait_cap_ = 64 * (std::uint64_t)((dom.n + pts - 1) / pts);
            break; // window holds a grid point, sample it
        }
        ++t_;
    }
}

bool EqualPieceLearner::step(const LabeledExample& ex) {
    if (done_) return true;
    if ((std::int64_t)ex.x < win_lo_ || (std::int64_t)ex.x > win_hi_) {
        if (++wait_ > wait_cap_)
            throw non_termination("equal-piece learner starved of window examples");
        return false;
    }
    wait_ = 0;
    if (ex.y) hits_.push_back(t_); // record the window position, skip a piece
    ++t_;
    skip_unsampleable();
    return done_;
}

std::vector<Rational> EqualPieceLearner::result() const {
    std::vector<Rational> starts;
    const Rational p = cls_->piece_len();
    for (std::size_t i = 0; i < hits_.size(); ++i)
        starts.push_back(Rational((std::int64_t)hits_[i]) * half_ +
                         Rational((std::int64_t)i) * p);
    return starts;
}

std::string EqualPieceLearner::result_text() const {
    auto starts = result();
    std::string s = "pieces[";
    for (std::size_t i = 0; i < starts.size(); ++i)
        s += (i ? "," : "") + starts[i].str();
    return s + "]";
}

BitString EqualPieceLearner::encode_state() const {
    BitWriter w;
    unsigned tw = bits_for(t_max_);
    unsigned hw = bits_for(hits_max_);
    w.put_bit(done_);
    w.put(t_, tw);
    w.put(hits_.size(), hw);
    for (std::uint64_t h : hits_) w.put(h, tw);
    return w.take();
}

void EqualPieceLearner::decode_state(const BitString& bs) {
    BitReader r(bs);
    unsigned tw = bits_for(t_max_);
    unsigned hw = bits_for(hits_max_);
    done_ = r.get_bit();
    t_ = r.get(tw);
    hits_.assign(r.get(hw), 0);
    for (auto& h : hits_) h = r.get(tw);
    wait_ = 0;
    skip_unsampleable(); // rebuild the cached window ends
}

std::uint64_t EqualPieceLearner::semantic_bits() const {
    return bits_for(t_max_) * (1 + hits_.size()) + bits_for(hits_max_);
}

bool eval_piece_starts(const Domain& dom, const std::vector<Rational>& starts,
                       const Rational& piece_len, std::uint64_t x) {
    Rational v = dom.point_value(x);
    for (const auto& a : starts)
        if (a <= v && v <= a + piece_len) return true;
    return false;
}

Rational piece_description_distance(const Domain& dom,
                                    const std::vector<Rational>& a,
                                    const std::vector<Rational>& b,
                                    const Rational& piece_len) {
    std::uint64_t diff = 0;
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        if (eval_piece_starts(dom, a, piece_len, x) !=
            eval_piece_starts(dom, b, piece_len, x))
            ++diff;
    return Rational((std::int64_t)diff, (std::int64_t)dom.size());
}

} // namespace bml
