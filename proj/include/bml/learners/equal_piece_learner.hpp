#pragma once

#include "bml/classes/equal_piece.hpp"
#include "bml/streaming.hpp"

namespace bml {

// Window-scan learner for equal-piece targets.  Slides a window of length
// alpha/2 across [0, 1]; one example from the window decides whether a piece
// starts here (label 1 records the current position and skips ahead by the
// piece length).  State is the window counter plus the recorded hit
// positions, each stored as a window index.
class EqualPieceLearner final : public StreamingLearner {
public:
    // alpha must sit in the admissible band (2/|X|, p^2 eps / 24); by default
    // p^2 eps / 48 is tried and rejected when it violates the lower bound.
    EqualPieceLearner(std::shared_ptr<const EqualPieceClass> cls, Rational eps,
                      std::optional<Rational> alpha = std::nullopt);

    void reset() override;
    bool finished() const override { return done_; }
    bool step(const LabeledExample& ex) override;
    BitString encode_state() const override;
    std::uint64_t semantic_bits() const override;
    std::string name() const override { return "equal-piece-learner"; }
    std::string result_text() const override;

    // recorded piece starts, as exact positions in [0, 1)
    std::vector<Rational> result() const;
    const Rational& alpha() const { return alpha_; }
    void decode_state(const BitString& bs);

private:
    Rational jump() const;
    Rational window_hi() const;
    void skip_unsampleable();

    std::shared_ptr<const EqualPieceClass> cls_;
    Rational eps_, alpha_, half_;
    std::uint64_t t_ = 0;              // windows advanced so far
    std::vector<std::uint64_t> hits_;  // t-values at which a start was recorded
    bool done_ = false;
    std::uint64_t wait_ = 0;
    std::uint64_t t_max_ = 0, hits_max_ = 0; // field widths for the encoding
    // cached per-window values (derived, not state): grid indices of the
    // window ends and the wait cap
    std::int64_t win_lo_ = 0, win_hi_ = -1;
    std::uint64_t wait_cap_ = 0;
};

// h(x) = 1 iff x lies in some [start, start + piece_len]
bool eval_piece_starts(const Domain& dom, const std::vector<Rational>& starts,
                       const Rational& piece_len, std::uint64_t x);

// exact symmetric-difference distance between two start descriptions
Rational piece_description_distance(const Domain& dom,
                                    const std::vector<Rational>& a,
                                    const std::vector<Rational>& b,
                                    const Rational& piece_len);

} // namespace bml
