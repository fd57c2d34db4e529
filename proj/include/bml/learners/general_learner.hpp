#pragma once

#include <memory>

#include "bml/oracle.hpp"
#include "bml/sq.hpp"
#include "bml/streaming.hpp"

namespace bml {

// Candidate-set backends the general learner drives.  The driver owns the
// T-descriptor, answers oracle calls for the current T, and applies the
// deletions; witness identifiers are charged to the oracle, so driver state
// is all that the learner's T-side memory measure counts.
class OracleDriver {
public:
    virtual ~OracleDriver() = default;
    virtual void reset() = 0;
    virtual OracleResponse respond() = 0;
    virtual void delete_ball(std::uint64_t center, const Rational& eps) = 0;
    virtual void delete_half(const SeparationWitness& w, bool delete_t1) = 0;
    virtual bool empty() const = 0;
    virtual std::uint64_t t_size() const = 0;
    virtual void encode(BitWriter& w) const = 0;
    virtual void decode(BitReader& r) = 0;
    virtual WitnessChecks validation() const = 0;
    virtual std::vector<std::uint64_t> t_members() const = 0;
    virtual std::string name() const = 0;
};

// Explicit candidate bitset with the brute-force oracle; complete on small
// enumerable families.
class BitsetDriver final : public OracleDriver {
public:
    BitsetDriver(ClassPtr cls, Rational alpha, Rational eps,
                 Exec exec = Exec::parallel);

    void reset() override;
    OracleResponse respond() override;
    void delete_ball(std::uint64_t center, const Rational& eps) override;
    void delete_half(const SeparationWitness& w, bool delete_t1) override;
    bool empty() const override { return t_.empty(); }
    std::uint64_t t_size() const override { return t_.size(); }
    void encode(BitWriter& w) const override;
    void decode(BitReader& r) override;
    WitnessChecks validation() const override { return {}; }
    std::vector<std::uint64_t> t_members() const override { return t_; }
    std::string name() const override { return "brute-force"; }

private:
    ClassPtr cls_;
    Rational alpha_, eps_;
    Exec exec_;
    std::vector<std::uint64_t> t_;
};

// Interval descriptor over the threshold family with the structured oracle.
// Ball deletions are not representable by an interval; a rejected tightness
// center therefore fails the trial (the probabilistic is_close error case).
class IntervalDriver final : public OracleDriver {
public:
    IntervalDriver(std::shared_ptr<const ThresholdClass> cls, Rational eps);

    void reset() override;
    OracleResponse respond() override;
    void delete_ball(std::uint64_t center, const Rational& eps) override;
    void delete_half(const SeparationWitness& w, bool delete_t1) override;
    bool empty() const override { return false; }
    std::uint64_t t_size() const override;
    void encode(BitWriter& w) const override;
    void decode(BitReader& r) override;
    WitnessChecks validation() const override { return {.size_floors = false}; }
    std::vector<std::uint64_t> t_members() const override;
    std::string name() const override { return "structured"; }

private:
    std::shared_ptr<const ThresholdClass> cls_;
    Rational eps_;
    std::int64_t j1_ = 0, j2_ = 0; // bounds on the 1/(2n) grid
};

struct GeneralRun {
    std::uint64_t hypothesis = 0;
    std::string hypothesis_text;
    std::uint64_t iterations = 0;
    std::uint64_t queries = 0; // exact-backend runs
};

// The oracle-driven candidate-elimination learner: tight responses are
// tested with is_close and their ball deleted on rejection; separation
// witnesses are decided by estimating d(S, f) against the d0/d1 midpoint.
class GeneralLearner final : public StreamingLearner {
public:
    GeneralLearner(ClassPtr cls, std::unique_ptr<OracleDriver> driver,
                   Rational alpha, Rational eps, std::uint64_t k, Rational eta);

    void reset() override;
    bool finished() const override { return done_; }
    bool step(const LabeledExample& ex) override;
    BitString encode_state() const override;
    std::uint64_t semantic_bits() const override;
    std::string name() const override { return "general-learner"; }
    std::string result_text() const override { return result_text_; }

    std::uint64_t result() const { return result_; }
    std::uint64_t iterations() const { return iterations_; }
    std::uint64_t iterations_bound() const;
    void decode_state(const BitString& bs);

    // Deterministic replay against an exact statistical-query oracle.
    GeneralRun run_exact(SQOracle& oracle);

private:
    struct PendingClose {
        std::uint64_t h = 0;
        std::uint64_t seen = 0, disagree = 0;
    };
    struct PendingEstimate {
        SeparationWitness w;
        std::uint64_t s_size = 0, cap = 0;
        std::uint64_t drawn = 0, in_s = 0, positive = 0;
    };

    void ensure_pending();
    void apply_close(bool accept, std::uint64_t h, const std::string& text);
    void apply_estimate(const Rational& r, const SeparationWitness& w);
    bool estimate_deletes_t0(const Rational& r, const SeparationWitness& w) const;

    ClassPtr cls_;
    std::unique_ptr<OracleDriver> driver_;
    Rational alpha_, eps_, eta_;
    std::uint64_t k_;

    bool done_ = false;
    std::uint64_t result_ = 0;
    std::string result_text_;
    std::uint64_t iterations_ = 0;
    std::optional<PendingClose> close_;
    std::optional<PendingEstimate> est_;
    std::uint64_t cap_width_ = 0;
};

// Smallest k whose per-run union bound over the iteration budget leaves the
// requested confidence: iterations * 2 (e^{-k a} + e^{-2 k (a/8)^2}) fits in
// 1 - confidence.
std::uint64_t auto_subroutine_k(std::uint64_t class_count, const Rational& alpha,
                                double confidence);

} // namespace bml
