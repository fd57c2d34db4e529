#pragma once

#include <iosfwd>
#include <optional>

#include "bml/classes/decision_list.hpp"
#include "bml/classes/equal_piece.hpp"
#include "bml/classes/threshold.hpp"
#include "bml/rational.hpp"

namespace bml {

enum class LearnerKind { general, threshold, equal_piece, decision_list };

LearnerKind learner_kind_from(const std::string& name);

struct TrialConfig {
    ClassPtr cls;
    LearnerKind kind = LearnerKind::threshold;
    Rational eps;
    Rational alpha;            // general: separability; equal-piece: window
    Rational eta;              // classification noise
    std::optional<std::uint64_t> k; // empty = auto-sized
    std::uint64_t trials = 1;
    std::uint64_t base_seed = 1;
    std::optional<Rational> accept_distance; // default 3 eps
    std::string oracle = "brute-force";      // general learner backend
    std::uint64_t step_cap = 500'000'000;
    std::optional<std::uint64_t> target_override; // fixed target index
    bool measure_time = false;
};

struct TrialReport {
    std::uint64_t id = 0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t bits_semantic = 0;
    std::uint64_t bits_physical = 0;
    Rational dist;
    bool success = false;
    std::uint64_t ms = 0;
    std::uint64_t iterations = 0;
    bool errored = false;
    std::string error;
    std::string hypothesis;
};

struct TrialBatch {
    std::vector<TrialReport> reports;
    std::uint64_t k_used = 0; // resolved k (0 when per-call auto-sizing)
    double success_rate() const;
    std::uint64_t median_samples() const;
    std::uint64_t max_bits_semantic() const;
};

// Runs the batch across a worker pool (BML_WORKERS overrides the width);
// per-trial seeds derive from the base seed and the trial id alone, so
// results are identical for any worker count and rows come back in id order.
TrialBatch run_trials(const TrialConfig& config);

// per-trial derived quantities
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t id);
std::uint64_t worker_pool_size();

void write_csv(std::ostream& os, const TrialBatch& batch);

// Exact-uniform sampling helpers for per-trial targets.
std::vector<std::int64_t> sample_piece_starts(const EqualPieceClass& cls,
                                              std::uint64_t seed);
std::vector<std::int64_t> sample_piece_starts_with_count(const EqualPieceClass& cls,
                                                         std::uint64_t seed,
                                                         int pieces);

// Exhaustive symmetric-difference distance between two decision lists.
Rational decision_list_distance(const DecisionList& a, const DecisionList& b);

} // namespace bml
