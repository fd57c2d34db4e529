#pragma once

#include <optional>

#include "bml/classes/threshold.hpp"
#include "bml/graph_ops.hpp"

namespace bml {

// A separation witness: hypotheses in T0 have at most d0 edges into S,
// hypotheses in T1 at least d1, and the gap certifies that estimating
// d(S, f) decides which side to delete.
struct SeparationWitness {
    ExampleSet S;
    HypothesisSet T0, T1;
    Rational d0, d1;
};

struct OracleResponse {
    bool tight = false;
    std::uint64_t center = 0;  // tight responses on enumerable families
    std::string center_text;   // always set for tight responses
    SeparationWitness witness; // valid when !tight

    static OracleResponse make_tight(std::uint64_t h, std::string text) {
        OracleResponse r;
        r.tight = true;
        r.center = h;
        r.center_text = std::move(text);
        return r;
    }
    static OracleResponse make_separated(SeparationWitness w) {
        OracleResponse r;
        r.witness = std::move(w);
        return r;
    }
};

// Revalidates a witness from scratch through the graph primitives.
// size_floors checks |S| >= alpha |X| and |T0|,|T1| >= ceil(alpha^2 |T| / 2);
// pointwise checks the per-hypothesis edge-count contract and the
// d1 - d0 >= (alpha/4) |S| gap.  Oracles that certify weaker floors by
// construction (the interval oracle late in a run) are validated with
// size_floors off.  Throws contract_error on the first violation.
struct WitnessChecks {
    bool size_floors = true;
    bool pointwise = true;
};
void validate_witness(const HypothesisClass& cls,
                      const std::vector<std::uint64_t>& T, const Rational& alpha,
                      const SeparationWitness& w, const WitnessChecks& checks = {});

// Deterministic candidate sequence for the S-search: the full domain first,
// then structured sets (grid intervals longest-first / cube literal
// restrictions fewest-literals-first), then, in exhaustive mode, every subset
// by ascending bitmask.
class SCandidates {
public:
    SCandidates(const Domain& d, bool exhaustive);

    std::uint64_t total() const { return structured_.size() + mask_count_; }
    std::uint64_t structured_count() const { return structured_.size(); }
    ExampleSet get(std::uint64_t rank) const;

private:
    Domain dom_;
    std::vector<ExampleSet> structured_;
    std::uint64_t mask_count_ = 0;
};

struct SeparabilityVerdict {
    enum class Kind { witness, tight, counterexample } kind;
    std::uint64_t center = 0; // tight
    ExampleSet S;             // witness
    HypothesisSet T0, T1;     // witness
    Rational gap;             // witness density gap
};

struct SampledSearch {
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
};

enum class SearchOrder { forward, reverse };

// Tightness first; otherwise searches for disjoint T0, T1 of size
// >= ceil(alpha |T|) and S of size >= ceil(alpha |X|) with density gap
// >= alpha.  Exhaustive mode is complete within its size caps (|T| <= 24,
// |X| <= 24): a counterexample verdict means no witness exists.  Sampled
// mode audits structured candidates first, then `budget` random subsets;
// its counterexample verdict only means none was found.
SeparabilityVerdict check_separability(
    const HypothesisClass& cls, const std::vector<std::uint64_t>& T,
    const Rational& alpha, const Rational& eps,
    std::optional<SampledSearch> sampled = std::nullopt,
    SearchOrder order = SearchOrder::forward, Exec exec = Exec::parallel);

// Claim-style localization: sorts T by e(h, S), takes the
// ceil(alpha^2 |T| / 2) extremes on each end and reads d0/d1 off the cut
// points.  Requires that S separates T at gap alpha (as found by
// check_separability); throws contract_error when the derived gap falls
// under (alpha/4) |S|, which signals a false precondition.
SeparationWitness localize_witness(const HypothesisClass& cls, const ExampleSet& S,
                                   const std::vector<std::uint64_t>& T,
                                   const Rational& alpha);

// The oracle the general learner drives on small enumerable families:
// tightness proof when one exists, else the first S (in candidate order)
// whose sorted extremes already satisfy the localized contract.
OracleResponse brute_force_oracle(const HypothesisClass& cls,
                                  const std::vector<std::uint64_t>& T,
                                  const Rational& alpha, const Rational& eps,
                                  Exec exec = Exec::parallel);

// Structured threshold oracle over interval states [a1, a2]: tight at the
// midpoint once a2 - a1 <= eps, otherwise the middle third of the interval
// separates the outer thirds with densities 0 and 1.
struct ThresholdInterval {
    Rational a1, a2;
};
OracleResponse threshold_interval_oracle(const ThresholdClass& cls,
                                         const ThresholdInterval& t,
                                         const Rational& eps);

// Structured equal-piece oracle over scan states (window position plus
// recorded starts): each window separates the hypotheses with a piece
// covering it from those avoiding it; the scan's end is the tight case.
struct EpScanState {
    Rational jump;
    std::vector<Rational> starts;
};
class EqualPieceClass;
OracleResponse equal_piece_oracle(const EqualPieceClass& cls, const EpScanState& st,
                                  const Rational& alpha);

} // namespace bml
