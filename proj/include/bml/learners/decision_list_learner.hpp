#pragma once

#include <functional>
#include <optional>

#include "bml/classes/decision_list.hpp"
#include "bml/oracle.hpp"
#include "bml/sq.hpp"
#include "bml/streaming.hpp"

namespace bml {

// Level-by-level decision-list learner.  For each of ceil(log2(1/eps))
// levels it keeps the set of surviving (literal, bit) pairs.  Same-level
// conflicts are resolved by estimating the target's density on assignments
// satisfying both literals plus the frozen-prefix constraints and deleting
// the side the estimate contradicts.  While the open run of levels has more
// surviving candidates than slots, candidates are probed alone: a literal
// that can still fill a run slot forces the target to the run bit on its
// whole restriction, so any other density deletes it.  Once the candidates
// exactly fill the slots the run freezes into the prefix and its literals
// join the constraint set.  Complementary survivors (l -> 0, not-l -> 1)
// get the candidate-list acceptance test before one side is deleted on a
// one-literal probe.
//
// Pair sets, constraints, a probe cursor and counters are the learner's
// entire mutable state: O(n log(1/eps)) bits.
class DecisionListLearner final : public StreamingLearner {
public:
    DecisionListLearner(int n, Rational eps,
                        std::optional<std::uint64_t> fixed_k = std::nullopt,
                        Rational eta = Rational(0));

    void reset() override;
    bool finished() const override { return done_; }
    bool step(const LabeledExample& ex) override;
    BitString encode_state() const override;
    std::uint64_t semantic_bits() const override;
    std::string name() const override { return "decision-list-learner"; }
    std::string result_text() const override { return result_.text(); }

    const DecisionList& result() const { return result_; }

    // Deterministic replay against an exact statistical-query oracle.
    DecisionList run_exact(SQOracle& oracle);

    // The pending query framed as an oracle response: the next conflict as a
    // separation over its restriction set (decision thresholds 2 eps |S|
    // apart), or the assembled candidate as a tightness response.
    OracleResponse oracle_view() const;

    void decode_state(const BitString& bs);

    // Fired after every estimate-driven pair deletion: (level, pair id).
    // pair id = var * 4 + negated * 2 + bit.
    std::function<void(int, int)> on_delete;

    // state inspection (instrumented soundness tests)
    int levels() const { return I_; }
    int frozen() const { return j_; }
    int current_level() const { return i_; }
    const std::vector<DecisionList::Level>& prefix() const { return prefix_; }
    const std::vector<Literal>& constraints() const { return constraints_; }
    std::uint64_t level_mask(int level) const { return masks_[(std::size_t)level]; }

    static int pair_id(const Literal& lit, bool bit) {
        return lit.var * 4 + (lit.negated ? 2 : 0) + (bit ? 1 : 0);
    }
    static Literal pair_literal(int id) { return {id / 4, (id & 2) != 0}; }
    static bool pair_bit(int id) { return id & 1; }

private:
    struct SameLevel {
        int l0, l1;
    };
    struct RunProbe {
        int lrun; // run-candidate pair probed alone on its restriction
    };
    struct SpecialClose {
        int l0, l1;
        DecisionList hprime;
    };
    struct SpecialEstA {
        int l0, l1; // probes the literal of the pair opposing the run bit
    };
    struct SpecialEstB {
        int l0, l1; // probes the run-bit side to tell "both forms" apart
    };
    using Action =
        std::variant<SameLevel, RunProbe, SpecialClose, SpecialEstA, SpecialEstB>;

    struct PendingEstimate {
        ExampleSet S;
        std::uint64_t k = 0, cap = 0;
        std::uint64_t drawn = 0, in_s = 0, positive = 0;
    };
    struct PendingClose {
        DecisionList h;
        std::uint64_t k = 0;
        std::uint64_t seen = 0, disagree = 0;
    };

    bool run_bit() const { return b_; }
    int beff() const { return i_ > j_ + 1 ? (b_ ? 1 : 0) : 0; }
    int slots() const { return i_ - 1 - j_; }
    std::vector<int> run_candidates() const; // pair ids with the run bit
    void init_level(int level);
    void freeze_run(const std::vector<int>& candidates);
    void delete_pair(int level, int id);
    void delete_from_run(int id);
    bool advance();             // freezes / level transitions; true when an
                                // example-consuming action is pending or done
    std::optional<Action> find_action();
    void begin(const Action& a);
    ExampleSet query_set(const std::vector<Literal>& extra) const;
    std::uint64_t size_k(const Rational& weight) const;
    std::uint64_t close_k() const;
    Rational debias(const Rational& raw) const;
    void decide(const Rational& est);
    void decide_close(bool accepted);
    DecisionList assemble() const;
    DecisionList build_hprime(const Literal& zero_side) const;
    Rational delta_per_call() const;

    int n_;
    Rational eps_, eta_;
    std::optional<std::uint64_t> fixed_k_;
    int I_ = 1;

    int j_ = 0, i_ = 1;
    bool b_ = false;
    int probe_cursor_ = 0; // run candidates below this id are probed-and-kept
    std::vector<DecisionList::Level> prefix_;
    std::vector<Literal> constraints_;
    std::vector<std::uint64_t> masks_; // per level, 4n pair bits
    bool done_ = false;
    DecisionList result_;

    std::optional<Action> action_;
    std::optional<PendingEstimate> est_;
    std::optional<PendingClose> close_;
    SQOracle* exact_ = nullptr; // set during run_exact
};

// The structured-oracle view of a learner state: the next pending conflict
// as a separation response (decision thresholds 2 eps |S| apart), or the
// assembled list as a tightness response once no conflict remains.
OracleResponse decision_list_oracle(DecisionListLearner& learner,
                                    const Rational& eps);

} // namespace bml
