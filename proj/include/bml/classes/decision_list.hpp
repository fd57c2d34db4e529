#pragma once

#include "bml/hypothesis_class.hpp"

namespace bml {

// A decision list over n boolean variables: ordered levels (literal -> bit)
// with first-true-literal semantics and a default bit.  Each variable appears
// in at most one level; violating that is a construction error, not an
// evaluation case.
//
// Text form: [(+3,1),(-1,0)]:0 reads "if x3 then 1 else if not-x1 then 0
// else 0".
struct DecisionList {
    struct Level {
        Literal lit;
        bool out = false;
        bool operator==(const Level&) const = default;
    };

    int n = 0;
    std::vector<Level> levels;
    bool default_bit = false;

    DecisionList() = default;
    DecisionList(int n_, std::vector<Level> lv, bool dflt);

    bool eval(const Domain& d, std::uint64_t x) const {
        for (const auto& l : levels)
            if (d.satisfies(x, l.lit)) return l.out;
        return default_bit;
    }

    std::string text() const;
    static DecisionList parse(int n, const std::string& text);

    bool operator==(const DecisionList&) const = default;
};

// The enumerable family of full decision lists (one level per variable) in a
// canonical syntactic form: a permutation of all n variables, a free
// negation flag on every level except the last (the "if L then a else b" /
// "if not-L then b else a" rewrite makes a negated last level redundant),
// an output bit per level, and a default bit.  That yields exactly
// n! * 4^n indices.  Permuting consecutive same-bit levels gives
// extensionally equal functions under distinct indices, which the family
// permits.  Indices decode on the fly; nothing is materialized.
class DecisionListClass final : public HypothesisClass {
public:
    explicit DecisionListClass(int n);

    const Domain& domain() const override { return dom_; }
    std::uint64_t count() const override { return count_; }
    bool evaluate(std::uint64_t h, std::uint64_t x) const override {
        return decode(h).eval(dom_, x);
    }
    std::string name() const override {
        return "decision-list(n=" + std::to_string(dom_.n) + ")";
    }
    std::string describe(std::uint64_t h) const override { return decode(h).text(); }

    DecisionList decode(std::uint64_t h) const;

private:
    Domain dom_;
    std::uint64_t count_ = 0;
};

} // namespace bml
