#pragma once

#include <optional>

#include "bml/hypothesis_class.hpp"

namespace bml {

// Union-of-pieces classifiers over the unit grid.  A hypothesis is a tuple of
// start values a_1 < a_2 < ... on the 1/n grid (0 allowed), each opening a
// closed interval [a_i, a_i + p] of the fixed piece length p, with positive
// gaps between pieces (a_i + p < a_{i+1}) and a_k + p < 1.  k = 0 (the
// all-zeros hypothesis) is a member.
//
// Start tuples are represented by their grid numerators: start j means value
// j/n.  The family is enumerable for small n; evaluation of an explicit
// description works at any n.
class EqualPieceClass final : public HypothesisClass {
public:
    EqualPieceClass(int n, Rational piece_len);

    const Domain& domain() const override { return dom_; }
    std::uint64_t count() const override;
    bool evaluate(std::uint64_t h, std::uint64_t x) const override;
    std::string name() const override;
    std::string describe(std::uint64_t h) const override;

    const Rational& piece_len() const { return p_; }
    bool enumerable() const { return enumerated_; }

    // Explicit-description surface (works at any n, used by the learner).
    bool description_valid(const std::vector<std::int64_t>& starts) const;
    bool eval_description(const std::vector<std::int64_t>& starts,
                          std::uint64_t x) const;
    std::string description_str(const std::vector<std::int64_t>& starts) const;

    const std::vector<std::int64_t>& starts_of(std::uint64_t h) const;
    std::optional<std::uint64_t> index_of(const std::vector<std::int64_t>& starts) const;

    // Counts tuples by direct recursion on the smallest admissible next start;
    // the enumeration-based count in count() cross-checks it in tests.
    static std::uint64_t recursive_count(int n, const Rational& p);

    // Hypotheses (by index) whose pieces contain / avoid the window [lo, hi].
    std::vector<std::uint64_t> window_subset(bool contains_window,
                                             const Rational& lo,
                                             const Rational& hi) const;

private:
    Domain dom_;
    Rational p_;
    bool enumerated_ = false;
    std::vector<std::vector<std::int64_t>> all_; // start tuples, enumeration order

    static constexpr std::uint64_t kEnumerationCap = 1u << 20;
};

} // namespace bml
