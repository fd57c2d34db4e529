#pragma once

#include <optional>

#include "bml/hypothesis_class.hpp"
#include "bml/subsets.hpp"

namespace bml {

// Execution policy for the kernels that have a data-parallel version.
// Parallel runs reduce deterministically (lowest qualifying index / lowest
// candidate rank wins), so both policies return identical results.
enum class Exec { serial, parallel };

// Number of (x, h) pairs in S x T with h(x) = 1.
std::uint64_t edge_count(const HypothesisClass& cls, const ExampleSet& S,
                         const HypothesisSet& T);
std::uint64_t edge_count(const HypothesisClass& cls, const ExampleSet& S,
                         std::uint64_t h);

// e(S,T) / (|S| |T|), exact.
Rational density(const HypothesisClass& cls, const ExampleSet& S,
                 const HypothesisSet& T);
Rational density(const HypothesisClass& cls, const ExampleSet& S,
                 std::uint64_t h);

// Fraction of domain points where h1 and h2 disagree.
Rational distance(const HypothesisClass& cls, std::uint64_t h1, std::uint64_t h2);

// All hypotheses within eps of the center (always includes the center).
std::vector<std::uint64_t> ball(const HypothesisClass& cls, std::uint64_t center,
                                const Rational& eps);

// Lowest-index h in H with |T intersect B_h(eps)| >= alpha |T|, if any.
// The center search ranges over the whole family, not just T.
std::optional<std::uint64_t> tight_center(const HypothesisClass& cls,
                                          const std::vector<std::uint64_t>& T,
                                          const Rational& alpha,
                                          const Rational& eps,
                                          Exec exec = Exec::parallel);

// Precomputed label bitsets for a hypothesis list; distance via popcount.
class LabelTable {
public:
    LabelTable(const HypothesisClass& cls, const std::vector<std::uint64_t>& hs);

    std::uint64_t disagreements(std::size_t i, std::size_t j) const;
    std::uint64_t disagreements_with(std::size_t i,
                                     const std::vector<std::uint64_t>& other) const;
    std::uint64_t ones(std::size_t i, const std::vector<std::uint64_t>& mask) const;
    std::size_t rows() const { return rows_; }

private:
    std::size_t rows_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Bitmask of an example set over a small domain, 64 points per word.
std::vector<std::uint64_t> point_mask(const Domain& d, const ExampleSet& S);

} // namespace bml
