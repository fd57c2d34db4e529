#pragma once

#include "bml/hypothesis_class.hpp"

namespace bml {

// Discrete thresholds over the unit grid: hypothesis i has cut value
// b_i = (2i+1)/(2n) for i = 0..n, and labels x with [x <= b_i].  Index 0
// labels nothing, index n labels everything; on the grid, h_i labels exactly
// the first i points.
class ThresholdClass final : public HypothesisClass {
public:
    explicit ThresholdClass(int n) : dom_(Domain::grid(n)) {}

    const Domain& domain() const override { return dom_; }
    std::uint64_t count() const override { return (std::uint64_t)dom_.n + 1; }
    bool evaluate(std::uint64_t h, std::uint64_t x) const override {
        // (x+1)/n <= (2h+1)/(2n)  <=>  2(x+1) <= 2h+1  <=>  x+1 <= h
        return x + 1 <= h;
    }
    std::string name() const override {
        return "threshold(n=" + std::to_string(dom_.n) + ")";
    }
    std::string describe(std::uint64_t h) const override {
        return "b=" + cut_value(h).str();
    }

    Rational cut_value(std::uint64_t h) const {
        return Rational(2 * (std::int64_t)h + 1, 2 * (std::int64_t)dom_.n);
    }
    // Hypothesis whose cut value is nearest to v (lower index on ties).
    std::uint64_t nearest(const Rational& v) const;

private:
    Domain dom_;
};

} // namespace bml
