#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bml/errors.hpp"
#include "bml/rational.hpp"

namespace bml {

// A literal over boolean variables: x_var or its negation.  Variables are
// 0-based internally; the CLI text form is 1-based ("+3" is x3, "-1" is
// NOT x1).
struct Literal {
    int var = 0;
    bool negated = false;

    bool operator==(const Literal&) const = default;
    Literal complement() const { return {var, !negated}; }
    std::string str() const {
        return (negated ? "-" : "+") + std::to_string(var + 1);
    }
};

// The example side of the graph.  unit_grid(n) enumerates {1/n, ..., n/n}
// in ascending order; boolean_cube(n) enumerates {0,1}^n in lexicographic
// order of (x1, ..., xn), i.e. x1 is the most significant index bit.
struct Domain {
    enum class Kind { unit_grid, boolean_cube };

    Kind kind = Kind::unit_grid;
    int n = 1;

    static Domain grid(int n) {
        if (n < 1) throw input_error("grid size must be >= 1");
        return {Kind::unit_grid, n};
    }
    static Domain cube(int n) {
        if (n < 1 || n > 30) throw input_error("cube dimension out of range");
        return {Kind::boolean_cube, n};
    }

    std::uint64_t size() const {
        return kind == Kind::unit_grid ? (std::uint64_t)n
                                       : (std::uint64_t)1 << n;
    }

    // unit_grid: value of point index i (0-based) is (i+1)/n.
    Rational point_value(std::uint64_t i) const {
        return Rational((std::int64_t)i + 1, n);
    }

    // boolean_cube: value of variable `var` (0-based) in assignment index x.
    bool assignment_bit(std::uint64_t x, int var) const {
        return (x >> (n - 1 - var)) & 1;
    }

    bool satisfies(std::uint64_t x, const Literal& lit) const {
        return assignment_bit(x, lit.var) != lit.negated;
    }

    bool operator==(const Domain&) const = default;
};

} // namespace bml
