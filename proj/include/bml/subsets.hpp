#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bml/domain.hpp"

namespace bml {

// Example subsets carry either an explicit sorted point list or a structured
// descriptor (closed value range on the grid, literal restriction on the
// cube).  Descriptors expand to exactly the explicit set they denote;
// brute-force paths use the explicit form, the efficient learners never
// materialize.
struct GridRange {
    Rational lo, hi; // {x in X : lo <= x <= hi}
    bool operator==(const GridRange&) const = default;
};

struct CubeRestriction {
    std::vector<Literal> literals; // conjunction; must be consistent

    bool operator==(const CubeRestriction&) const = default;
};

class ExampleSet {
public:
    ExampleSet() = default;
    static ExampleSet explicit_set(std::vector<std::uint64_t> pts) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        ExampleSet s;
        s.v_ = std::move(pts);
        return s;
    }
    static ExampleSet range(Rational lo, Rational hi) {
        ExampleSet s;
        s.v_ = GridRange{lo, hi};
        return s;
    }
    static ExampleSet restriction(std::vector<Literal> lits);
    static ExampleSet full() { // whole domain, any kind
        ExampleSet s;
        s.v_ = CubeRestriction{};
        s.full_ = true;
        return s;
    }

    bool is_full() const { return full_; }
    std::uint64_t size(const Domain& d) const;
    bool contains(const Domain& d, std::uint64_t x) const;
    std::vector<std::uint64_t> expand(const Domain& d) const;
    std::string str(const Domain& d) const;

    const GridRange* as_range() const { return std::get_if<GridRange>(&v_); }
    const CubeRestriction* as_restriction() const {
        return std::get_if<CubeRestriction>(&v_);
    }

private:
    std::variant<std::vector<std::uint64_t>, GridRange, CubeRestriction> v_ =
        std::vector<std::uint64_t>{};
    bool full_ = false;
};

// Hypothesis subsets: explicit index list, a contiguous index range, or a
// named set an oracle describes without enumerating (resolved by the class
// when small enough to audit).
struct IndexRange {
    std::uint64_t lo = 0, hi = 0; // inclusive; empty iff hi < lo
    bool operator==(const IndexRange&) const = default;
};

class HypothesisSet {
public:
    HypothesisSet() = default;
    static HypothesisSet explicit_set(std::vector<std::uint64_t> idx) {
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        HypothesisSet s;
        s.v_ = std::move(idx);
        return s;
    }
    static HypothesisSet range(std::uint64_t lo, std::uint64_t hi) {
        HypothesisSet s;
        s.v_ = IndexRange{lo, hi};
        return s;
    }
    static HypothesisSet symbolic(std::string label) {
        HypothesisSet s;
        s.v_ = Symbolic{std::move(label)};
        return s;
    }

    bool is_symbolic() const { return std::holds_alternative<Symbolic>(v_); }
    const std::string& label() const { return std::get<Symbolic>(v_).text; }

    std::uint64_t size() const;
    bool contains(std::uint64_t h) const;
    std::vector<std::uint64_t> expand() const;
    std::string str() const;

private:
    struct Symbolic {
        std::string text;
        bool operator==(const Symbolic&) const = default;
    };
    std::variant<std::vector<std::uint64_t>, IndexRange, Symbolic> v_ =
        std::vector<std::uint64_t>{};
};

} // namespace bml
