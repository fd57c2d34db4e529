#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bml/domain.hpp"

namespace bml {

// An enumerable family of binary classifiers over a finite domain.  evaluate
// is total and deterministic; indices are the canonical enumeration order.
// Instances are immutable and safe to share across threads.
class HypothesisClass {
public:
    virtual ~HypothesisClass() = default;

    virtual const Domain& domain() const = 0;
    virtual std::uint64_t count() const = 0;
    virtual bool evaluate(std::uint64_t h, std::uint64_t x) const = 0;
    virtual std::string name() const = 0;
    virtual std::string describe(std::uint64_t h) const = 0;

    // Label bitset of hypothesis h over the whole domain, 64 points per word.
    std::vector<std::uint64_t> labels(std::uint64_t h) const;

    void check_index(std::uint64_t h) const {
        if (h >= count()) throw input_error("hypothesis index out of range");
    }
    void check_point(std::uint64_t x) const {
        if (x >= domain().size()) throw input_error("domain point out of range");
    }
};

using ClassPtr = std::shared_ptr<const HypothesisClass>;

} // namespace bml
