#pragma once

#include "bml/bits.hpp"
#include "bml/stream.hpp"

namespace bml {

// The learner-as-state-machine contract.  A learner never stores examples
// except through its state; encode_state is canonical (equal states give
// equal bit strings) and self-delimiting, so |encode| is the physical memory
// measure.  semantic_bits is the model-side count (candidate-set descriptor
// plus subroutine counters); the RNG and the immutable family description
// are not charged.
class StreamingLearner {
public:
    virtual ~StreamingLearner() = default;

    virtual void reset() = 0;
    virtual bool finished() const = 0;
    // Consumes one labeled example; returns true once the learner is done.
    virtual bool step(const LabeledExample& ex) = 0;
    virtual BitString encode_state() const = 0;
    virtual std::uint64_t semantic_bits() const = 0;
    virtual std::string name() const = 0;
    virtual std::string result_text() const = 0;
};

struct MemoryReport {
    std::uint64_t max_physical_bits = 0;
    std::uint64_t max_semantic_bits = 0;
    std::uint64_t samples = 0;
    std::uint64_t steps = 0;
};

// Runs the learner to completion on the stream, measuring state sizes at
// every step.  Throws non_termination past step_cap.
MemoryReport account_memory(StreamingLearner& learner, Stream& stream,
                            std::uint64_t step_cap = 200'000'000);

} // namespace bml
