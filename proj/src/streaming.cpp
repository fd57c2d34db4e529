#include "bml/streaming.hpp"

#include "bml/errors.hpp"

namespace bml {

MemoryReport account_memory(StreamingLearner& learner, Stream& stream,
                            std::uint64_t step_cap) {
    learner.reset();
    MemoryReport rep;
    auto note = [&] {
        rep.max_physical_bits =
            std::max(rep.max_physical_bits, learner.encode_state().bit_count);
        rep.max_semantic_bits = std::max(rep.max_semantic_bits, learner.semantic_bits());
    };
    note();
    while (!learner.finished()) {
        if (rep.steps >= step_cap)
            throw non_termination(learner.name() + " exceeded the step cap");
        ++rep.steps;
        learner.step(stream.draw());
        note();
    }
    rep.samples = stream.draws();
    return rep;
}

} // namespace bml
