#pragma once

#include <stdexcept>
#include <string>

namespace bml {

// Bad arguments, malformed files, violated preconditions.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An oracle response (or a caller-supplied witness) failed revalidation.
struct contract_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// estimate() hit its draw cap without seeing a single in-set example.
struct estimation_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A step or rejection-sampling cap was exceeded.
struct non_termination : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Probabilistic failure inside a learner (candidate set emptied, etc.).
// The trial harness records these as unsuccessful trials.
struct learner_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bml
