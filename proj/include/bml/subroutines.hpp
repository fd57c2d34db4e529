#pragma once

#include <functional>

#include "bml/stream.hpp"
#include "bml/subsets.hpp"

namespace bml {

// Closeness test: draws exactly k examples, counts disagreements j, and
// accepts when the (noise-corrected) disagreement rate is at most 2 eps.
// Under eta-noise the observed rate concentrates on eta + (1 - 2 eta) d, so
// the test compares j/k against eta + (1 - 2 eta) 2 eps; at eta = 0 that is
// the plain j/k <= 2 eps rule.  The caller is only promised a decision for
// distances <= eps or > 3 eps.
bool is_close(Stream& stream, const std::function<bool(std::uint64_t)>& h,
              const Rational& eps, std::uint64_t k);
bool is_close(Stream& stream, std::uint64_t h, const Rational& eps, std::uint64_t k);

// Density estimate for a heavy set S: draws until k examples landed in S or
// the cap ceil(2k / alpha_min) is reached, then returns the fraction of
// in-S examples labeled 1 (noise-corrected, clamped to [0,1]).  alpha_min is
// the promised weight floor of S.  Throws estimation_failure when no example
// landed in S at all.
Rational estimate(Stream& stream, const ExampleSet& S, const Rational& tau,
                  std::uint64_t k, const Rational& alpha_min);

// Draws from the stream until the example satisfies every literal; all
// rejected draws are charged to the meter.  Cap: 64x the expected wait.
LabeledExample sample_conditioned(Stream& stream, const std::vector<Literal>& constraints);

// Inflation factor for auto-sized k under eta-noise: (1 - 2 eta)^-2.
std::uint64_t noise_inflate(std::uint64_t k, const Rational& eta);

} // namespace bml
