#include "bml/subroutines.hpp"

#include "bml/errors.hpp"

namespace bml {

bool is_close(Stream& stream, const std::function<bool(std::uint64_t)>& h,
              const Rational& eps, std::uint64_t k) {
    if (k == 0) throw input_error("is_close needs k >= 1");
    std::uint64_t j = 0;
    for (std::uint64_t i = 0; i < k; ++i) {
        LabeledExample ex = stream.draw();
        if (h(ex.x) != ex.y) ++j;
    }
    const Rational& eta = stream.eta();
    Rational threshold = eta + (Rational(1) - Rational(2) * eta) * Rational(2) * eps;
    return Rational((std::int64_t)j, (std::int64_t)k) <= threshold;
}

bool is_close(Stream& stream, std::uint64_t h, const Rational& eps, std::uint64_t k) {
    const HypothesisClass& cls = stream.hypothesis_class();
    cls.check_index(h);
    return is_close(stream, [&](std::uint64_t x) { return cls.evaluate(h, x); },
                    eps, k);
}

Rational estimate(Stream& stream, const ExampleSet& S, const Rational& tau,
                  std::uint64_t k, const Rational& alpha_min) {
    if (k == 0) throw input_error("estimate needs k >= 1");
    if (!(tau > Rational(0) && tau < Rational(1)))
        throw input_error("tau must be in (0,1)");
    if (!(alpha_min > Rational(0)))
        throw input_error("alpha_min must be positive");
    const Domain& dom = stream.hypothesis_class().domain();
    if (S.size(dom) == 0) throw input_error("estimate over an empty set");

    std::uint64_t cap =
        (std::uint64_t)(Rational(2 * (std::int64_t)k) / alpha_min).ceil();
    std::uint64_t counter_s = 0, counter_1 = 0;
    for (std::uint64_t i = 0; i < cap && counter_s < k; ++i) {
        LabeledExample ex = stream.draw();
        if (S.contains(dom, ex.x)) {
            ++counter_s;
            if (ex.y) ++counter_1;
        }
    }
    if (counter_s == 0)
        throw estimation_failure("no example landed in S within the draw cap");
    Rational raw((std::int64_t)counter_1, (std::int64_t)counter_s);
    const Rational& eta = stream.eta();
    if (eta.num() == 0) return raw;
    Rational corrected = (raw - eta) / (Rational(1) - Rational(2) * eta);
    if (corrected < Rational(0)) return Rational(0);
    if (corrected > Rational(1)) return Rational(1);
    return corrected;
}

LabeledExample sample_conditioned(Stream& stream,
                                  const std::vector<Literal>& constraints) {
    const Domain& dom = stream.hypothesis_class().domain();
    ExampleSet S = constraints.empty() ? ExampleSet::full()
                                       : ExampleSet::restriction(constraints);
    std::uint64_t s_size = S.size(dom);
    if (s_size == 0) throw input_error("conditioned set is empty");
    std::uint64_t expected_wait = dom.size() / s_size + 1;
    std::uint64_t cap = 64 * expected_wait;
    for (std::uint64_t i = 0; i < cap; ++i) {
        LabeledExample ex = stream.draw();
        if (S.contains(dom, ex.x)) return ex;
    }
    throw non_termination("rejection sampling exceeded 64x the expected wait");
}

std::uint64_t noise_inflate(std::uint64_t k, const Rational& eta) {
    if (eta.num() == 0) return k;
    Rational f = Rational(1) - Rational(2) * eta; // (1-2eta)^-2 inflation
    Rational inflated = Rational((std::int64_t)k) / (f * f);
    return (std::uint64_t)inflated.ceil();
}

} // namespace bml
