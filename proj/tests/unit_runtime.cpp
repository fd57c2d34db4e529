#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bml/classes/decision_list.hpp"
#include "bml/classes/threshold.hpp"
#include "bml/graph_ops.hpp"
#include "bml/sq.hpp"
#include "bml/subroutines.hpp"

using namespace bml;

namespace {

std::shared_ptr<const ThresholdClass> thresholds(int n) {
    return std::make_shared<ThresholdClass>(n);
}

} // namespace

TEST_CASE("streams are deterministic in their seed") {
    auto cls = thresholds(64);
    Stream a(cls, 20, Rational(0), 77);
    Stream b(cls, 20, Rational(0), 77);
    for (int i = 0; i < 1000; ++i) {
        auto ea = a.draw(), eb = b.draw();
        CHECK(ea.x == eb.x);
        CHECK(ea.y == eb.y);
    }
    CHECK(a.draws() == 1000);
}

TEST_CASE("noiseless labels always match the target") {
    auto cls = thresholds(32);
    Stream s(cls, 9, Rational(0), 5);
    for (int i = 0; i < 2000; ++i) {
        auto ex = s.draw();
        CHECK(ex.y == cls->evaluate(9, ex.x));
    }
}

TEST_CASE("the empirical flip rate tracks eta") {
    auto cls = thresholds(32);
    Stream s(cls, 9, Rational(1, 5), 123);
    std::uint64_t flips = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        auto ex = s.draw();
        if (ex.y != cls->evaluate(9, ex.x)) ++flips;
    }
    double rate = (double)flips / draws;
    CHECK(std::abs(rate - 0.2) < 0.02);
}

TEST_CASE("is_close accepts the target itself") {
    auto cls = thresholds(16);
    Stream s(cls, 7, Rational(0), 3);
    CHECK(is_close(s, 7, Rational(1, 10), 100));
    CHECK_THROWS_AS(is_close(s, 7, Rational(1, 10), 0), input_error);
}

TEST_CASE("is_close separates distance 0.5 at eps=0.05") {
    auto cls = thresholds(64);
    int wrong = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Stream s(cls, 16, Rational(0), seed);
        if (is_close(s, 48, Rational(1, 20), 500)) ++wrong; // distance 1/2
    }
    CHECK(wrong <= 1); // bound allows ~16; observed essentially zero
}

TEST_CASE("is_close failure rates stay under the tail bound") {
    auto cls = thresholds(64);
    struct Regime {
        Rational eps;
        std::uint64_t k;
    };
    for (Regime rg : {Regime{Rational(1, 20), 500}, Regime{Rational(1, 10), 200}}) {
        const int trials = 1000;
        double e = rg.eps.to_double();
        double bound = 2 * std::exp(-2.0 * (double)rg.k * e * e);
        double sigma = std::sqrt(std::max(bound * (1 - bound), 1e-12) / trials);
        // close regime: target at distance <= eps must pass
        std::uint64_t close_h = (std::uint64_t)std::llround(16 + 64 * e);
        int fail_close = 0;
        for (int t = 0; t < trials; ++t) {
            Stream s(cls, 16, Rational(0), 1000 + (std::uint64_t)t);
            if (!is_close(s, close_h, rg.eps, rg.k)) ++fail_close;
        }
        CHECK((double)fail_close / trials <= bound + 3 * sigma);
        // far regime: distance > 3 eps must fail
        std::uint64_t far_h = (std::uint64_t)std::llround(16 + 64 * (3.3 * e));
        int fail_far = 0;
        for (int t = 0; t < trials; ++t) {
            Stream s(cls, 16, Rational(0), 5000 + (std::uint64_t)t);
            if (is_close(s, far_h, rg.eps, rg.k)) ++fail_far;
        }
        CHECK((double)fail_far / trials <= bound + 3 * sigma);
    }
}

TEST_CASE("estimate reproduces an all-ones region exactly") {
    auto cls = thresholds(16);
    // target labels all of S = first quarter as 1
    Stream s(cls, 16, Rational(0), 11);
    ExampleSet S = ExampleSet::range(Rational(1, 16), Rational(1, 4));
    CHECK(estimate(s, S, Rational(1, 10), 50, Rational(1, 4)) == Rational(1));
}

TEST_CASE("estimate input validation") {
    auto cls = thresholds(16);
    Stream s(cls, 8, Rational(0), 11);
    ExampleSet empty = ExampleSet::explicit_set({});
    CHECK_THROWS_AS(estimate(s, empty, Rational(1, 10), 10, Rational(1, 4)),
                    input_error);
    CHECK_THROWS_AS(
        estimate(s, ExampleSet::full(), Rational(1, 10), 0, Rational(1, 4)),
        input_error);
    CHECK_THROWS_AS(
        estimate(s, ExampleSet::full(), Rational(2), 10, Rational(1, 4)),
        input_error);
}

TEST_CASE("estimate lands within tau and respects its draw cap") {
    auto cls = thresholds(64);
    ExampleSet S = ExampleSet::range(Rational(1, 64), Rational(1, 2)); // half of X
    const Rational tau(1, 10);
    const std::uint64_t k = 200;
    const Rational alpha_min(1, 4);
    int misses = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        Stream s(cls, 16, Rational(0), 42 + (std::uint64_t)t);
        Rational r = estimate(s, S, tau, k, alpha_min);
        CHECK(s.draws() <= (std::uint64_t)(Rational(2 * (std::int64_t)k) /
                                           alpha_min)
                               .ceil());
        CHECK(r >= Rational(0));
        CHECK(r <= Rational(1));
        Rational truth = density(*cls, S, 16);
        if ((r - truth).abs() >= tau) ++misses;
    }
    double bound = 2 * (std::exp(-(double)k * 0.25) + std::exp(-2.0 * k * 0.01));
    double sigma = std::sqrt(std::max(bound * (1 - bound), 1e-12) / trials);
    CHECK((double)misses / trials <= bound + 3 * sigma);
}

TEST_CASE("conditioned sampling") {
    auto cls = std::make_shared<DecisionListClass>(10);
    SUBCASE("no constraints returns the first draw") {
        Stream s(cls, 0, Rational(0), 9);
        (void)sample_conditioned(s, {});
        CHECK(s.draws() == 1);
    }
    SUBCASE("three fixed variables wait about eight draws") {
        Stream s(cls, 0, Rational(0), 10);
        std::vector<Literal> m3{{0, false}, {3, true}, {7, false}};
        const int runs = 10000;
        std::uint64_t before = 0;
        double total = 0;
        for (int t = 0; t < runs; ++t) {
            auto ex = sample_conditioned(s, m3);
            for (const auto& lit : m3) CHECK(cls->domain().satisfies(ex.x, lit));
            total += (double)(s.draws() - before);
            before = s.draws();
        }
        double mean = total / runs;
        CHECK(mean > 8.0 * 0.8);
        CHECK(mean < 8.0 * 1.2);
    }
    SUBCASE("contradictory constraints are rejected up front") {
        Stream s(cls, 0, Rational(0), 11);
        CHECK_THROWS_AS(sample_conditioned(s, {{2, false}, {2, true}}), input_error);
        CHECK(s.draws() == 0);
    }
}

TEST_CASE("exact query answers are the arithmetic expectation") {
    auto cls = thresholds(64);
    SUBCASE("the agreeing target scores one") {
        SQOracle o = SQOracle::exact_replay(cls, 16);
        SQQuery q{[&](std::uint64_t x, bool y) { return cls->evaluate(16, x) == y; },
                  "agree"};
        CHECK(o.answer(q) == Rational(1));
        CHECK(o.queries() == 1);
    }
    SUBCASE("noise mixes the expectation linearly") {
        // distance(h, f) = 1/4, eta = 0.1: E[agree] = 0.9*(3/4) + 0.1*(1/4)
        SQOracle o(cls, 16, Rational(1, 10), Rational(1, 100),
                   SQOracle::Backend::exact_adversarial, 1, true);
        SQQuery q{[&](std::uint64_t x, bool y) { return cls->evaluate(32, x) == y; },
                  "agree"};
        CHECK(o.answer(q) == Rational(7, 10));
        // the sampled backend concurs within its tolerance
        SQOracle ms(cls, 16, Rational(1, 10), Rational(1, 100),
                    SQOracle::Backend::sampled, 7);
        Rational a = ms.answer(q);
        CHECK((a - Rational(7, 10)).abs() <= Rational(1, 50));
    }
}

TEST_CASE("one-query subroutines match their exact semantics everywhere") {
    for (int n = 3; n <= 6; ++n) {
        auto cls = thresholds(n);
        for (std::uint64_t f = 0; f < cls->count(); ++f) {
            SQOracle o = SQOracle::exact_replay(cls, f);
            std::uint64_t expected_queries = 0;
            for (std::uint64_t h = 0; h < cls->count(); ++h) {
                for (int enum_eps = 1; enum_eps <= 4; ++enum_eps) {
                    Rational eps(enum_eps, 8);
                    bool got = is_close_sq(o, h, eps);
                    CHECK(got == (distance(*cls, h, f) <= Rational(2) * eps));
                    ++expected_queries;
                    CHECK(o.queries() == expected_queries);
                }
            }
            // estimate over every nonempty S
            for (std::uint64_t mask = 1; mask < ((std::uint64_t)1 << n); ++mask) {
                std::vector<std::uint64_t> pts;
                for (std::uint64_t x = 0; x < (std::uint64_t)n; ++x)
                    if ((mask >> x) & 1) pts.push_back(x);
                ExampleSet S = ExampleSet::explicit_set(pts);
                Rational r = estimate_sq(o, S, Rational(1, 4));
                ++expected_queries;
                CHECK(o.queries() == expected_queries);
                CHECK(r == density(*cls, S, f));
            }
        }
    }
}

TEST_CASE("estimate_sq enforces the rescaled tolerance precondition") {
    auto cls = thresholds(16);
    // oracle tolerance 1/4 is too coarse for tau = 1/4 over a 1/16 slice
    SQOracle o(cls, 4, Rational(0), Rational(1, 4),
               SQOracle::Backend::exact_adversarial, 1, true);
    ExampleSet slim = ExampleSet::explicit_set({0});
    CHECK_THROWS_AS(estimate_sq(o, slim, Rational(1, 4)), input_error);
}

TEST_CASE("adversarial perturbation stays inside tau") {
    auto cls = thresholds(32);
    Rational tau(1, 20);
    SQOracle o(cls, 9, Rational(0), tau, SQOracle::Backend::exact_adversarial, 99);
    SQOracle exact = SQOracle::exact_replay(cls, 9);
    for (std::uint64_t h = 0; h < cls->count(); h += 3) {
        SQQuery q{[&, h](std::uint64_t x, bool y) { return cls->evaluate(h, x) == y; },
                  "agree"};
        Rational noisy = o.answer(q);
        Rational truth = exact.answer(q);
        CHECK((noisy - truth).abs() <= tau);
    }
}

TEST_CASE("noise inflation factor") {
    CHECK(noise_inflate(100, Rational(0)) == 100);
    CHECK(noise_inflate(64, Rational(1, 4)) == 256); // (1-1/2)^-2 = 4
    CHECK(noise_inflate(500, Rational(1, 10)) == 782); // ceil(500/0.64)
}
