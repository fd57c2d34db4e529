#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "bml/learners/decision_list_learner.hpp"
#include "bml/learners/equal_piece_learner.hpp"
#include "bml/learners/general_learner.hpp"
#include "bml/learners/threshold_learner.hpp"
#include "bml/trial.hpp"

using namespace bml;

namespace {

// target is representable iff some choice of pairs from the surviving level
// sets extends the frozen prefix into a list that agrees with it on every
// assignment it can still reach (deeper levels are unconstrained, and a
// decision list restricted to a subcube stays a decision list, so any
// reachable remainder completes).
bool representable(const DecisionListLearner& L, const DecisionList& f) {
    Domain dom = Domain::cube(f.n);
    std::vector<char> alive(dom.size(), 1);
    auto agrees = [&](const std::vector<char>& cube, const Literal& lit, bool out) {
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            if (cube[x] && dom.satisfies(x, lit) && f.eval(dom, x) != out)
                return false;
        return true;
    };
    auto without = [&](const std::vector<char>& cube, const Literal& lit) {
        std::vector<char> out(dom.size(), 0);
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            if (cube[x] && !dom.satisfies(x, lit)) out[x] = 1;
        return out;
    };
    // the frozen prefix must match f on everything it catches
    for (const auto& lv : L.prefix()) {
        if (!agrees(alive, lv.lit, lv.out)) return false;
        alive = without(alive, lv.lit);
    }
    int last = std::min(L.current_level(), L.levels());
    std::vector<bool> used((std::size_t)f.n, false);
    for (const auto& lv : L.prefix()) used[(std::size_t)lv.lit.var] = true;
    std::function<bool(int, const std::vector<char>&)> dfs =
        [&](int level, const std::vector<char>& cube) -> bool {
        if (level > last) return true;
        std::uint64_t mask = L.level_mask(level);
        for (int id = 0; id < 4 * f.n; ++id) {
            if (!(mask >> id & 1)) continue;
            Literal lit = DecisionListLearner::pair_literal(id);
            if (used[(std::size_t)lit.var]) continue;
            if (!agrees(cube, lit, DecisionListLearner::pair_bit(id))) continue;
            used[(std::size_t)lit.var] = true;
            bool ok = dfs(level + 1, without(cube, lit));
            used[(std::size_t)lit.var] = false;
            if (ok) return true;
        }
        return false;
    };
    return dfs(L.frozen() + 1, alive);
}

DecisionList random_full_list(int n, std::mt19937_64& rng) {
    DecisionListClass cls(n);
    return cls.decode(rng() % cls.count());
}

} // namespace

TEST_CASE("decision-list evaluation semantics") {
    // if x1 then 1 else if not-x2 then 0 else 1
    DecisionList dl(3, {{{0, false}, true}, {{1, true}, false}}, true);
    Domain dom = Domain::cube(3);
    auto assignment = [&](int x1, int x2, int x3) {
        return (std::uint64_t)(x1 << 2 | x2 << 1 | x3);
    };
    CHECK(dl.eval(dom, assignment(1, 0, 1)) == true);  // first literal fires
    CHECK(dl.eval(dom, assignment(0, 1, 0)) == true);  // both miss, default
    CHECK(dl.eval(dom, assignment(0, 0, 1)) == false); // not-x2 fires
}

TEST_CASE("decision lists agree with a truth-table evaluator") {
    std::mt19937_64 rng(5);
    Domain dom = Domain::cube(4);
    for (int t = 0; t < 50; ++t) {
        DecisionList dl = random_full_list(4, rng);
        // independent evaluator: explicit table built by first-match scan
        std::vector<bool> table(16);
        for (std::uint64_t x = 0; x < 16; ++x) {
            bool decided = false, value = dl.default_bit;
            for (const auto& lv : dl.levels) {
                bool bit = dom.assignment_bit(x, lv.lit.var);
                if (!decided && bit != lv.lit.negated) {
                    value = lv.out;
                    decided = true;
                }
            }
            table[x] = value;
        }
        for (std::uint64_t x = 0; x < 16; ++x) CHECK(dl.eval(dom, x) == table[x]);
    }
}

TEST_CASE("decision-list construction rejects duplicate variables") {
    CHECK_THROWS_AS(
        DecisionList(3, {{{0, false}, true}, {{0, true}, false}}, false),
        input_error);
}

TEST_CASE("decision-list text form round-trips") {
    DecisionList dl(3, {{{2, false}, true}, {{0, true}, false}}, false);
    CHECK(dl.text() == "[(+3,1),(-1,0)]:0");
    CHECK(DecisionList::parse(3, "[(+3,1),(-1,0)]:0") == dl);
    CHECK(DecisionList::parse(3, "[]:1").eval(Domain::cube(3), 0) == true);
    CHECK_THROWS_AS(DecisionList::parse(3, "[(+9,1)]:0"), input_error);
    CHECK_THROWS_AS(DecisionList::parse(3, "nonsense"), input_error);
}

TEST_CASE("family counts match the factorial-times-four-power form") {
    CHECK(DecisionListClass(2).count() == 32);
    for (int n = 1; n <= 4; ++n) {
        DecisionListClass cls(n);
        std::uint64_t expect = 2;
        for (int i = 1; i <= n; ++i) expect *= (std::uint64_t)i;
        for (int i = 0; i < n; ++i) expect *= 2;
        for (int i = 0; i + 1 < n; ++i) expect *= 2;
        CHECK(cls.count() == expect);
        CHECK(std::log2((double)cls.count()) <=
              n * std::log2((double)n) + 2.0 * n + 1e-9);
        // decode is injective on the canonical form
        if (n <= 3) {
            std::set<std::string> seen;
            for (std::uint64_t h = 0; h < cls.count(); ++h)
                seen.insert(cls.decode(h).text());
            CHECK(seen.size() == cls.count());
        }
    }
}

TEST_CASE("threshold learner returns the midpoint immediately at eps >= 1") {
    auto cls = std::make_shared<ThresholdClass>(64);
    ThresholdLearner learner(cls, Rational(1));
    CHECK(learner.finished());
    CHECK(cls->cut_value(learner.result()) == Rational(63, 128)); // nearest cut
                                                                  // below 1/2 on tie
}

TEST_CASE("threshold learner finds targets and keeps them inside the interval") {
    auto cls = std::make_shared<ThresholdClass>(256);
    const Rational eps(1, 20);
    const Rational cell(1, 256);
    int success = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        std::uint64_t target =
            (std::uint64_t)(trial_seed(3, (std::uint64_t)t) % cls->count());
        Rational cut = cls->cut_value(target);
        Stream stream(cls, target, Rational(0), 100 + (std::uint64_t)t);
        ThresholdLearner learner(cls, eps);
        bool violated = false;
        learner.on_update = [&](const Rational& a1, const Rational& a2) {
            if (cut < a1 - cell || cut > a2 + cell) violated = true;
        };
        account_memory(learner, stream);
        CHECK_FALSE(violated);
        if (distance(*cls, learner.result(), target) <= eps) ++success;
    }
    CHECK(success >= (int)(0.95 * trials));
}

TEST_CASE("threshold learner state stays within two grid indices") {
    auto cls = std::make_shared<ThresholdClass>(1024);
    Stream stream(cls, 512, Rational(0), 9);
    ThresholdLearner learner(cls, Rational(1, 20));
    MemoryReport mem = account_memory(learner, stream);
    CHECK(mem.max_semantic_bits == 2 * bits_for(2048));
    CHECK(mem.max_semantic_bits <= 2 * 11 + 8);
    CHECK(mem.max_physical_bits <= mem.max_semantic_bits + 1);
}

TEST_CASE("piece learner returns nothing for the all-zeros target") {
    auto cls = std::make_shared<EqualPieceClass>(64, Rational(1, 4));
    Stream stream(cls, [](std::uint64_t) { return false; }, Rational(0), 17);
    EqualPieceLearner learner(cls, Rational(1, 5), Rational(1, 20));
    account_memory(learner, stream);
    CHECK(learner.result().empty());
}

TEST_CASE("piece learner rejects an inadmissible window parameter") {
    auto cls = std::make_shared<EqualPieceClass>(64, Rational(1, 4));
    CHECK_THROWS_AS(EqualPieceLearner(cls, Rational(1, 5), Rational(1, 64)),
                    input_error);
    // default alpha = p^2 eps / 48 is under 2/|X| here
    CHECK_THROWS_AS(EqualPieceLearner(cls, Rational(1, 5)), input_error);
}

TEST_CASE("piece learner recovers single pieces and keeps the gap invariant") {
    auto cls = std::make_shared<EqualPieceClass>(512, Rational(1, 4));
    const Rational eps(1, 5), alpha(1, 64), p(1, 4);
    int success = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 pick(9000 + (std::uint64_t)t);
        std::int64_t start = (std::int64_t)(pick() % 380);
        std::vector<Rational> target{Rational(start, 512)};
        Stream stream(
            cls,
            [&, target](std::uint64_t x) {
                return eval_piece_starts(cls->domain(), target, p, x);
            },
            Rational(0), 40 + (std::uint64_t)t);
        EqualPieceLearner learner(cls, eps, alpha);
        account_memory(learner, stream);
        auto got = learner.result();
        for (std::size_t i = 0; i + 1 < got.size(); ++i)
            CHECK(got[i] + p < got[i + 1] + alpha);
        Rational err = piece_description_distance(cls->domain(), got, target, p);
        if (err <= Rational(3) * eps) ++success;
    }
    CHECK(success >= (int)(0.9 * trials));
}

TEST_CASE("general learner accepts the only hypothesis of a singleton family") {
    struct Singleton final : HypothesisClass {
        Domain dom = Domain::grid(4);
        const Domain& domain() const override { return dom; }
        std::uint64_t count() const override { return 1; }
        bool evaluate(std::uint64_t, std::uint64_t x) const override {
            return x % 2 == 0;
        }
        std::string name() const override { return "singleton"; }
        std::string describe(std::uint64_t) const override { return "the-one"; }
    };
    auto cls = std::make_shared<Singleton>();
    GeneralLearner learner(
        cls, std::make_unique<BitsetDriver>(cls, Rational(1, 2), Rational(1, 4)),
        Rational(1, 2), Rational(1, 4), 50, Rational(0));
    SQOracle oracle = SQOracle::exact_replay(ClassPtr(cls), (std::uint64_t)0);
    auto run = learner.run_exact(oracle);
    CHECK(run.hypothesis == 0);
    CHECK(run.iterations == 0);      // one tight branch, zero deletions
    CHECK(oracle.queries() == 1);
    CHECK(learner.iterations() <= learner.iterations_bound());
}

TEST_CASE("general learner replay succeeds exactly on every threshold target") {
    auto cls = std::make_shared<ThresholdClass>(16);
    Rational alpha(3, 10), eps(1, 4);
    for (std::uint64_t f = 0; f < cls->count(); ++f) {
        GeneralLearner learner(cls,
                               std::make_unique<BitsetDriver>(cls, alpha, eps),
                               alpha, eps, 100, Rational(0));
        SQOracle oracle = SQOracle::exact_replay(ClassPtr(cls), f);
        auto run = learner.run_exact(oracle);
        CHECK(distance(*cls, run.hypothesis, f) <= Rational(3) * eps);
        CHECK(run.iterations <= learner.iterations_bound());
    }
}

TEST_CASE("general learner sampled runs mostly succeed") {
    auto cls = std::make_shared<ThresholdClass>(16);
    TrialConfig cfg;
    cfg.cls = cls;
    cfg.kind = LearnerKind::general;
    cfg.eps = Rational(1, 4);
    cfg.alpha = Rational(3, 10);
    cfg.trials = 30;
    cfg.base_seed = 21;
    auto batch = run_trials(cfg);
    CHECK(batch.success_rate() >= 0.85);
    for (const auto& r : batch.reports) CHECK_FALSE(r.errored);
    // order check on the log|H| / alpha^2 state budget; the measured
    // multiplier lands well under ten
    double budget = std::log2(17.0) / (0.3 * 0.3);
    double c = (double)batch.max_bits_semantic() / budget;
    MESSAGE("general learner semantic bits ", batch.max_bits_semantic(),
            " = ", c, " x log|H|/alpha^2");
    CHECK(c <= 10.0);
}

TEST_CASE("auto k grows with confidence and survives degenerate alpha") {
    std::uint64_t k90 = auto_subroutine_k(129, Rational(1, 4), 0.90);
    std::uint64_t k99 = auto_subroutine_k(129, Rational(1, 4), 0.99);
    std::uint64_t k999 = auto_subroutine_k(129, Rational(1, 4), 0.999);
    CHECK(k90 <= k99);
    CHECK(k99 <= k999);
    // independent re-derivation of the union bound at the returned k
    double a = 0.25;
    double iters = std::ceil(std::log(129.0) / -std::log1p(-a * a / 2));
    auto bound = [&](double k) {
        return iters * 2 *
               (std::exp(-k * a) + std::exp(-2 * k * (a / 8) * (a / 8)));
    };
    CHECK(bound((double)k90) <= 0.1);
    CHECK(bound((double)k90 - 1) > 0.1);
    (void)auto_subroutine_k(129, Rational(1), 0.9); // driven by confidence alone
    CHECK_THROWS_AS(auto_subroutine_k(129, Rational(1, 4), 1.5), input_error);
}

TEST_CASE("list learner with an exact oracle never orphans the target") {
    std::mt19937_64 rng(31337);
    auto cls6 = std::make_shared<DecisionListClass>(6);
    int checked = 0;
    for (int t = 0; t < 25; ++t) {
        std::uint64_t idx = rng() % cls6->count();
        DecisionList f = cls6->decode(idx);
        DecisionListLearner learner(6, Rational(1, 10));
        bool lost = false;
        learner.on_delete = [&](int, int) {
            if (!lost && !representable(learner, f)) lost = true;
        };
        SQOracle oracle = SQOracle::exact_replay(ClassPtr(cls6), idx);
        DecisionList got = learner.run_exact(oracle);
        CHECK_FALSE(lost);
        ++checked;
        // the assembled list lands within tolerance on these replays
        CHECK(decision_list_distance(got, f) <= Rational(3) * Rational(1, 10));
    }
    CHECK(checked == 25);
}

TEST_CASE("list learner replay of a constant-zero target deletes only one-sides") {
    auto cls = std::make_shared<DecisionListClass>(4);
    // all literals lead to 0, default 0
    DecisionList zero(4,
                      {{{0, false}, false},
                       {{1, false}, false},
                       {{2, false}, false},
                       {{3, false}, false}},
                      false);
    DecisionListLearner learner(4, Rational(1, 5));
    std::vector<int> deleted_bits;
    learner.on_delete = [&](int, int id) {
        deleted_bits.push_back(DecisionListLearner::pair_bit(id) ? 1 : 0);
    };
    Domain dom = Domain::cube(4);
    SQOracle oracle = SQOracle::exact_replay(
        ClassPtr(cls), [&](std::uint64_t x) { return zero.eval(dom, x); });
    DecisionList got = learner.run_exact(oracle);
    REQUIRE(!deleted_bits.empty());
    for (int b : deleted_bits) CHECK(b == 1);
    for (std::uint64_t x = 0; x < dom.size(); ++x) CHECK_FALSE(got.eval(dom, x));
}

TEST_CASE("one level suffices at eps beyond one half") {
    std::mt19937_64 rng(77);
    auto cls = std::make_shared<DecisionListClass>(4);
    for (int t = 0; t < 10; ++t) {
        std::uint64_t idx = rng() % cls->count();
        DecisionListLearner learner(4, Rational(3, 5));
        CHECK(learner.levels() == 1);
        SQOracle oracle = SQOracle::exact_replay(ClassPtr(cls), idx);
        DecisionList got = learner.run_exact(oracle);
        Rational d = decision_list_distance(got, cls->decode(idx));
        CHECK(d <= Rational(3) * Rational(3, 5));
    }
}

TEST_CASE("list learner handles sampled streams at small scale") {
    auto cls = std::make_shared<DecisionListClass>(4);
    TrialConfig cfg;
    cfg.cls = cls;
    cfg.kind = LearnerKind::decision_list;
    cfg.eps = Rational(1, 5);
    cfg.trials = 20;
    cfg.base_seed = 5150;
    auto batch = run_trials(cfg);
    CHECK(batch.success_rate() >= 0.8);
}

TEST_CASE("accounting flags a learner that hoards examples") {
    struct Hoarder final : StreamingLearner {
        std::vector<std::uint64_t> seen;
        void reset() override { seen.clear(); }
        bool finished() const override { return seen.size() >= 200; }
        bool step(const LabeledExample& ex) override {
            seen.push_back(ex.x);
            return finished();
        }
        BitString encode_state() const override {
            BitWriter w;
            for (auto x : seen) w.put(x, 11);
            return w.take();
        }
        std::uint64_t semantic_bits() const override { return seen.size() * 11; }
        std::string name() const override { return "hoarder"; }
        std::string result_text() const override { return ""; }
    };
    auto cls = std::make_shared<ThresholdClass>(1024);
    Stream stream(cls, 100, Rational(0), 3);
    Hoarder hoarder;
    MemoryReport mem = account_memory(hoarder, stream);
    // the o(log|X| log|H|) budget at n=1024 is ~110 bits; hoarding blows it
    double budget = std::log2(1024.0) * std::log2(1025.0);
    CHECK((double)mem.max_physical_bits > budget);

    // and a non-terminating learner trips the step cap
    struct Spinner final : StreamingLearner {
        void reset() override {}
        bool finished() const override { return false; }
        bool step(const LabeledExample&) override { return false; }
        BitString encode_state() const override { return {}; }
        std::uint64_t semantic_bits() const override { return 0; }
        std::string name() const override { return "spinner"; }
        std::string result_text() const override { return ""; }
    };
    Spinner spinner;
    Stream s2(cls, 100, Rational(0), 4);
    CHECK_THROWS_AS(account_memory(spinner, s2, 1000), non_termination);
}

TEST_CASE("encoded states round-trip behaviorally for every learner") {
    std::mt19937_64 rng(1234);

    SUBCASE("threshold") {
        auto cls = std::make_shared<ThresholdClass>(128);
        for (int t = 0; t < 20; ++t) {
            Stream sa(cls, rng() % cls->count(), Rational(0), rng());
            ThresholdLearner a(cls, Rational(1, 16));
            for (int i = 0; i < (int)(rng() % 30) && !a.finished(); ++i)
                a.step(sa.draw());
            ThresholdLearner b(cls, Rational(1, 16));
            b.decode_state(a.encode_state());
            CHECK(a.encode_state() == b.encode_state());
            while (!a.finished()) {
                LabeledExample ex = sa.draw();
                a.step(ex);
                b.step(ex);
                CHECK(a.encode_state() == b.encode_state());
            }
            CHECK(a.result() == b.result());
        }
    }
    SUBCASE("equal piece") {
        auto cls = std::make_shared<EqualPieceClass>(64, Rational(1, 4));
        for (int t = 0; t < 20; ++t) {
            std::vector<Rational> target{Rational(1, 8)};
            Stream sa(
                cls,
                [&](std::uint64_t x) {
                    return eval_piece_starts(cls->domain(), target, Rational(1, 4),
                                             x);
                },
                Rational(0), rng());
            EqualPieceLearner a(cls, Rational(1, 5), Rational(1, 16));
            for (int i = 0; i < (int)(rng() % 50) && !a.finished(); ++i)
                a.step(sa.draw());
            EqualPieceLearner b(cls, Rational(1, 5), Rational(1, 16));
            b.decode_state(a.encode_state());
            CHECK(a.encode_state() == b.encode_state());
            while (!a.finished()) {
                LabeledExample ex = sa.draw();
                a.step(ex);
                b.step(ex);
                CHECK(a.encode_state() == b.encode_state());
            }
            CHECK(a.result_text() == b.result_text());
        }
    }
    SUBCASE("general") {
        auto cls = std::make_shared<ThresholdClass>(12);
        for (int t = 0; t < 10; ++t) {
            std::uint64_t f = rng() % cls->count();
            Stream sa(cls, f, Rational(0), rng());
            Rational alpha(3, 10), eps(1, 4);
            GeneralLearner a(cls, std::make_unique<BitsetDriver>(cls, alpha, eps),
                             alpha, eps, 60, Rational(0));
            for (int i = 0; i < (int)(rng() % 200) && !a.finished(); ++i)
                a.step(sa.draw());
            GeneralLearner b(cls, std::make_unique<BitsetDriver>(cls, alpha, eps),
                             alpha, eps, 60, Rational(0));
            b.decode_state(a.encode_state());
            CHECK(a.encode_state() == b.encode_state());
            while (!a.finished()) {
                LabeledExample ex = sa.draw();
                a.step(ex);
                b.step(ex);
                CHECK(a.encode_state() == b.encode_state());
            }
            CHECK(a.result() == b.result());
        }
    }
    SUBCASE("decision list") {
        auto cls = std::make_shared<DecisionListClass>(4);
        for (int t = 0; t < 8; ++t) {
            std::uint64_t f = rng() % cls->count();
            Stream sa(cls, f, Rational(0), rng());
            DecisionListLearner a(4, Rational(1, 5), 80);
            for (int i = 0; i < (int)(rng() % 3000) && !a.finished(); ++i)
                a.step(sa.draw());
            DecisionListLearner b(4, Rational(1, 5), 80);
            b.decode_state(a.encode_state());
            CHECK(a.encode_state() == b.encode_state());
            while (!a.finished()) {
                LabeledExample ex = sa.draw();
                a.step(ex);
                b.step(ex);
                CHECK(a.encode_state() == b.encode_state());
            }
            CHECK(a.result_text() == b.result_text());
        }
    }
}
