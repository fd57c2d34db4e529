// Times the parallel kernels against their serial references: the tightness
// center scan, the exhaustive witness search, and the trial pool.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "bml/classes/decision_list.hpp"
#include "bml/classes/threshold.hpp"
#include "bml/oracle.hpp"
#include "bml/trial.hpp"

using namespace bml;

namespace {

template <typename F> double timed(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %.2fx\n", name,
                serial, parallel, parallel > 0 ? serial / parallel : 0.0);
}

} // namespace

int main() {
    std::printf("workers: %llu\n", (unsigned long long)worker_pool_size());

    {
        // tightness scan over a large spread-out candidate set
        auto cls = std::make_shared<DecisionListClass>(5);
        std::vector<std::uint64_t> T;
        for (std::uint64_t h = 0; h < cls->count(); h += 37) T.push_back(h);
        Rational alpha(99, 100), eps(1, 32);
        std::optional<std::uint64_t> a, b;
        double ts = timed([&] { a = tight_center(*cls, T, alpha, eps, Exec::serial); });
        double tp = timed([&] { b = tight_center(*cls, T, alpha, eps, Exec::parallel); });
        if (a != b) { std::printf("MISMATCH in tight_center\n"); return 1; }
        row("tight-center scan", ts, tp);
    }

    {
        // exhaustive witness search over every subset of a 20-point domain
        auto cls = std::make_shared<ThresholdClass>(20);
        std::vector<std::uint64_t> T;
        for (std::uint64_t h = 0; h < cls->count(); h += 2) T.push_back(h);
        // alpha high enough that the structured candidates all fail and the
        // scan walks deep into the subset masks
        Rational alpha(49, 50), eps(1, 100);
        SeparabilityVerdict va, vb;
        double ts = timed([&] {
            va = check_separability(*cls, T, alpha, eps, std::nullopt,
                                    SearchOrder::forward, Exec::serial);
        });
        double tp = timed([&] {
            vb = check_separability(*cls, T, alpha, eps, std::nullopt,
                                    SearchOrder::forward, Exec::parallel);
        });
        if (va.kind != vb.kind) { std::printf("MISMATCH in witness search\n"); return 1; }
        row("exhaustive witness search", ts, tp);
    }

    {
        // threshold learner trial pool
        TrialConfig cfg;
        cfg.cls = std::make_shared<ThresholdClass>(4096);
        cfg.kind = LearnerKind::threshold;
        cfg.eps = Rational(1, 50);
        cfg.trials = 400;
        cfg.base_seed = 7;
        double ts, tp;
        {
            setenv("BML_WORKERS", "1", 1);
            ts = timed([&] { (void)run_trials(cfg); });
            unsetenv("BML_WORKERS");
        }
        tp = timed([&] { (void)run_trials(cfg); });
        row("threshold trial pool", ts, tp);
    }
    return 0;
}
