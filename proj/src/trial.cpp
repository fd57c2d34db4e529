#include "bml/trial.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ostream>
#include <random>
#include <thread>

#include "bml/learners/decision_list_learner.hpp"
#include "bml/learners/equal_piece_learner.hpp"
#include "bml/learners/general_learner.hpp"
#include "bml/learners/threshold_learner.hpp"
#include "bml/subroutines.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace bml {

LearnerKind learner_kind_from(const std::string& name) {
    if (name == "general") return LearnerKind::general;
    if (name == "threshold") return LearnerKind::threshold;
    if (name == "equal-piece") return LearnerKind::equal_piece;
    if (name == "decision-list") return LearnerKind::decision_list;
    throw input_error("unknown learner: " + name);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t id) {
    // splitmix64 over (base, id); stable across worker counts
    std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ull * (id + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t worker_pool_size() {
    if (const char* env = std::getenv("BML_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return (std::uint64_t)v;
    }
#if defined(_OPENMP)
    return (std::uint64_t)omp_get_max_threads();
#else
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
#endif
}

double TrialBatch::success_rate() const {
    if (reports.empty()) return 0.0;
    std::size_t ok = 0;
    for (const auto& r : reports)
        if (r.success) ++ok;
    return (double)ok / (double)reports.size();
}

std::uint64_t TrialBatch::median_samples() const {
    if (reports.empty()) return 0;
    std::vector<std::uint64_t> s;
    for (const auto& r : reports) s.push_back(r.samples);
    std::sort(s.begin(), s.end());
    return s[s.size() / 2];
}

std::uint64_t TrialBatch::max_bits_semantic() const {
    std::uint64_t m = 0;
    for (const auto& r : reports) m = std::max(m, r.bits_semantic);
    return m;
}

std::vector<std::int64_t> sample_piece_starts(const EqualPieceClass& cls,
                                              std::uint64_t seed) {
    return sample_piece_starts_with_count(cls, seed, -1);
}

std::vector<std::int64_t> sample_piece_starts_with_count(const EqualPieceClass& cls,
                                                         std::uint64_t seed,
                                                         int pieces) {
    const int n = cls.domain().n;
    const Rational pn = cls.piece_len() * Rational(n);
    constexpr std::uint64_t kSat = (std::uint64_t)1 << 62;
    auto admissible = [&](std::int64_t j) { return Rational(j) + pn < Rational(n); };
    auto next_start = [&](std::int64_t j) {
        return std::min<std::int64_t>((Rational(j) + pn).floor() + 1, n + 1);
    };
    // N[m][j] = tuples with exactly m more pieces, all starts >= j
    int max_m = pieces < 0 ? n : pieces;
    std::vector<std::vector<std::uint64_t>> N(
        (std::size_t)max_m + 1, std::vector<std::uint64_t>((std::size_t)n + 2, 0));
    for (std::int64_t j = 0; j <= n + 1; ++j) N[0][(std::size_t)j] = 1;
    int reachable = 0;
    for (int m = 1; m <= max_m; ++m) {
        bool any = false;
        for (std::int64_t j = n; j >= 0; --j) {
            std::uint64_t t = N[(std::size_t)m][(std::size_t)j + 1];
            if (admissible(j))
                t += N[(std::size_t)m - 1][(std::size_t)next_start(j)];
            N[(std::size_t)m][(std::size_t)j] = std::min(t, kSat);
            if (t > 0) any = true;
        }
        if (any) reachable = m;
    }
    std::mt19937_64 rng(seed);
    auto draw_below = [&](std::uint64_t total) {
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % total;
        std::uint64_t r;
        do { r = rng(); } while (r >= limit);
        return r % total;
    };
    int want = pieces;
    if (want < 0) {
        // piece count proportional to the family mass
        std::uint64_t total = 0;
        for (int m = 0; m <= reachable; ++m) {
            if (N[(std::size_t)m][0] >= kSat)
                throw input_error("family too large for uniform sampling");
            total += N[(std::size_t)m][0];
        }
        std::uint64_t r = draw_below(total);
        want = 0;
        while (r >= N[(std::size_t)want][0]) r -= N[(std::size_t)want][0], ++want;
    }
    if (want > max_m || N[(std::size_t)want][0] == 0)
        throw input_error("no target with the requested piece count exists");
    if (N[(std::size_t)want][0] >= kSat)
        throw input_error("family too large for uniform sampling");
    std::vector<std::int64_t> starts;
    std::int64_t j = 0;
    for (int left = want; left > 0;) {
        // place the next start at j or beyond, uniformly over completions
        std::uint64_t here =
            admissible(j) ? N[(std::size_t)left - 1][(std::size_t)next_start(j)] : 0;
        std::uint64_t total = N[(std::size_t)left][(std::size_t)j];
        if (here > 0 && draw_below(total) < here) {
            starts.push_back(j);
            j = next_start(j);
            --left;
        } else {
            ++j;
        }
    }
    return starts;
}

Rational decision_list_distance(const DecisionList& a, const DecisionList& b) {
    Domain dom = Domain::cube(a.n);
    std::uint64_t diff = 0;
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        if (a.eval(dom, x) != b.eval(dom, x)) ++diff;
    return Rational((std::int64_t)diff, (std::int64_t)dom.size());
}

namespace {

TrialReport one_trial(const TrialConfig& cfg, std::uint64_t id,
                      std::uint64_t k_resolved) {
    TrialReport rep;
    rep.id = id;
    rep.seed = trial_seed(cfg.base_seed, id);
    auto t0 = std::chrono::steady_clock::now();
    try {
        std::mt19937_64 pick(rep.seed ^ 0xABCDEF1234567890ull);
        switch (cfg.kind) {
        case LearnerKind::general: {
            std::uint64_t target = cfg.target_override
                                       ? *cfg.target_override
                                       : pick() % cfg.cls->count();
            Stream stream(cfg.cls, target, cfg.eta, rep.seed);
            std::unique_ptr<OracleDriver> driver;
            auto th = std::dynamic_pointer_cast<const ThresholdClass>(cfg.cls);
            if (cfg.oracle == "structured") {
                if (!th) throw input_error("structured oracle needs thresholds");
                driver = std::make_unique<IntervalDriver>(th, cfg.eps);
            } else if (cfg.oracle == "brute-force") {
                driver = std::make_unique<BitsetDriver>(cfg.cls, cfg.alpha, cfg.eps);
            } else {
                throw input_error("unknown oracle: " + cfg.oracle);
            }
            GeneralLearner learner(cfg.cls, std::move(driver), cfg.alpha, cfg.eps,
                                   k_resolved, cfg.eta);
            MemoryReport mem = account_memory(learner, stream, cfg.step_cap);
            rep.samples = mem.samples;
            rep.bits_physical = mem.max_physical_bits;
            rep.bits_semantic = mem.max_semantic_bits;
            rep.iterations = learner.iterations();
            rep.dist = distance(*cfg.cls, learner.result(), target);
            rep.hypothesis = learner.result_text();
            break;
        }
        case LearnerKind::threshold: {
            auto th = std::dynamic_pointer_cast<const ThresholdClass>(cfg.cls);
            if (!th) throw input_error("threshold learner needs a threshold family");
            std::uint64_t target = cfg.target_override
                                       ? *cfg.target_override
                                       : pick() % cfg.cls->count();
            Stream stream(cfg.cls, target, cfg.eta, rep.seed);
            ThresholdLearner learner(th, cfg.eps);
            MemoryReport mem = account_memory(learner, stream, cfg.step_cap);
            rep.samples = mem.samples;
            rep.bits_physical = mem.max_physical_bits;
            rep.bits_semantic = mem.max_semantic_bits;
            rep.dist = distance(*cfg.cls, learner.result(), target);
            rep.hypothesis = learner.result_text();
            break;
        }
        case LearnerKind::equal_piece: {
            auto ep = std::dynamic_pointer_cast<const EqualPieceClass>(cfg.cls);
            if (!ep) throw input_error("equal-piece learner needs a piece family");
            auto starts = sample_piece_starts(*ep, rep.seed ^ 0x5151515151515151ull);
            std::vector<Rational> target;
            for (std::int64_t j : starts) target.emplace_back(j, ep->domain().n);
            const Rational p = ep->piece_len();
            Stream stream(
                cfg.cls,
                [ep, target, p](std::uint64_t x) {
                    return eval_piece_starts(ep->domain(), target, p, x);
                },
                cfg.eta, rep.seed);
            std::optional<Rational> alpha;
            if (cfg.alpha.num() != 0) alpha = cfg.alpha;
            EqualPieceLearner learner(ep, cfg.eps, alpha);
            MemoryReport mem = account_memory(learner, stream, cfg.step_cap);
            rep.samples = mem.samples;
            rep.bits_physical = mem.max_physical_bits;
            rep.bits_semantic = mem.max_semantic_bits;
            rep.dist = piece_description_distance(ep->domain(), learner.result(),
                                                  target, p);
            rep.hypothesis = learner.result_text();
            break;
        }
        case LearnerKind::decision_list: {
            auto dl = std::dynamic_pointer_cast<const DecisionListClass>(cfg.cls);
            if (!dl) throw input_error("decision-list learner needs a list family");
            std::uint64_t target = cfg.target_override
                                       ? *cfg.target_override
                                       : pick() % dl->count();
            DecisionList target_list = dl->decode(target);
            // table-backed target labels keep the stream cheap per draw
            auto table = std::make_shared<std::vector<char>>(dl->domain().size());
            for (std::uint64_t x = 0; x < dl->domain().size(); ++x)
                (*table)[x] = target_list.eval(dl->domain(), x);
            Stream stream(
                cfg.cls, [table](std::uint64_t x) { return (*table)[x] != 0; },
                cfg.eta, rep.seed);
            DecisionListLearner learner(dl->domain().n, cfg.eps, cfg.k, cfg.eta);
            MemoryReport mem = account_memory(learner, stream, cfg.step_cap);
            rep.samples = mem.samples;
            rep.bits_physical = mem.max_physical_bits;
            rep.bits_semantic = mem.max_semantic_bits;
            rep.dist = decision_list_distance(learner.result(), target_list);
            rep.hypothesis = learner.result_text();
            break;
        }
        }
        Rational accept = cfg.accept_distance.value_or(Rational(3) * cfg.eps);
        rep.success = rep.dist <= accept;
    } catch (const std::exception& e) {
        rep.errored = true;
        rep.error = e.what();
        rep.success = false;
        rep.dist = Rational(1);
    }
    if (cfg.measure_time) {
        auto t1 = std::chrono::steady_clock::now();
        rep.ms = (std::uint64_t)std::chrono::duration_cast<std::chrono::milliseconds>(
                     t1 - t0)
                     .count();
    }
    return rep;
}

} // namespace

TrialBatch run_trials(const TrialConfig& cfg) {
    if (cfg.trials == 0) throw input_error("trial count must be >= 1");
    TrialBatch batch;
    std::uint64_t k_resolved = 0;
    if (cfg.kind == LearnerKind::general) {
        k_resolved = cfg.k ? *cfg.k
                           : noise_inflate(auto_subroutine_k(cfg.cls->count(),
                                                             cfg.alpha, 0.9),
                                           cfg.eta);
    } else if (cfg.k) {
        k_resolved = *cfg.k;
    }
    batch.k_used = k_resolved;
    batch.reports.resize(cfg.trials);
    int workers = (int)worker_pool_size();
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (std::int64_t id = 0; id < (std::int64_t)cfg.trials; ++id)
        batch.reports[(std::size_t)id] = one_trial(cfg, (std::uint64_t)id, k_resolved);
    (void)workers;
    return batch;
}

void write_csv(std::ostream& os, const TrialBatch& batch) {
    os << "trial,seed,samples,bits_semantic,bits_physical,distance_num,"
          "distance_den,success,ms\n";
    for (const auto& r : batch.reports) {
        os << r.id << ',' << r.seed << ',' << r.samples << ',' << r.bits_semantic
           << ',' << r.bits_physical << ',' << r.dist.num() << ',' << r.dist.den()
           << ',' << (r.success ? 1 : 0) << ',' << r.ms << '\n';
    }
}

} // namespace bml
