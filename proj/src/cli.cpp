#include "bml/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "bml/class_file.hpp"
#include "bml/oracle.hpp"
#include "bml/trial.hpp"

namespace bml::cli {

namespace {

int fail_input(std::ostream& err, const std::string& what) {
    err << "error: " << what << "\n";
    return kInputError;
}

std::string verdict_line(const HypothesisClass& cls,
                         const std::vector<std::uint64_t>& T,
                         const SeparabilityVerdict& v) {
    std::ostringstream os;
    os << "T={";
    for (std::size_t i = 0; i < T.size(); ++i) os << (i ? "," : "") << T[i];
    os << "} ";
    switch (v.kind) {
    case SeparabilityVerdict::Kind::tight:
        os << "tight center=" << v.center << " (" << cls.describe(v.center) << ")";
        break;
    case SeparabilityVerdict::Kind::witness:
        os << "witness S=" << v.S.str(cls.domain()) << " T0=" << v.T0.str()
           << " T1=" << v.T1.str() << " gap=" << v.gap.str();
        break;
    case SeparabilityVerdict::Kind::counterexample:
        os << "counterexample";
        break;
    }
    return os.str();
}

// Re-check a witness verdict from scratch: floors, disjointness, gap.
void revalidate_verdict(const HypothesisClass& cls,
                        const std::vector<std::uint64_t>& T, const Rational& alpha,
                        const SeparabilityVerdict& v) {
    if (v.kind != SeparabilityVerdict::Kind::witness) return;
    auto t0 = v.T0.expand();
    auto t1 = v.T1.expand();
    std::int64_t m = std::max<std::int64_t>(1, ceil_mul(alpha, (std::int64_t)T.size()));
    if ((std::int64_t)t0.size() < m || (std::int64_t)t1.size() < m)
        throw contract_error("witness sides below the alpha |T| floor");
    for (std::uint64_t h : t1)
        if (std::binary_search(t0.begin(), t0.end(), h))
            throw contract_error("witness sides intersect");
    std::int64_t s_floor =
        std::max<std::int64_t>(1, ceil_mul(alpha, (std::int64_t)cls.domain().size()));
    if ((std::int64_t)v.S.size(cls.domain()) < s_floor)
        throw contract_error("witness S below the alpha |X| floor");
    Rational gap =
        (density(cls, v.S, v.T1) - density(cls, v.S, v.T0)).abs();
    if (!(gap >= alpha)) throw contract_error("witness density gap below alpha");
}

} // namespace

int cmd_learn(const LearnOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        if (opt.trials == 0) throw input_error("--trials must be >= 1");
        ClassFile cf = ClassFile::parse_file(opt.class_file);
        TrialConfig cfg;
        cfg.cls = cf.build();
        cfg.kind = learner_kind_from(opt.learner);
        cfg.eps = Rational::parse(opt.epsilon);
        cfg.alpha = opt.alpha.empty() ? Rational(0) : Rational::parse(opt.alpha);
        cfg.eta = Rational::parse(opt.noise);
        if (opt.k != "auto") {
            std::uint64_t kv = std::stoull(opt.k);
            if (kv == 0) throw input_error("--k must be >= 1 or auto");
            cfg.k = kv;
        }
        cfg.trials = opt.trials;
        cfg.base_seed = opt.seed;
        if (!opt.accept_distance.empty())
            cfg.accept_distance = Rational::parse(opt.accept_distance);
        cfg.oracle = opt.oracle;
        cfg.measure_time = opt.timing;
        if (cf.seed_class) cfg.base_seed ^= *cf.seed_class << 32;
        if (cfg.kind == LearnerKind::general) {
            if (cfg.alpha.num() <= 0)
                throw input_error("the general learner needs --alpha > 0");
            if (cfg.cls->domain().size() > 24)
                throw input_error("general learner domains are capped at 24 points");
        }

        TrialBatch batch = run_trials(cfg);

        if (!opt.out.empty()) {
            std::ofstream f(opt.out, std::ios::binary | std::ios::trunc);
            if (!f) throw input_error("cannot write " + opt.out);
            write_csv(f, batch);
        } else {
            write_csv(out, batch);
        }

        std::size_t errored = 0;
        for (const auto& r : batch.reports)
            if (r.errored) ++errored;
        out << "summary: learner=" << opt.learner << " trials=" << opt.trials
            << " success_rate=" << std::fixed << std::setprecision(4)
            << batch.success_rate() << " median_samples=" << batch.median_samples()
            << " max_bits_semantic=" << batch.max_bits_semantic()
            << " k=" << (batch.k_used ? std::to_string(batch.k_used) : "auto")
            << " errors=" << errored << "\n";
        return batch.success_rate() >= opt.min_success ? kOk : kThresholdMiss;
    } catch (const input_error& e) {
        return fail_input(err, e.what());
    } catch (const std::exception& e) {
        return fail_input(err, e.what());
    }
}

int cmd_check_separability(const CheckSeparabilityOptions& opt, std::ostream& out,
                           std::ostream& err) {
    try {
        ClassFile cf = ClassFile::parse_file(opt.class_file);
        ClassPtr cls = cf.build();
        Rational alpha = Rational::parse(opt.alpha);
        Rational eps = Rational::parse(opt.epsilon);
        std::uint64_t count = cls->count();

        bool found_counterexample = false;
        std::uint64_t audited = 0;
        if (opt.mode == "exhaustive") {
            if (count > 20)
                throw input_error("exhaustive audit capped at 20 hypotheses");
            if (cls->domain().size() > 24)
                throw input_error("exhaustive audit capped at 24 domain points");
            for (std::uint64_t mask = 1; mask < ((std::uint64_t)1 << count); ++mask) {
                std::vector<std::uint64_t> T;
                for (std::uint64_t h = 0; h < count; ++h)
                    if ((mask >> h) & 1) T.push_back(h);
                auto v = check_separability(*cls, T, alpha, eps);
                revalidate_verdict(*cls, T, alpha, v);
                out << verdict_line(*cls, T, v) << "\n";
                ++audited;
                if (v.kind == SeparabilityVerdict::Kind::counterexample) {
                    found_counterexample = true;
                    break;
                }
            }
            out << (found_counterexample
                        ? "result: counterexample found"
                        : "result: verified (" + std::to_string(audited) +
                              " candidate sets, exhaustive)")
                << "\n";
        } else if (opt.mode == "sampled") {
            std::mt19937_64 rng(opt.seed);
            for (std::uint64_t i = 0; i < opt.budget; ++i) {
                std::vector<std::uint64_t> T;
                while (T.empty())
                    for (std::uint64_t h = 0; h < count; ++h)
                        if (rng() & 1) T.push_back(h);
                auto v = check_separability(*cls, T, alpha, eps,
                                            SampledSearch{rng(), 512});
                revalidate_verdict(*cls, T, alpha, v);
                out << verdict_line(*cls, T, v) << "\n";
                ++audited;
                if (v.kind == SeparabilityVerdict::Kind::counterexample) {
                    found_counterexample = true;
                    break;
                }
            }
            out << (found_counterexample
                        ? "result: counterexample found (sampled)"
                        : "result: no counterexample found in " +
                              std::to_string(audited) +
                              " sampled sets (evidence, not proof)")
                << "\n";
        } else {
            throw input_error("mode must be exhaustive or sampled");
        }
        return kOk;
    } catch (const std::exception& e) {
        return fail_input(err, e.what());
    }
}

int cmd_class_info(const ClassInfoOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        ClassFile cf = ClassFile::parse_file(opt.class_file);
        ClassPtr cls = cf.build();
        const Domain& dom = cls->domain();
        out << "class: " << cls->name() << "\n";
        out << "|X| = " << dom.size() << "\n";
        std::uint64_t count = cls->count();
        out << "|H| = " << count << "\n";
        out << "log2|H| = " << std::setprecision(6) << std::log2((double)count)
            << "\n";
        if (cf.kind == "decision-list") {
            double bound = dom.n * std::log2((double)dom.n) + 2.0 * dom.n;
            out << "log2-count bound n*log2(n)+2n = " << bound << "\n";
        }
        if (cf.kind == "equal-piece") {
            auto ep = std::dynamic_pointer_cast<const EqualPieceClass>(cls);
            out << "recursive count = "
                << EqualPieceClass::recursive_count(dom.n, ep->piece_len()) << "\n";
        }
        if (count <= 32 && dom.size() <= 32) {
            out << "adjacency (rows h, cols x):\n";
            for (std::uint64_t h = 0; h < count; ++h) {
                out << "  h" << h << " ";
                for (std::uint64_t x = 0; x < dom.size(); ++x)
                    out << (cls->evaluate(h, x) ? '1' : '0');
                out << "  d(X,h)=" << density(*cls, ExampleSet::full(), h).str()
                    << "  " << cls->describe(h) << "\n";
            }
        }
        return kOk;
    } catch (const std::exception& e) {
        return fail_input(err, e.what());
    }
}

} // namespace bml::cli
