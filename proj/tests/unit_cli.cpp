#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bml/class_file.hpp"
#include "bml/cli.hpp"
#include "bml/subroutines.hpp"
#include "bml/trial.hpp"

using namespace bml;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "/tmp/bml_test_" + name;
    std::ofstream f(path, std::ios::trunc);
    f << text;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("class files parse and build") {
    auto cf = ClassFile::parse_text("kind = threshold\nn = 16\n# comment\n");
    CHECK(cf.kind == "threshold");
    CHECK(cf.n == 16);
    CHECK(cf.build()->count() == 17);

    auto ep = ClassFile::parse_text("kind = equal-piece\nn = 8\np = 1/2\n");
    CHECK(ep.build()->count() == 5);

    auto dl = ClassFile::parse_text("kind = decision-list\nn = 3\nseed-class = 9\n");
    CHECK(dl.build()->count() == 384);
    CHECK(dl.seed_class == 9);

    CHECK_THROWS_AS(ClassFile::parse_text("kind = threshold\n"), input_error);
    CHECK_THROWS_AS(ClassFile::parse_text("n = 4\n"), input_error);
    CHECK_THROWS_AS(ClassFile::parse_text("kind = nope\nn = 4\n").build(),
                    input_error);
    CHECK_THROWS_AS(ClassFile::parse_text("kind = equal-piece\nn = 8\n").build(),
                    input_error);
    CHECK_THROWS_AS(ClassFile::parse_text("junk line\n"), input_error);
}

TEST_CASE("learn command writes deterministic CSV and summaries") {
    std::string cls = write_temp("th.cls", "kind = threshold\nn = 128\n");
    std::string out1 = "/tmp/bml_test_run1.csv";
    std::string out2 = "/tmp/bml_test_run2.csv";
    cli::LearnOptions opt;
    opt.class_file = cls;
    opt.learner = "threshold";
    opt.epsilon = "0.05";
    opt.trials = 25;
    opt.seed = 42;
    opt.out = out1;
    std::ostringstream so, se;
    int rc = cli::cmd_learn(opt, so, se);
    CHECK(rc == cli::kOk);
    CHECK(so.str().find("summary:") != std::string::npos);
    opt.out = out2;
    std::ostringstream so2, se2;
    CHECK(cli::cmd_learn(opt, so2, se2) == cli::kOk);
    CHECK(slurp(out1) == slurp(out2));
    // header shape is part of the contract
    std::string csv = slurp(out1);
    CHECK(csv.rfind("trial,seed,samples,bits_semantic,bits_physical,distance_num,"
                    "distance_den,success,ms\n",
                    0) == 0);
}

TEST_CASE("learn command exit codes") {
    std::string cls = write_temp("th2.cls", "kind = threshold\nn = 64\n");
    cli::LearnOptions opt;
    opt.class_file = cls;
    opt.learner = "threshold";
    opt.epsilon = "0.05";
    opt.trials = 10;
    opt.seed = 7;
    SUBCASE("zero trials is an input error") {
        opt.trials = 0;
        std::ostringstream so, se;
        CHECK(cli::cmd_learn(opt, so, se) == cli::kInputError);
    }
    SUBCASE("missing class file is an input error") {
        opt.class_file = "/tmp/definitely_not_here.cls";
        std::ostringstream so, se;
        CHECK(cli::cmd_learn(opt, so, se) == cli::kInputError);
    }
    SUBCASE("an unreachable success bar exits 1") {
        opt.min_success = 1.1;
        std::ostringstream so, se;
        CHECK(cli::cmd_learn(opt, so, se) == cli::kThresholdMiss);
    }
    SUBCASE("bad learner name is an input error") {
        opt.learner = "nope";
        std::ostringstream so, se;
        CHECK(cli::cmd_learn(opt, so, se) == cli::kInputError);
    }
}

TEST_CASE("noise inflates the auto-sized k and is reported") {
    std::string cls = write_temp("th3.cls", "kind = threshold\nn = 16\n");
    cli::LearnOptions opt;
    opt.class_file = cls;
    opt.learner = "general";
    opt.epsilon = "0.25";
    opt.alpha = "0.3";
    opt.trials = 4;
    opt.seed = 3;
    std::ostringstream so, se;
    CHECK(cli::cmd_learn(opt, so, se) == cli::kOk);
    auto k_of = [](const std::string& s) {
        auto pos = s.find(" k=");
        return std::stoull(s.substr(pos + 3));
    };
    std::uint64_t k_clean = k_of(so.str());
    opt.noise = "0.1";
    std::ostringstream so2, se2;
    int rc = cli::cmd_learn(opt, so2, se2);
    CHECK((rc == cli::kOk || rc == cli::kThresholdMiss));
    std::uint64_t k_noisy = k_of(so2.str());
    CHECK(k_noisy == noise_inflate(k_clean, Rational(1, 10)));
}

TEST_CASE("separability audit verifies small thresholds exhaustively") {
    std::string cls = write_temp("th4.cls", "kind = threshold\nn = 6\n");
    cli::CheckSeparabilityOptions opt;
    opt.class_file = cls;
    opt.alpha = "0.3";
    opt.epsilon = "0.3";
    std::ostringstream so, se;
    CHECK(cli::cmd_check_separability(opt, so, se) == cli::kOk);
    CHECK(so.str().find("result: verified") != std::string::npos);
    // every audited set printed one verdict line
    CHECK(so.str().find("T={0}") != std::string::npos);
}

TEST_CASE("separability audit rejects oversized exhaustive requests") {
    std::string cls = write_temp("th5.cls", "kind = threshold\nn = 64\n");
    cli::CheckSeparabilityOptions opt;
    opt.class_file = cls;
    opt.alpha = "0.3";
    opt.epsilon = "0.3";
    std::ostringstream so, se;
    CHECK(cli::cmd_check_separability(opt, so, se) == cli::kInputError);
}

TEST_CASE("sampled separability audit covers random list subsets") {
    std::string cls = write_temp("dl.cls", "kind = decision-list\nn = 3\n");
    cli::CheckSeparabilityOptions opt;
    opt.class_file = cls;
    // the family-level guarantee floor at n=3, far below epsilon
    opt.alpha = "1/16200";
    opt.epsilon = "0.2";
    opt.mode = "sampled";
    opt.budget = 50;
    opt.seed = 11;
    std::ostringstream so, se;
    CHECK(cli::cmd_check_separability(opt, so, se) == cli::kOk);
    CHECK(so.str().find("no counterexample found") != std::string::npos);
    CHECK(so.str().find("evidence, not proof") != std::string::npos);
}

TEST_CASE("class info reports sizes, bounds and the density table") {
    std::string cls = write_temp("th6.cls", "kind = threshold\nn = 8\n");
    cli::ClassInfoOptions opt;
    opt.class_file = cls;
    std::ostringstream so, se;
    CHECK(cli::cmd_class_info(opt, so, se) == cli::kOk);
    CHECK(so.str().find("|H| = 9") != std::string::npos);
    CHECK(so.str().find("|X| = 8") != std::string::npos);
    CHECK(so.str().find("adjacency") != std::string::npos);

    std::string dl = write_temp("dl2.cls", "kind = decision-list\nn = 3\n");
    opt.class_file = dl;
    std::ostringstream so2, se2;
    CHECK(cli::cmd_class_info(opt, so2, se2) == cli::kOk);
    CHECK(so2.str().find("|H| = 384") != std::string::npos);
    CHECK(so2.str().find("log2-count bound") != std::string::npos);

    std::string ep = write_temp("ep.cls", "kind = equal-piece\nn = 8\np = 1/2\n");
    opt.class_file = ep;
    std::ostringstream so3, se3;
    CHECK(cli::cmd_class_info(opt, so3, se3) == cli::kOk);
    CHECK(so3.str().find("|H| = 5") != std::string::npos);
    CHECK(so3.str().find("recursive count = 5") != std::string::npos);
}

TEST_CASE("the built binary round-trips through a shell invocation") {
    const char* bin = std::getenv("BML_CLI_PATH");
    REQUIRE(bin != nullptr);
    std::string cls = write_temp("th7.cls", "kind = threshold\nn = 128\n");
    std::string cmd = std::string(bin) +
                      " learn --class " + cls +
                      " --learner threshold --epsilon 0.05 --trials 10 --seed 5"
                      " --out /tmp/bml_test_shell1.csv > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::string cmd2 = std::string(bin) +
                       " learn --class " + cls +
                       " --learner threshold --epsilon 0.05 --trials 10 --seed 5"
                       " --out /tmp/bml_test_shell2.csv > /dev/null";
    REQUIRE(std::system(cmd2.c_str()) == 0);
    CHECK(slurp("/tmp/bml_test_shell1.csv") == slurp("/tmp/bml_test_shell2.csv"));
    // bad flags exit 2
    std::string bad = std::string(bin) + " learn --learner threshold 2>/dev/null";
    int rc = std::system(bad.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}

TEST_CASE("worker pool width respects the environment override") {
    setenv("BML_WORKERS", "3", 1);
    CHECK(worker_pool_size() == 3);
    unsetenv("BML_WORKERS");
    CHECK(worker_pool_size() >= 1);
}

TEST_CASE("trial batches are identical for any worker count") {
    auto cls = std::make_shared<ThresholdClass>(256);
    TrialConfig cfg;
    cfg.cls = cls;
    cfg.kind = LearnerKind::threshold;
    cfg.eps = Rational(1, 16);
    cfg.trials = 16;
    cfg.base_seed = 99;
    setenv("BML_WORKERS", "1", 1);
    auto serial = run_trials(cfg);
    setenv("BML_WORKERS", "2", 1);
    auto parallel = run_trials(cfg);
    unsetenv("BML_WORKERS");
    REQUIRE(serial.reports.size() == parallel.reports.size());
    for (std::size_t i = 0; i < serial.reports.size(); ++i) {
        CHECK(serial.reports[i].seed == parallel.reports[i].seed);
        CHECK(serial.reports[i].samples == parallel.reports[i].samples);
        CHECK(serial.reports[i].dist == parallel.reports[i].dist);
    }
}
