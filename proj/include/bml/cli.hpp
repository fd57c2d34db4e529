#pragma once

#include <iosfwd>
#include <string>

namespace bml::cli {

// exit codes: 0 success, 1 acceptance-threshold miss, 2 input error
inline constexpr int kOk = 0;
inline constexpr int kThresholdMiss = 1;
inline constexpr int kInputError = 2;

struct LearnOptions {
    std::string class_file;
    std::string learner;
    std::string epsilon;
    std::string alpha;
    std::string k = "auto";
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    std::string noise = "0";
    std::string out;
    double min_success = 0.9;
    std::string oracle = "brute-force";
    std::string accept_distance; // empty = 3 eps
    bool timing = false;
};

struct CheckSeparabilityOptions {
    std::string class_file;
    std::string alpha;
    std::string epsilon;
    std::string mode = "exhaustive"; // exhaustive | sampled
    std::uint64_t budget = 200;
    std::uint64_t seed = 1;
};

struct ClassInfoOptions {
    std::string class_file;
};

int cmd_learn(const LearnOptions& opt, std::ostream& out, std::ostream& err);
int cmd_check_separability(const CheckSeparabilityOptions& opt, std::ostream& out,
                           std::ostream& err);
int cmd_class_info(const ClassInfoOptions& opt, std::ostream& out, std::ostream& err);

} // namespace bml::cli
