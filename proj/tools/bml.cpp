#include <iostream>

#include <CLI11.hpp>

#include "bml/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bounded-memory learning experiments"};
    app.require_subcommand(1);

    bml::cli::LearnOptions learn;
    auto* cmd_learn = app.add_subcommand("learn", "run seeded learning trials");
    cmd_learn->add_option("--class", learn.class_file, "class description file")
        ->required();
    cmd_learn
        ->add_option("--learner", learn.learner,
                     "general | threshold | equal-piece | decision-list")
        ->required();
    cmd_learn->add_option("--epsilon", learn.epsilon, "accuracy parameter")
        ->required();
    cmd_learn->add_option("--alpha", learn.alpha,
                          "separability parameter (general) / window (equal-piece)");
    cmd_learn->add_option("--k", learn.k, "subroutine repetitions or 'auto'");
    cmd_learn->add_option("--trials", learn.trials, "number of trials");
    cmd_learn->add_option("--seed", learn.seed, "base seed");
    cmd_learn->add_option("--noise", learn.noise, "label flip rate in [0, 1/2)");
    cmd_learn->add_option("--out", learn.out, "CSV output file (default stdout)");
    cmd_learn->add_option("--min-success", learn.min_success,
                          "exit 0 iff success rate reaches this");
    cmd_learn->add_option("--oracle", learn.oracle,
                          "general learner oracle: brute-force | structured");
    cmd_learn->add_option("--accept-distance", learn.accept_distance,
                          "success distance (default 3*epsilon)");
    cmd_learn->add_flag("--timing", learn.timing,
                        "measure wall time per trial (CSV no longer reproducible)");

    bml::cli::CheckSeparabilityOptions sep;
    auto* cmd_sep =
        app.add_subcommand("check-separability", "audit the separability condition");
    cmd_sep->add_option("--class", sep.class_file, "class description file")
        ->required();
    cmd_sep->add_option("--alpha", sep.alpha, "separability parameter")->required();
    cmd_sep->add_option("--epsilon", sep.epsilon, "tightness radius")->required();
    cmd_sep->add_option("--mode", sep.mode, "exhaustive | sampled");
    cmd_sep->add_option("--budget", sep.budget, "sampled candidate sets");
    cmd_sep->add_option("--seed", sep.seed, "sampling seed");

    bml::cli::ClassInfoOptions info;
    auto* cmd_info = app.add_subcommand("class-info", "describe a hypothesis family");
    cmd_info->add_option("--class", info.class_file, "class description file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : bml::cli::kInputError;
    }

    if (cmd_learn->parsed())
        return bml::cli::cmd_learn(learn, std::cout, std::cerr);
    if (cmd_sep->parsed())
        return bml::cli::cmd_check_separability(sep, std::cout, std::cerr);
    return bml::cli::cmd_class_info(info, std::cout, std::cerr);
}
