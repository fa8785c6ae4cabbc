#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hws/run_config.hpp"

namespace {

void addCommonOptions(CLI::App* cmd, hws::RunConfig& config) {
    cmd->add_option("--dataset", config.dataset,
                    "CSV path, synth:<kind>:<peak>:<n>[:noise_sd[:seed]], or curve:<csv>");
    cmd->add_option("--column-spec", config.columnSpec, "column role file for CSV datasets");
    cmd->add_option("--n", config.n, "upper bound of the hidden layer width search");
    cmd->add_option("--delta", config.delta, "separation between the two secant evaluations (even)");
    cmd->add_option("--alpha", config.alpha, "posterior acceptance threshold for --stop-mode early");
    cmd->add_option("--stop-mode", config.stopMode, "early | complete | two-sigma");
    cmd->add_option("--prior-mode", config.priorMode, "bracket | full-range");
    cmd->add_option("--sigma0", config.sigmaFloor, "fallback slope dispersion in accuracy units");
    cmd->add_option("--dropout-rate", config.dropoutRate, "hidden-layer dropout rate (0 disables)");
    cmd->add_flag_callback(
        "--dropout", [&config]() { if (config.dropoutRate == 0.0) config.dropoutRate = 0.2; },
        "enable dropout at the default rate 0.2");
    cmd->add_option("--epochs", config.epochs, "training epochs per candidate model");
    cmd->add_option("--lr", config.learningRate, "SGD learning rate");
    cmd->add_option("--batch-size", config.batchSize, "mini-batch size");
    cmd->add_option("--split-ratio", config.splitRatio, "train fraction of the dataset");
    cmd->add_option("--seed", config.seed, "master seed; weight/shuffle/split/bench seeds derive from it");
    cmd->add_option("--workers", config.workers, "thread count (0 = library default)");
    cmd->add_option("--out", config.outDir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hidden-layer width search for one-hidden-layer binary classifiers"};
    app.require_subcommand(1);

    hws::RunConfig config;

    auto* sweep = app.add_subcommand("sweep", "train every width 1..n and write the accuracy curve");
    addCommonOptions(sweep, config);

    auto* search = app.add_subcommand("search", "run one search strategy and write its trace");
    addCommonOptions(search, config);
    search->add_option("--strategy", config.strategy, "linear | binary");

    auto* compare = app.add_subcommand("compare", "run both strategies on a shared cache");
    addCommonOptions(compare, config);

    auto* bench = app.add_subcommand("synth-bench", "search statistics over random synthetic cusps");
    addCommonOptions(bench, config);
    bench->add_option("--trials", config.trials, "number of random cusps");

    std::string rerunPath;
    std::string rerunOut;
    auto* rerun = app.add_subcommand("rerun", "replay a run from its resolved-config.json");
    rerun->add_option("config", rerunPath, "path to resolved-config.json")->required();
    rerun->add_option("--out", rerunOut, "override the output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rerun->parsed()) return hws::cmdRerun(rerunPath, rerunOut);
        config.resolveSeeds();
        if (sweep->parsed()) {
            config.command = "sweep";
            return hws::cmdSweep(config);
        }
        if (search->parsed()) {
            config.command = "search";
            return hws::cmdSearch(config);
        }
        if (compare->parsed()) {
            config.command = "compare";
            return hws::cmdCompare(config);
        }
        config.command = "synth-bench";
        return hws::cmdSynthBench(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
