#include "hws/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hws/errors.hpp"
#include "hws/rng.hpp"

namespace hws {

using nlohmann::json;

void RunConfig::resolveSeeds() {
    if (weightSeed == 0) weightSeed = rng::mix(seed, 1);
    if (shuffleSeed == 0) shuffleSeed = rng::mix(seed, 2);
    if (splitSeed == 0) splitSeed = rng::mix(seed, 3);
    if (benchSeed == 0) benchSeed = rng::mix(seed, 4);
}

std::string RunConfig::toJson() const {
    json j;
    j["schema_version"] = 1;
    j["command"] = command;
    j["dataset"] = dataset;
    j["column_spec"] = columnSpec;
    j["strategy"] = strategy;
    j["n"] = n;
    j["delta"] = delta;
    j["alpha"] = alpha;
    j["stop_mode"] = stopMode;
    j["prior_mode"] = priorMode;
    j["sigma_floor"] = sigmaFloor;
    j["dropout_rate"] = dropoutRate;
    j["epochs"] = epochs;
    j["learning_rate"] = learningRate;
    j["batch_size"] = batchSize;
    j["split_ratio"] = splitRatio;
    j["seed"] = seed;
    j["weight_seed"] = weightSeed;
    j["shuffle_seed"] = shuffleSeed;
    j["split_seed"] = splitSeed;
    j["bench_seed"] = benchSeed;
    j["trials"] = trials;
    j["workers"] = workers;
    j["out_dir"] = outDir;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::fromJson(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad run config: ") + e.what());
    }
    RunConfig c;
    try {
        c.command = j.at("command").get<std::string>();
        c.dataset = j.value("dataset", std::string());
        c.columnSpec = j.value("column_spec", std::string());
        c.strategy = j.value("strategy", std::string("binary"));
        c.n = j.value("n", 1000);
        c.delta = j.value("delta", 4);
        c.alpha = j.value("alpha", 0.004);
        c.stopMode = j.value("stop_mode", std::string("complete"));
        c.priorMode = j.value("prior_mode", std::string("bracket"));
        c.sigmaFloor = j.value("sigma_floor", 0.05);
        c.dropoutRate = j.value("dropout_rate", 0.0);
        c.epochs = j.value("epochs", 15);
        c.learningRate = j.value("learning_rate", 0.05);
        c.batchSize = j.value("batch_size", 32);
        c.splitRatio = j.value("split_ratio", 0.8);
        c.seed = j.value("seed", std::uint64_t{42});
        c.weightSeed = j.value("weight_seed", std::uint64_t{0});
        c.shuffleSeed = j.value("shuffle_seed", std::uint64_t{0});
        c.splitSeed = j.value("split_seed", std::uint64_t{0});
        c.benchSeed = j.value("bench_seed", std::uint64_t{0});
        c.trials = j.value("trials", 100);
        c.workers = j.value("workers", 0);
        c.outDir = j.value("out_dir", std::string("hws-out"));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad run config field: ") + e.what());
    }
    c.resolveSeeds();
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fromJson(buffer.str());
}

void RunConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << toJson();
}

}  // namespace hws
