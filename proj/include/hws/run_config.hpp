#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace hws {

/// Everything needed to reproduce one CLI run. Serialized next to each run's
/// outputs as resolved-config.json with every default materialized, so the
/// rerun command can replay it byte-for-byte.
struct RunConfig {
    std::string command;        // sweep | search | compare | synth-bench
    std::string dataset;        // CSV path, synth:<...> URI, or curve:<csv> URI
    std::string columnSpec;     // column spec path for CSV datasets
    std::string strategy = "binary";  // search command: linear | binary
    int n = 1000;
    int delta = 4;
    double alpha = 0.004;
    std::string stopMode = "complete";   // early | complete | two-sigma
    std::string priorMode = "bracket";   // bracket | full-range
    double sigmaFloor = 0.05;
    double dropoutRate = 0.0;
    int epochs = 15;
    double learningRate = 0.05;
    int batchSize = 32;
    double splitRatio = 0.8;
    std::uint64_t seed = 42;  // master seed; the derived seeds below are filled
    std::uint64_t weightSeed = 0;
    std::uint64_t shuffleSeed = 0;
    std::uint64_t splitSeed = 0;
    std::uint64_t benchSeed = 0;
    int trials = 100;  // synth-bench
    int workers = 0;   // 0 = library default thread count
    std::string outDir = "hws-out";

    /// Fills the derived seeds from the master seed unless already set.
    void resolveSeeds();

    std::string toJson() const;
    static RunConfig fromJson(const std::string& text);
    static RunConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

/// Command entry points; each writes resolved-config.json plus its declared
/// artifacts under config.outDir and returns a process exit code.
int cmdSweep(const RunConfig& config);
int cmdSearch(const RunConfig& config);
int cmdCompare(const RunConfig& config);
int cmdSynthBench(const RunConfig& config);
int cmdRerun(const std::filesystem::path& resolvedConfig, const std::string& outOverride = "");

}  // namespace hws
