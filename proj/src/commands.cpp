#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "hws/errors.hpp"
#include "hws/mlp.hpp"
#include "hws/oracle.hpp"
#include "hws/run_config.hpp"
#include "hws/search.hpp"
#include "hws/tabular.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hws {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string formatDouble(double v) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

StopMode stopModeFrom(const std::string& name) {
    if (name == "early") return StopMode::EarlyStop;
    if (name == "complete") return StopMode::RunToCompletion;
    if (name == "two-sigma") return StopMode::TwoSigma;
    throw PreconditionError("unknown stop mode '" + name + "' (expected early|complete|two-sigma)");
}

PriorMode priorModeFrom(const std::string& name) {
    if (name == "bracket") return PriorMode::CurrentBracket;
    if (name == "full-range") return PriorMode::FullRange;
    throw PreconditionError("unknown prior mode '" + name + "' (expected bracket|full-range)");
}

BinarySearchConfig binaryConfigFrom(const RunConfig& config) {
    BinarySearchConfig c;
    c.delta = config.delta;
    c.alpha = config.alpha;
    c.stopMode = stopModeFrom(config.stopMode);
    c.priorMode = priorModeFrom(config.priorMode);
    c.sigmaFloor = config.sigmaFloor;
    return c;
}

MlpConfig mlpConfigFrom(const RunConfig& config, std::size_t inputDim) {
    MlpConfig m;
    m.inputDim = inputDim;
    m.hiddenUnits = 1;
    m.dropoutRate = config.dropoutRate;
    m.epochs = static_cast<std::size_t>(config.epochs);
    m.learningRate = config.learningRate;
    m.batchSize = static_cast<std::size_t>(config.batchSize);
    m.weightSeed = config.weightSeed;
    m.shuffleSeed = config.shuffleSeed;
    return m;
}

/// Evaluator plus everything that must stay alive behind it.
struct EvaluatorBundle {
    std::unique_ptr<Evaluator> evaluator;
    std::optional<SplitDataset> dataset;  // engaged for tabular pipelines
    std::optional<MlpConfig> mlpConfig;
    int n = 0;
    bool tabular = false;
};

EvaluatorBundle makeEvaluator(const RunConfig& config) {
    if (config.dataset.empty()) throw PreconditionError("--dataset is required");
    EvaluatorBundle bundle;
    if (config.dataset.rfind("synth:", 0) == 0) {
        const SyntheticCurve curve = parseCurveUri(config.dataset);
        bundle.n = std::min(config.n, curve.n);
        bundle.evaluator = makeCurve(curve);
    } else if (config.dataset.rfind("curve:", 0) == 0) {
        auto curveEval = std::make_unique<CsvCurveEvaluator>(config.dataset.substr(6));
        bundle.n = std::min(config.n, curveEval->maxSize());
        bundle.evaluator = std::move(curveEval);
    } else {
        if (config.columnSpec.empty()) {
            throw PreconditionError("--column-spec is required for CSV datasets");
        }
        const RawTable raw = loadCsv(config.dataset, true);
        const ColumnSpecFile specs = loadColumnSpecs(config.columnSpec);
        bundle.dataset = preprocess(raw, specs, config.splitRatio, config.splitSeed);
        bundle.mlpConfig = mlpConfigFrom(config, bundle.dataset->train.inputDim);
        bundle.evaluator = std::make_unique<MlpPipelineEvaluator>(*bundle.dataset, *bundle.mlpConfig);
        bundle.n = config.n;
        bundle.tabular = true;
    }
    if (bundle.n < 1) throw PreconditionError("resolved search bound n must be >= 1");
    return bundle;
}

fs::path prepareOutDir(const RunConfig& config) {
    const fs::path dir(config.outDir);
    fs::create_directories(dir);
    config.save(dir / "resolved-config.json");
    return dir;
}

void applyWorkers(const RunConfig& config) {
#ifdef _OPENMP
    if (config.workers > 0) omp_set_num_threads(config.workers);
#else
    (void)config;
#endif
}

void writeText(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

json resultCommon(const RunConfig& config, const SearchResult& result) {
    json j;
    j["strategy"] = config.strategy;
    j["best_size"] = result.bestSize;
    j["best_accuracy"] = result.bestAccuracy;
    j["comparisons"] = result.comparisonsUsed;
    j["evaluations"] = result.evaluationsUsed;
    return j;
}

}  // namespace

int cmdSweep(const RunConfig& config) {
    applyWorkers(config);
    EvaluatorBundle bundle = makeEvaluator(config);
    const fs::path dir = prepareOutDir(config);
    const auto started = std::chrono::steady_clock::now();

    struct Point {
        double train = 0.0;
        double test = 0.0;
    };
    std::vector<Point> points(static_cast<std::size_t>(bundle.n));
    bool failed = false;
    std::string failure;

    if (bundle.tabular) {
        std::cout << datasetDigest(*bundle.dataset);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int size = 1; size <= bundle.n; ++size) {
            try {
                const auto trained =
                    train(*bundle.dataset, bundle.mlpConfig->withHiddenUnits(static_cast<std::size_t>(size)));
                points[static_cast<std::size_t>(size - 1)] = {trained.second.trainAccuracy,
                                                              trained.second.testAccuracy};
            } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
                {
                    failed = true;
                    failure = "size " + std::to_string(size) + ": " + e.what();
                }
            }
        }
    } else {
        for (int size = 1; size <= bundle.n; ++size) {
            const double v = bundle.evaluator->evaluate(size);
            points[static_cast<std::size_t>(size - 1)] = {v, v};
        }
    }
    if (failed) throw Error("sweep failed: " + failure);

    std::string csv = "size,train_accuracy,test_accuracy\n";
    SearchTrace trace;
    int bestSize = 1;
    for (int size = 1; size <= bundle.n; ++size) {
        const Point& p = points[static_cast<std::size_t>(size - 1)];
        csv += std::to_string(size) + "," + formatDouble(p.train) + "," + formatDouble(p.test) + "\n";
        trace.push(EvaluatedEvent{size, p.test});
        if (p.test > points[static_cast<std::size_t>(bestSize - 1)].test) bestSize = size;
    }
    trace.push(AcceptedEvent{bestSize, std::nullopt, "linear_argmax"});
    writeText(dir / "curve.csv", csv);
    trace.writeJsonLines(dir / "trace.jsonl");

    json result;
    result["command"] = "sweep";
    result["n"] = bundle.n;
    result["best_size"] = bestSize;
    result["best_test_accuracy"] = points[static_cast<std::size_t>(bestSize - 1)].test;
    result["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    writeText(dir / "result.json", result.dump(2) + "\n");

    std::cout << "sweep: best size " << bestSize << " with test accuracy "
              << formatDouble(points[static_cast<std::size_t>(bestSize - 1)].test) << " over sizes 1.."
              << bundle.n << "\n";
    std::cout << "wrote " << (dir / "curve.csv").string() << "\n";
    return 0;
}

int cmdSearch(const RunConfig& config) {
    applyWorkers(config);
    EvaluatorBundle bundle = makeEvaluator(config);
    const fs::path dir = prepareOutDir(config);
    const auto started = std::chrono::steady_clock::now();
    if (bundle.tabular) std::cout << datasetDigest(*bundle.dataset);

    SearchResult result;
    std::uint64_t distinct = 0;
    if (config.strategy == "linear") {
        result = linearSearch(*bundle.evaluator, bundle.n, config.workers > 1);
        distinct = bundle.evaluator->callCount();
    } else if (config.strategy == "binary") {
        MemoizingEvaluator memo(*bundle.evaluator);
        result = binarySearch(memo, SearchSpace::full(bundle.n), binaryConfigFrom(config));
        distinct = memo.missCount();
    } else {
        throw PreconditionError("unknown strategy '" + config.strategy + "' (expected linear|binary)");
    }

    result.trace.writeJsonLines(dir / "trace.jsonl");
    json j = resultCommon(config, result);
    j["command"] = "search";
    j["n"] = bundle.n;
    j["distinct_evaluations"] = distinct;
    j["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    writeText(dir / "result.json", j.dump(2) + "\n");

    std::cout << config.strategy << " search: best size " << result.bestSize << ", accuracy "
              << formatDouble(result.bestAccuracy) << ", " << result.comparisonsUsed << " steps, "
              << result.evaluationsUsed << " evaluations (" << distinct << " distinct)\n";
    return 0;
}

int cmdCompare(const RunConfig& config) {
    applyWorkers(config);
    EvaluatorBundle bundle = makeEvaluator(config);
    const fs::path dir = prepareOutDir(config);
    if (bundle.tabular) std::cout << datasetDigest(*bundle.dataset);

    // Both strategies pull values through one shared cache; per-strategy
    // evaluation counts stay logical (every evaluate() call counts).
    MemoizingEvaluator shared(*bundle.evaluator);

    const auto binaryStart = std::chrono::steady_clock::now();
    const SearchResult binary = binarySearch(shared, SearchSpace::full(bundle.n), binaryConfigFrom(config));
    const double binarySeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - binaryStart).count();

    const auto linearStart = std::chrono::steady_clock::now();
    const SearchResult linear = linearSearch(shared, bundle.n);
    const double linearSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - linearStart).count();

    binary.trace.writeJsonLines(dir / "trace_binary.jsonl");
    linear.trace.writeJsonLines(dir / "trace_linear.jsonl");

    const double stepRatio =
        static_cast<double>(linear.comparisonsUsed) / static_cast<double>(binary.comparisonsUsed);
    const double evalRatio =
        static_cast<double>(linear.evaluationsUsed) / static_cast<double>(binary.evaluationsUsed);

    std::ostringstream table;
    table << "strategy  best_size  best_accuracy  steps  evaluations\n";
    table << "linear    " << linear.bestSize << "  " << formatDouble(linear.bestAccuracy) << "  "
          << linear.comparisonsUsed << "  " << linear.evaluationsUsed << "\n";
    table << "binary    " << binary.bestSize << "  " << formatDouble(binary.bestAccuracy) << "  "
          << binary.comparisonsUsed << "  " << binary.evaluationsUsed << "\n";
    table << "step ratio: " << linear.comparisonsUsed << "/" << binary.comparisonsUsed << " = "
          << formatDouble(stepRatio) << "x\n";
    table << "evaluation ratio: " << linear.evaluationsUsed << "/" << binary.evaluationsUsed << " = "
          << formatDouble(evalRatio) << "x"
          << " (each binary comparison costs two pipeline evaluations, plus one final confirmation;"
          << " the step ratio is therefore roughly twice the evaluation ratio)\n";
    table << "distinct models trained across both strategies: " << bundle.evaluator->callCount() << "\n";
    if (linear.bestSize == binary.bestSize) {
        table << "both strategies selected the same size\n";
    } else {
        table << "strategies disagree by " << std::abs(linear.bestSize - binary.bestSize) << " units\n";
    }
    std::cout << table.str();
    writeText(dir / "compare.txt", table.str());

    json j;
    j["command"] = "compare";
    j["n"] = bundle.n;
    j["linear"] = {{"best_size", linear.bestSize},
                   {"best_accuracy", linear.bestAccuracy},
                   {"steps", linear.comparisonsUsed},
                   {"evaluations", linear.evaluationsUsed},
                   {"wall_time_seconds", linearSeconds}};
    j["binary"] = {{"best_size", binary.bestSize},
                   {"best_accuracy", binary.bestAccuracy},
                   {"steps", binary.comparisonsUsed},
                   {"evaluations", binary.evaluationsUsed},
                   {"wall_time_seconds", binarySeconds}};
    j["step_ratio"] = stepRatio;
    j["evaluation_ratio"] = evalRatio;
    j["distinct_models_trained"] = bundle.evaluator->callCount();
    writeText(dir / "result.json", j.dump(2) + "\n");
    return 0;
}

int cmdSynthBench(const RunConfig& config) {
    if (config.trials < 1) throw PreconditionError("--trials must be >= 1");
    applyWorkers(config);
    const fs::path dir = prepareOutDir(config);
    const auto started = std::chrono::steady_clock::now();

    const Table1Report report =
        table1Benchmark(config.trials, config.n, config.delta, config.alpha, config.benchSeed,
                        stopModeFrom(config.stopMode), priorModeFrom(config.priorMode), config.sigmaFloor);

    std::string csv = "run_id,strategy,truth,best_size,error,comparisons,evaluations\n";
    auto appendRuns = [&csv](const std::vector<BenchRun>& runs, const char* strategy) {
        for (const auto& run : runs) {
            csv += std::to_string(run.runId);
            csv += ",";
            csv += strategy;
            csv += "," + std::to_string(run.truth) + "," + std::to_string(run.bestSize) + "," +
                   std::to_string(run.error) + "," + std::to_string(run.comparisons) + "," +
                   std::to_string(run.evaluations) + "\n";
        }
    };
    appendRuns(report.linearRuns, "linear");
    appendRuns(report.binaryRuns, "binary");
    writeText(dir / "bench.csv", csv);

    const std::string table = renderTable(report);
    writeText(dir / "bench_table.txt", table);
    std::cout << table;

    auto statsJson = [](const BenchmarkStats& s) {
        return json{{"runs", s.runs},
                    {"mean_comparisons", s.meanComparisons},
                    {"sd_comparisons", s.sdComparisons},
                    {"mean_evaluations", s.meanEvaluations},
                    {"sd_evaluations", s.sdEvaluations},
                    {"mean_error", s.meanError},
                    {"sd_error", s.sdError}};
    };
    json j;
    j["command"] = "synth-bench";
    j["trials"] = config.trials;
    j["n"] = config.n;
    j["delta"] = config.delta;
    j["alpha"] = config.alpha;
    j["stop_mode"] = config.stopMode;
    j["linear"] = statsJson(report.linear);
    j["binary"] = statsJson(report.binary);
    j["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    writeText(dir / "result.json", j.dump(2) + "\n");
    return 0;
}

int cmdRerun(const std::filesystem::path& resolvedConfig, const std::string& outOverride) {
    RunConfig config = RunConfig::load(resolvedConfig);
    if (!outOverride.empty()) config.outDir = outOverride;
    if (config.command == "sweep") return cmdSweep(config);
    if (config.command == "search") return cmdSearch(config);
    if (config.command == "compare") return cmdCompare(config);
    if (config.command == "synth-bench") return cmdSynthBench(config);
    throw PreconditionError("unknown command '" + config.command + "' in " + resolvedConfig.string());
}

}  // namespace hws
