#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hws/evaluator.hpp"
#include "hws/search.hpp"

namespace hws {

enum class CurveKind { CuspAbs, Quadratic, GaussianBump, TwoPeak, Monotone };

const char* curveKindName(CurveKind kind);

/// Deterministic synthetic accuracy curve over sizes 1..n. Values always lie
/// in [0, 1]; the noiseless unimodal kinds are strictly increasing up to the
/// peak and strictly decreasing after it. Noise is frozen per size from
/// (noiseSeed, size), so every evaluation of one size returns the same value.
struct SyntheticCurve {
    CurveKind kind = CurveKind::CuspAbs;
    int peakLocation = 1;
    double scale = 1.0;      // flank steepness / bump width control in (0, 1]
    double noiseSd = 0.0;
    std::uint64_t noiseSeed = 0;
    int n = 1;

    void validate() const;
    double value(int size) const;
};

std::unique_ptr<Evaluator> makeCurve(const SyntheticCurve& spec);

/// Parses "synth:<kind>:<peak>:<n>[:noise_sd[:seed]]". Kind accepts the full
/// names plus the short aliases cusp and gauss.
SyntheticCurve parseCurveUri(const std::string& uri);

/// Scans all sizes 1..n; first index wins ties. Uses whatever evaluator it
/// is given, so callers wanting untouched search budgets pass a fresh one.
std::pair<int, double> exhaustiveArgmax(Evaluator& evaluator, int n);

/// Indices (1-based) whose value strictly exceeds both neighbours; the two
/// boundary sizes qualify against their single neighbour.
std::vector<int> localMaxima(const std::vector<double>& values);

/// True when the tabulated curve has exactly one local maximum. Benchmarks
/// call this before trusting a curve to be unimodal.
bool isStrictlyUnimodal(const std::vector<double>& values);

std::vector<double> tabulate(const SyntheticCurve& spec);

/// Random strictly unimodal curve: a tent / quadratic / Gaussian flank pair
/// with randomized peak, asymmetry and height. Returns the value table; the
/// true argmax is peakLocation.
struct RandomUnimodal {
    std::vector<double> values;
    int peak = 0;
};
RandomUnimodal makeRandomUnimodal(std::uint64_t seed, int n);

struct BenchRun {
    int runId = 0;
    int truth = 0;
    int bestSize = 0;
    int error = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t evaluations = 0;
};

struct Table1Report {
    int trials = 0;
    int n = 0;
    int delta = 0;
    double alpha = 0.0;
    StopMode stopMode = StopMode::RunToCompletion;
    BenchmarkStats linear;
    BenchmarkStats binary;
    std::vector<BenchRun> linearRuns;
    std::vector<BenchRun> binaryRuns;
    std::vector<SearchTrace> binaryTraces;  // kept for invariant audits
};

/// Reruns both searches over `trials` random noiseless cusps and aggregates
/// the comparison/evaluation/error statistics for each strategy.
Table1Report table1Benchmark(int trials, int n, int delta, double alpha, std::uint64_t seed,
                             StopMode stopMode = StopMode::RunToCompletion,
                             PriorMode priorMode = PriorMode::CurrentBracket, double sigmaFloor = 0.05);

/// Fixed-width text table comparing the two strategies, one row each.
std::string renderTable(const Table1Report& report);

}  // namespace hws
