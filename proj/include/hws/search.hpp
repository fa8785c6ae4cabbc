#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hws/errors.hpp"
#include "hws/evaluator.hpp"
#include "hws/trace.hpp"

namespace hws {

/// Bracket of candidate hidden-layer sizes. `n` is the initial upper bound;
/// 1 <= lower <= upper <= n holds throughout a search.
struct SearchSpace {
    int lower = 1;
    int upper = 1;
    int n = 1;

    static SearchSpace full(int n) { return {1, n, n}; }
    void validate() const;
};

enum class StopMode {
    EarlyStop,        // accept the current midpoint once posterior > alpha
    RunToCompletion,  // shrink to a delta-wide bracket, keep the max-posterior midpoint
    TwoSigma,         // accept once the observed slope sits >= 2 sigma off the fitted trend
};

enum class PriorMode {
    CurrentBracket,  // delta / (gammaU - gammaL)
    FullRange,       // delta / (n - 1)
};

struct BinarySearchConfig {
    int delta = 4;  // even separation between the two secant evaluations
    double alpha = 0.004;
    StopMode stopMode = StopMode::RunToCompletion;
    PriorMode priorMode = PriorMode::CurrentBracket;
    double sigmaFloor = 0.05;  // dispersion fallback, in accuracy units

    void validate(int n) const;
};

/// Slope and midpoint histories on each flank of the presumed maximum.
struct SearchState {
    int gammaL = 1;
    int gammaU = 1;
    std::vector<double> slopesLower;  // all > 0
    std::vector<double> slopesUpper;  // all <= 0
    std::vector<int> midsLower;
    std::vector<int> midsUpper;
};

struct SearchResult {
    int bestSize = 0;
    double bestAccuracy = 0.0;
    std::uint64_t evaluationsUsed = 0;  // evaluate() calls made by the strategy
    std::uint64_t comparisonsUsed = 0;  // secant comparisons (binary) or scan steps (linear)
    SearchTrace trace;
};

/// Search failure that keeps the partial trace for inspection.
class SearchError : public Error {
public:
    SearchError(const std::string& message, SearchTrace trace)
        : Error(message), trace_(std::move(trace)) {}
    const SearchTrace& trace() const { return trace_; }

private:
    SearchTrace trace_;
};

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double sigma = 0.0;  // population sd of residuals, floored when degenerate
};

/// Ordinary least squares through (xs, ys). Throws PreconditionError when
/// fewer than two points are given and a singular-fit Error when xs are all
/// identical. A zero residual spread is floored at sigmaFloor.
LineFit fitLine(std::span<const double> xs, std::span<const double> ys, double sigmaFloor = 0.05);

/// Standard normal CDF.
double normalCdf(double z);

/// Probability that the newest slope is consistent with a maximum lying
/// inside the bracket, given the slope history of one flank.
double likelihood(std::span<const double> slopes, std::span<const int> mids, Side side,
                  double sigmaFloor = 0.05);

/// Chance of hitting the maximum at random between the current bounds,
/// clamped to at most 1.
double prior(int delta, int gammaL, int gammaU);

double posteriorProbability(std::span<const double> slopes, std::span<const int> mids, Side side,
                            int delta, int gammaL, int gammaU, double sigmaFloor = 0.05);

/// Secant slope across [size - delta/2, size + delta/2], endpoints clamped to
/// [1, n] with the divisor reduced to the actual separation. Both evaluations
/// and the slope are appended to the trace when one is supplied.
double secantSlope(Evaluator& evaluator, int size, int delta, int n, SearchTrace* trace = nullptr);

/// Exhaustive scan over sizes 1..n; first index wins ties. When parallel is
/// true the evaluations fan out across OpenMP workers and are merged back in
/// size order.
SearchResult linearSearch(Evaluator& evaluator, int n, bool parallel = false);

/// Slope-sign bisection with the Bayesian posterior stopping rule. The
/// evaluator should memoize (see MemoizingEvaluator) so repeated sizes near
/// convergence cost one underlying evaluation.
SearchResult binarySearch(Evaluator& evaluator, const SearchSpace& space, const BinarySearchConfig& config);

struct BenchmarkStats {
    std::size_t runs = 0;
    double meanComparisons = 0.0;
    double sdComparisons = 0.0;
    double meanEvaluations = 0.0;
    double sdEvaluations = 0.0;
    double meanError = 0.0;
    double sdError = 0.0;
};

/// Mean / population-sd of comparison counts, evaluation counts and
/// |bestSize - truth| across aligned runs.
BenchmarkStats summarizeBenchmark(const std::vector<SearchResult>& results, const std::vector<int>& truths);

}  // namespace hws
