#include "hws/search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hws {

void SearchSpace::validate() const {
    if (!(1 <= lower && lower <= upper && upper <= n)) {
        throw PreconditionError("search space requires 1 <= lower <= upper <= n");
    }
}

void BinarySearchConfig::validate(int n) const {
    if (delta < 2 || delta % 2 != 0) throw PreconditionError("delta must be an even count >= 2");
    if (delta >= n) throw PreconditionError("delta must be smaller than n");
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
    if (!(sigmaFloor > 0.0)) throw PreconditionError("sigmaFloor must be positive");
}

double normalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

LineFit fitLine(std::span<const double> xs, std::span<const double> ys, double sigmaFloor) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw PreconditionError("fitLine needs at least two aligned points");
    }
    const double n = static_cast<double>(xs.size());
    double meanX = 0.0;
    double meanY = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        meanX += xs[i];
        meanY += ys[i];
    }
    meanX /= n;
    meanY /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - meanX) * (xs[i] - meanX);
        sxy += (xs[i] - meanX) * (ys[i] - meanY);
    }
    if (sxx == 0.0) throw Error("singular fit: all x values identical");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = meanY - fit.slope * meanX;

    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.sigma = std::sqrt(ss / n);
    if (fit.sigma < 1e-12) fit.sigma = sigmaFloor;
    return fit;
}

namespace {

struct SlopeConsistency {
    double cdf = 0.0;        // CDF of the observed slope under the predicted trend
    double zScore = 0.0;     // (observed - predicted) / sigma; 0 when only one slope exists
    bool hasTrend = false;   // at least two slopes on this flank
};

SlopeConsistency slopeConsistency(std::span<const double> slopes, std::span<const int> mids,
                                  double sigmaFloor) {
    if (slopes.empty() || slopes.size() != mids.size()) {
        throw PreconditionError("likelihood needs aligned non-empty slope/midpoint histories");
    }
    SlopeConsistency out;
    if (slopes.size() == 1) {
        out.cdf = 0.5;
        return out;
    }
    out.hasTrend = true;
    double predicted = 0.0;
    double sigma = sigmaFloor;
    if (slopes.size() == 2) {
        predicted = slopes[0];
    } else {
        std::vector<double> xs(mids.begin(), mids.end() - 1);
        std::vector<double> ys(slopes.begin(), slopes.end() - 1);
        const LineFit fit = fitLine(xs, ys, sigmaFloor);
        predicted = fit.intercept + fit.slope * static_cast<double>(mids.back());
        sigma = fit.sigma;
    }
    out.zScore = (slopes.back() - predicted) / sigma;
    out.cdf = normalCdf(out.zScore);
    return out;
}

}  // namespace

double likelihood(std::span<const double> slopes, std::span<const int> mids, Side side, double sigmaFloor) {
    const SlopeConsistency c = slopeConsistency(slopes, mids, sigmaFloor);
    return side == Side::Lower ? 1.0 - c.cdf : c.cdf;
}

double prior(int delta, int gammaL, int gammaU) {
    if (gammaU <= gammaL) throw PreconditionError("prior requires gammaU > gammaL");
    return std::min(1.0, static_cast<double>(delta) / static_cast<double>(gammaU - gammaL));
}

double posteriorProbability(std::span<const double> slopes, std::span<const int> mids, Side side,
                            int delta, int gammaL, int gammaU, double sigmaFloor) {
    return likelihood(slopes, mids, side, sigmaFloor) * prior(delta, gammaL, gammaU);
}

double secantSlope(Evaluator& evaluator, int size, int delta, int n, SearchTrace* trace) {
    const int lo = std::max(1, size - delta / 2);
    const int hi = std::min(n, size + delta / 2);
    if (lo >= hi) throw PreconditionError("secant endpoints collapsed; need n >= 2");
    const double accLo = evaluator.evaluate(lo);
    if (trace != nullptr) trace->push(EvaluatedEvent{lo, accLo});
    const double accHi = evaluator.evaluate(hi);
    if (trace != nullptr) trace->push(EvaluatedEvent{hi, accHi});
    const double slope = (accHi - accLo) / static_cast<double>(hi - lo);
    if (trace != nullptr) trace->push(SlopeEvent{size, delta, lo, hi, slope});
    return slope;
}

SearchResult linearSearch(Evaluator& evaluator, int n, bool parallel) {
    if (n < 1) throw PreconditionError("linearSearch requires n >= 1");
    const std::uint64_t callsBefore = evaluator.callCount();
    SearchResult result;

    std::vector<double> accuracies(static_cast<std::size_t>(n), 0.0);
    bool failed = false;
    std::string failure;
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int size = 1; size <= n; ++size) {
            try {
                accuracies[static_cast<std::size_t>(size - 1)] = evaluator.evaluate(size);
            } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
                {
                    failed = true;
                    failure = "evaluator failed at size " + std::to_string(size) + ": " + e.what();
                }
            }
        }
        if (failed) throw SearchError(failure, std::move(result.trace));
        for (int size = 1; size <= n; ++size) {
            result.trace.push(EvaluatedEvent{size, accuracies[static_cast<std::size_t>(size - 1)]});
        }
    } else {
        for (int size = 1; size <= n; ++size) {
            try {
                accuracies[static_cast<std::size_t>(size - 1)] = evaluator.evaluate(size);
            } catch (const std::exception& e) {
                throw SearchError("evaluator failed at size " + std::to_string(size) + ": " + e.what(),
                                  std::move(result.trace));
            }
            result.trace.push(EvaluatedEvent{size, accuracies[static_cast<std::size_t>(size - 1)]});
        }
    }

    int bestSize = 1;
    double bestAccuracy = accuracies[0];
    for (int size = 2; size <= n; ++size) {
        const double acc = accuracies[static_cast<std::size_t>(size - 1)];
        if (acc > bestAccuracy) {  // strict: first index wins ties
            bestAccuracy = acc;
            bestSize = size;
        }
    }
    result.bestSize = bestSize;
    result.bestAccuracy = bestAccuracy;
    result.comparisonsUsed = static_cast<std::uint64_t>(n);
    result.evaluationsUsed = evaluator.callCount() - callsBefore;
    result.trace.push(AcceptedEvent{bestSize, std::nullopt, "linear_argmax"});
    return result;
}

SearchResult binarySearch(Evaluator& evaluator, const SearchSpace& space, const BinarySearchConfig& config) {
    space.validate();
    config.validate(space.n);

    const std::uint64_t callsBefore = evaluator.callCount();
    SearchResult result;
    SearchState state;
    state.gammaL = space.lower;
    state.gammaU = space.upper;

    struct PosteriorRecord {
        int mid = 0;
        double posterior = 0.0;
    };
    std::vector<PosteriorRecord> records;
    std::optional<AcceptedEvent> accepted;
    int stalledMoves = 0;

    auto bestRecorded = [&]() -> PosteriorRecord {
        // Later midpoints win ties; they sit in tighter brackets.
        PosteriorRecord best{(state.gammaL + state.gammaU) / 2, 0.0};
        bool have = false;
        for (const auto& rec : records) {
            if (!have || rec.posterior >= best.posterior) {
                best = rec;
                have = true;
            }
        }
        return best;
    };

    try {
        while (state.gammaL <= state.gammaU) {
            const int width = state.gammaU - state.gammaL;
            if (config.stopMode == StopMode::RunToCompletion && width <= config.delta) {
                const PosteriorRecord best = bestRecorded();
                accepted = AcceptedEvent{best.mid,
                                         records.empty() ? std::nullopt : std::optional<double>(best.posterior),
                                         records.empty() ? "degenerate_bracket" : "run_to_completion"};
                break;
            }
            if (width == 0) {
                const PosteriorRecord best = bestRecorded();
                accepted = AcceptedEvent{best.mid,
                                         records.empty() ? std::nullopt : std::optional<double>(best.posterior),
                                         "degenerate_bracket"};
                break;
            }

            const int mid = (state.gammaL + state.gammaU) / 2;
            const double slope = secantSlope(evaluator, mid, config.delta, space.n, &result.trace);
            ++result.comparisonsUsed;

            const Side side = slope > 0.0 ? Side::Lower : Side::Upper;
            auto& slopes = side == Side::Lower ? state.slopesLower : state.slopesUpper;
            auto& mids = side == Side::Lower ? state.midsLower : state.midsUpper;
            slopes.push_back(slope);
            mids.push_back(mid);

            const SlopeConsistency consistency = slopeConsistency(slopes, mids, config.sigmaFloor);
            const double lik = side == Side::Lower ? 1.0 - consistency.cdf : consistency.cdf;
            const double pri = config.priorMode == PriorMode::CurrentBracket
                                   ? prior(config.delta, state.gammaL, state.gammaU)
                                   : std::min(1.0, static_cast<double>(config.delta) /
                                                       static_cast<double>(space.n - 1));
            const double post = lik * pri;
            result.trace.push(PosteriorEvent{side, lik, pri, post});
            records.push_back({mid, post});

            if (config.stopMode == StopMode::EarlyStop && post > config.alpha) {
                accepted = AcceptedEvent{mid, post, "posterior_threshold"};
                break;
            }
            if (config.stopMode == StopMode::TwoSigma && consistency.hasTrend &&
                std::fabs(consistency.zScore) >= 2.0) {
                accepted = AcceptedEvent{mid, post, "two_sigma"};
                break;
            }

            const int oldBound = side == Side::Lower ? state.gammaL : state.gammaU;
            if (mid == oldBound) {
                // The bracket cannot shrink through this midpoint.
                if (++stalledMoves >= 2) {
                    const PosteriorRecord best = bestRecorded();
                    accepted = AcceptedEvent{best.mid, best.posterior, "forced_termination"};
                    break;
                }
            } else {
                if (side == Side::Lower) {
                    state.gammaL = mid;
                } else {
                    state.gammaU = mid;
                }
                result.trace.push(BoundMovedEvent{side, oldBound, mid});
            }
        }
    } catch (const SearchError&) {
        throw;
    } catch (const std::exception& e) {
        throw SearchError(std::string("evaluator failed during binary search: ") + e.what(),
                          std::move(result.trace));
    }

    if (!accepted.has_value()) {
        // Unreachable with a valid space, kept as a hard stop for safety.
        const PosteriorRecord best = bestRecorded();
        accepted = AcceptedEvent{best.mid, best.posterior, "forced_termination"};
    }
    result.trace.push(*accepted);
    result.bestSize = accepted->size;

    try {
        result.bestAccuracy = evaluator.evaluate(result.bestSize);
    } catch (const std::exception& e) {
        throw SearchError("evaluator failed at accepted size " + std::to_string(result.bestSize) + ": " +
                          e.what(), std::move(result.trace));
    }
    result.trace.push(EvaluatedEvent{result.bestSize, result.bestAccuracy});
    result.evaluationsUsed = evaluator.callCount() - callsBefore;
    return result;
}

BenchmarkStats summarizeBenchmark(const std::vector<SearchResult>& results, const std::vector<int>& truths) {
    if (results.empty() || results.size() != truths.size()) {
        throw PreconditionError("summarizeBenchmark needs aligned non-empty results and truths");
    }
    const double n = static_cast<double>(results.size());
    auto meanSd = [n](auto&& valueOf) {
        double mean = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) mean += valueOf(i);
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            const double d = valueOf(i) - mean;
            var += d * d;
        }
        return std::pair<double, double>(mean, std::sqrt(var / n));
    };

    BenchmarkStats stats;
    stats.runs = results.size();
    std::tie(stats.meanComparisons, stats.sdComparisons) =
        meanSd([&](std::size_t i) { return static_cast<double>(results[i].comparisonsUsed); });
    std::tie(stats.meanEvaluations, stats.sdEvaluations) =
        meanSd([&](std::size_t i) { return static_cast<double>(results[i].evaluationsUsed); });
    std::tie(stats.meanError, stats.sdError) = meanSd(
        [&](std::size_t i) { return std::fabs(static_cast<double>(results[i].bestSize - truths[i])); });
    return stats;
}

}  // namespace hws
