#include "hws/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hws/errors.hpp"
#include "hws/rng.hpp"

namespace hws {

const char* curveKindName(CurveKind kind) {
    switch (kind) {
        case CurveKind::CuspAbs: return "cusp_abs";
        case CurveKind::Quadratic: return "quadratic";
        case CurveKind::GaussianBump: return "gaussian_bump";
        case CurveKind::TwoPeak: return "two_peak";
        case CurveKind::Monotone: return "monotone";
    }
    return "unknown";
}

void SyntheticCurve::validate() const {
    if (n < 1) throw PreconditionError("curve needs n >= 1");
    if (peakLocation < 1 || peakLocation > n) {
        throw PreconditionError("peak location must lie in [1, n]");
    }
    if (!(scale > 0.0 && scale <= 1.0)) throw PreconditionError("scale must lie in (0, 1]");
    if (noiseSd < 0.0) throw PreconditionError("noise sd must be non-negative");
}

namespace {

constexpr double kFloorValue = 0.05;
constexpr double kPeakValue = 0.95;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Distance of the farthest domain point from the peak; flanks are scaled by
// it so the noiseless range stays inside [kFloorValue, kPeakValue].
double spanOf(int peak, int n) {
    return std::max(1, std::max(peak - 1, n - peak));
}

double tent(double distance, double span, double height) {
    return kPeakValue - height * distance / span;
}

}  // namespace

double SyntheticCurve::value(int size) const {
    if (size < 1 || size > n) throw PreconditionError("size outside [1, n]");
    const double d = static_cast<double>(std::abs(size - peakLocation));
    const double span = spanOf(peakLocation, n);
    const double height = (kPeakValue - kFloorValue) * scale;
    double v = 0.0;
    switch (kind) {
        case CurveKind::CuspAbs:
            v = tent(d, span, height);
            break;
        case CurveKind::Quadratic:
            v = kPeakValue - height * (d / span) * (d / span);
            break;
        case CurveKind::GaussianBump: {
            const double width = std::max(2.0, span * scale / 3.0);
            v = kFloorValue + (kPeakValue - kFloorValue) * std::exp(-0.5 * (d / width) * (d / width));
            break;
        }
        case CurveKind::TwoPeak: {
            // Primary tent at peakLocation plus a broader, lower decoy tent
            // offset by two fifths of the domain (wrapped into range).
            const int decoy = (peakLocation - 1 + (2 * n) / 5) % n + 1;
            const double dDecoy = static_cast<double>(std::abs(size - decoy));
            const double primary = tent(d, span * 0.35, height);
            const double secondary = tent(dDecoy, span, height * 0.55) - 0.03;
            v = std::max(primary, secondary);
            break;
        }
        case CurveKind::Monotone:
            // Strictly increasing; the maximum sits at n and peakLocation is ignored.
            v = kFloorValue + (kPeakValue - kFloorValue) * scale * static_cast<double>(size) /
                    static_cast<double>(n);
            break;
    }
    if (noiseSd > 0.0) {
        v += noiseSd * rng::frozenGaussian(noiseSeed, static_cast<std::uint64_t>(size));
    }
    return clamp01(v);
}

namespace {

class SyntheticEvaluator : public Evaluator {
public:
    explicit SyntheticEvaluator(SyntheticCurve spec) : spec_(spec) { spec_.validate(); }

protected:
    double evaluateUnits(int hiddenUnits) override { return spec_.value(hiddenUnits); }

private:
    SyntheticCurve spec_;
};

}  // namespace

std::unique_ptr<Evaluator> makeCurve(const SyntheticCurve& spec) {
    spec.validate();
    return std::make_unique<SyntheticEvaluator>(spec);
}

SyntheticCurve parseCurveUri(const std::string& uri) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= uri.size()) {
        const std::size_t colon = uri.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(uri.substr(start));
            break;
        }
        parts.push_back(uri.substr(start, colon - start));
        start = colon + 1;
    }
    if (parts.size() < 4 || parts.size() > 6 || parts[0] != "synth") {
        throw ParseError("expected synth:<kind>:<peak>:<n>[:noise_sd[:seed]], got '" + uri + "'");
    }
    SyntheticCurve spec;
    const std::string& kind = parts[1];
    if (kind == "cusp" || kind == "cusp_abs") spec.kind = CurveKind::CuspAbs;
    else if (kind == "quadratic") spec.kind = CurveKind::Quadratic;
    else if (kind == "gauss" || kind == "gaussian_bump") spec.kind = CurveKind::GaussianBump;
    else if (kind == "two_peak" || kind == "two-peak") spec.kind = CurveKind::TwoPeak;
    else if (kind == "monotone") spec.kind = CurveKind::Monotone;
    else throw ParseError("unknown curve kind '" + kind + "'");
    try {
        spec.peakLocation = std::stoi(parts[2]);
        spec.n = std::stoi(parts[3]);
        if (parts.size() >= 5) spec.noiseSd = std::stod(parts[4]);
        if (parts.size() >= 6) spec.noiseSeed = std::stoull(parts[5]);
    } catch (const std::exception&) {
        throw ParseError("malformed numeric field in '" + uri + "'");
    }
    spec.validate();
    return spec;
}

std::pair<int, double> exhaustiveArgmax(Evaluator& evaluator, int n) {
    if (n < 1) throw PreconditionError("exhaustiveArgmax requires n >= 1");
    int bestSize = 1;
    double bestValue = evaluator.evaluate(1);
    for (int size = 2; size <= n; ++size) {
        const double v = evaluator.evaluate(size);
        if (v > bestValue) {
            bestValue = v;
            bestSize = size;
        }
    }
    return {bestSize, bestValue};
}

std::vector<int> localMaxima(const std::vector<double>& values) {
    std::vector<int> maxima;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool leftOk = i == 0 || values[i] > values[i - 1];
        const bool rightOk = i + 1 == n || values[i] > values[i + 1];
        if (leftOk && rightOk) maxima.push_back(static_cast<int>(i) + 1);
    }
    return maxima;
}

bool isStrictlyUnimodal(const std::vector<double>& values) { return localMaxima(values).size() == 1; }

std::vector<double> tabulate(const SyntheticCurve& spec) {
    std::vector<double> values(static_cast<std::size_t>(spec.n));
    for (int size = 1; size <= spec.n; ++size) values[static_cast<std::size_t>(size - 1)] = spec.value(size);
    return values;
}

RandomUnimodal makeRandomUnimodal(std::uint64_t seed, int n) {
    if (n < 3) throw PreconditionError("random unimodal curve needs n >= 3");
    rng::Stream stream(seed);
    RandomUnimodal out;
    out.peak = 2 + static_cast<int>(stream.below(static_cast<std::uint64_t>(n - 2)));  // interior peak

    const int shape = static_cast<int>(stream.below(3));
    const double heightLeft = 0.3 + 0.6 * stream.uniform01();
    const double heightRight = 0.3 + 0.6 * stream.uniform01();
    const double spanLeft = std::max(1, out.peak - 1);
    const double spanRight = std::max(1, n - out.peak);
    const double gaussWidthL = std::max(2.0, spanLeft * (0.15 + 0.5 * stream.uniform01()));
    const double gaussWidthR = std::max(2.0, spanRight * (0.15 + 0.5 * stream.uniform01()));

    out.values.resize(static_cast<std::size_t>(n));
    for (int size = 1; size <= n; ++size) {
        const bool left = size <= out.peak;
        const double d = static_cast<double>(std::abs(size - out.peak));
        const double span = left ? spanLeft : spanRight;
        const double height = left ? heightLeft : heightRight;
        double v = 0.0;
        switch (shape) {
            case 0: v = kPeakValue - height * d / span; break;
            case 1: v = kPeakValue - height * (d / span) * (d / span); break;
            default: {
                const double w = left ? gaussWidthL : gaussWidthR;
                v = kPeakValue - height + height * std::exp(-0.5 * (d / w) * (d / w));
                break;
            }
        }
        out.values[static_cast<std::size_t>(size - 1)] = v;
    }
    return out;
}

Table1Report table1Benchmark(int trials, int n, int delta, double alpha, std::uint64_t seed,
                             StopMode stopMode, PriorMode priorMode, double sigmaFloor) {
    if (trials < 1) throw PreconditionError("benchmark needs trials >= 1");
    Table1Report report;
    report.trials = trials;
    report.n = n;
    report.delta = delta;
    report.alpha = alpha;
    report.stopMode = stopMode;

    BinarySearchConfig config;
    config.delta = delta;
    config.alpha = alpha;
    config.stopMode = stopMode;
    config.priorMode = priorMode;
    config.sigmaFloor = sigmaFloor;

    std::vector<SearchResult> linearResults;
    std::vector<SearchResult> binaryResults;
    std::vector<int> truths;

    rng::Stream peaks(seed);
    for (int trial = 0; trial < trials; ++trial) {
        SyntheticCurve curve;
        curve.kind = CurveKind::CuspAbs;
        curve.n = n;
        curve.peakLocation = 1 + static_cast<int>(peaks.below(static_cast<std::uint64_t>(n)));

        auto truthEval = makeCurve(curve);
        const auto [truth, truthValue] = exhaustiveArgmax(*truthEval, n);
        truths.push_back(truth);

        auto linearEval = makeCurve(curve);
        SearchResult linear = linearSearch(*linearEval, n);

        auto binaryBase = makeCurve(curve);
        MemoizingEvaluator memo(*binaryBase);
        SearchResult binary = binarySearch(memo, SearchSpace::full(n), config);

        report.linearRuns.push_back({trial, truth, linear.bestSize, std::abs(linear.bestSize - truth),
                                     linear.comparisonsUsed, linear.evaluationsUsed});
        report.binaryRuns.push_back({trial, truth, binary.bestSize, std::abs(binary.bestSize - truth),
                                     binary.comparisonsUsed, binary.evaluationsUsed});
        report.binaryTraces.push_back(binary.trace);
        linearResults.push_back(std::move(linear));
        binaryResults.push_back(std::move(binary));
    }

    report.linear = summarizeBenchmark(linearResults, truths);
    report.binary = summarizeBenchmark(binaryResults, truths);
    return report;
}

std::string renderTable(const Table1Report& report) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    auto row = [&out](const std::string& name, const BenchmarkStats& s) {
        out.precision(3);
        out << "| " << name;
        for (std::size_t i = name.size(); i < 8; ++i) out << ' ';
        out << "| " << s.meanComparisons << " | " << s.sdComparisons << " | " << s.meanEvaluations
            << " | " << s.sdEvaluations << " | " << s.meanError << " | " << s.sdError << " |\n";
    };
    out << "Search statistics over " << report.trials << " random cusps (n=" << report.n
        << ", delta=" << report.delta << ")\n";
    out << "| Method  | comparisons mean | sd | evaluations mean | sd | error mean | sd |\n";
    row("Linear", report.linear);
    row("Binary", report.binary);
    return out.str();
}

}  // namespace hws
