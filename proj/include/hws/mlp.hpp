#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hws/evaluator.hpp"
#include "hws/kernels.hpp"
#include "hws/tabular.hpp"

namespace hws {

/// Architecture and training hyperparameters for one model.
struct MlpConfig {
    std::size_t inputDim = 0;
    std::size_t hiddenUnits = 1;
    double dropoutRate = 0.0;  // hidden layer only, inverted dropout
    std::size_t epochs = 15;
    double learningRate = 0.05;
    std::size_t batchSize = 32;
    std::uint64_t weightSeed = 1;
    std::uint64_t shuffleSeed = 2;

    MlpConfig withHiddenUnits(std::size_t n) const {
        MlpConfig c = *this;
        c.hiddenUnits = n;
        return c;
    }

    /// Throws PreconditionError on any invariant violation.
    void validate() const;
};

/// Dense parameters of the M -> N -> 1 network. w1 is stored hidden-major
/// (N x M) so each unit's weights are contiguous; logically it is the M x N
/// input-to-hidden matrix.
struct MlpParams {
    std::size_t inputDim = 0;
    std::size_t hiddenUnits = 0;
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;

    double& w1At(std::size_t input, std::size_t unit) { return w1[unit * inputDim + input]; }
    double w1At(std::size_t input, std::size_t unit) const { return w1[unit * inputDim + input]; }
    std::size_t parameterCount() const { return w1.size() + b1.size() + w2.size() + 1; }
};

struct TrainedModelReport {
    MlpConfig config;
    double trainAccuracy = 0.0;
    double testAccuracy = 0.0;
    double finalLoss = 0.0;
    double wallTimeSeconds = 0.0;  // informational; not covered by determinism
};

/// Fan-in scaled uniform init, fully determined by config.weightSeed.
MlpParams initParams(const MlpConfig& config);

/// Single-sample forward pass. Returns (probability, hidden activations).
/// When a mask is given it must have hiddenUnits entries; surviving units are
/// rescaled by 1/(1 - dropoutRate).
std::pair<double, std::vector<double>> forward(const MlpParams& params, const std::vector<double>& x,
                                               const std::vector<std::uint8_t>* dropoutMask = nullptr,
                                               double dropoutRate = 0.0);

/// Mini-batch SGD on binary cross-entropy for exactly config.epochs epochs.
/// Deterministic in (ds, config); throws NumericError on divergence.
std::pair<MlpParams, TrainedModelReport> train(const SplitDataset& ds, const MlpConfig& config,
                                               Exec exec = Exec::Parallel);

/// Trains a clone of baseConfig with the given width, returns test accuracy.
double pipeline(const SplitDataset& ds, std::size_t hiddenUnits, const MlpConfig& baseConfig,
                Exec exec = Exec::Parallel);

/// Mean BCE of the model over one partition (no dropout).
double meanLoss(const MlpParams& params, const TabularDataset& data, Exec exec = Exec::Parallel);

/// Fraction of samples classified correctly at threshold 0.5.
double accuracy(const MlpParams& params, const TabularDataset& data, Exec exec = Exec::Parallel);

/// Loss and full analytic gradient on an explicit batch, with an optional
/// fixed dropout mask. Exposed for the finite-difference harness.
struct LossGradients {
    double loss = 0.0;
    MlpParams grads;  // same shapes as the parameters
};
LossGradients lossAndGradients(const MlpParams& params, const std::vector<double>& x,
                               const std::vector<int>& y, std::size_t batch,
                               const std::vector<std::uint8_t>* dropoutMask, double dropoutRate,
                               Exec exec = Exec::Parallel);

/// Compares analytic gradients against central finite differences (step 1e-5)
/// at probeCount random coordinates; returns the worst relative error, with
/// an absolute-error fallback when both sides are below 1e-8.
double gradientCheck(const MlpConfig& config, std::size_t probeCount);

/// The end-to-end pipeline as an Evaluator: size in, test accuracy out.
/// Holds a reference to the dataset; the caller keeps it alive. Stateless
/// between calls, so concurrent evaluation is safe.
class MlpPipelineEvaluator : public Evaluator {
public:
    MlpPipelineEvaluator(const SplitDataset& ds, MlpConfig base, Exec exec = Exec::Parallel)
        : ds_(ds), base_(base), exec_(exec) {}

protected:
    double evaluateUnits(int hiddenUnits) override {
        return pipeline(ds_, static_cast<std::size_t>(hiddenUnits), base_, exec_);
    }

private:
    const SplitDataset& ds_;
    MlpConfig base_;
    Exec exec_;
};

}  // namespace hws
