#include "hws/mlp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hws/errors.hpp"
#include "hws/rng.hpp"

namespace hws {

namespace {

constexpr double kDropoutEps = 1e-12;

std::vector<double> maskScaleOf(const std::vector<std::uint8_t>& mask, double rate) {
    const double scale = 1.0 / (1.0 - rate);
    std::vector<double> out(mask.size());
    for (std::size_t j = 0; j < mask.size(); ++j) out[j] = mask[j] ? scale : 0.0;
    return out;
}

// Shared workspace for batched passes; sized once per training run.
struct Workspace {
    std::vector<double> x;
    std::vector<int> y;
    std::vector<double> z1;
    std::vector<double> h;
    std::vector<double> z2;
    std::vector<double> dz2;
    std::vector<double> dz1;

    void resize(std::size_t B, std::size_t M, std::size_t N) {
        x.resize(B * M);
        y.resize(B);
        z1.resize(B * N);
        h.resize(B * N);
        z2.resize(B);
        dz2.resize(B);
        dz1.resize(B * N);
    }
};

void forwardBatch(const MlpParams& p, const double* x, std::size_t B, const double* maskScale,
                  Workspace& ws, Exec exec) {
    kernels::hiddenForward(x, B, p.inputDim, p.hiddenUnits, p.w1.data(), p.b1.data(), ws.z1.data(), exec);
    kernels::activateHidden(ws.z1.data(), maskScale, B, p.hiddenUnits, ws.h.data(), exec);
    kernels::outputForward(ws.h.data(), B, p.hiddenUnits, p.w2.data(), p.b2, ws.z2.data(), exec);
}

}  // namespace

void MlpConfig::validate() const {
    if (inputDim == 0) throw PreconditionError("inputDim must be >= 1");
    if (hiddenUnits == 0) throw PreconditionError("hiddenUnits must be >= 1");
    if (epochs == 0) throw PreconditionError("epochs must be >= 1");
    if (!(learningRate > 0.0)) throw PreconditionError("learningRate must be positive");
    if (batchSize == 0) throw PreconditionError("batchSize must be >= 1");
    if (!(dropoutRate >= 0.0 && dropoutRate < 1.0)) throw PreconditionError("dropoutRate must be in [0, 1)");
}

MlpParams initParams(const MlpConfig& config) {
    config.validate();
    const std::size_t M = config.inputDim;
    const std::size_t N = config.hiddenUnits;
    MlpParams p;
    p.inputDim = M;
    p.hiddenUnits = N;
    p.w1.resize(N * M);
    p.b1.assign(N, 0.0);
    p.w2.resize(N);
    p.b2 = 0.0;

    rng::Stream stream(config.weightSeed);
    const double r1 = std::sqrt(6.0 / static_cast<double>(M + N));
    for (double& w : p.w1) w = stream.uniform(-r1, r1);
    const double r2 = std::sqrt(6.0 / static_cast<double>(N + 1));
    for (double& w : p.w2) w = stream.uniform(-r2, r2);
    return p;
}

std::pair<double, std::vector<double>> forward(const MlpParams& params, const std::vector<double>& x,
                                               const std::vector<std::uint8_t>* dropoutMask,
                                               double dropoutRate) {
    if (x.size() != params.inputDim) {
        throw PreconditionError("input has " + std::to_string(x.size()) + " features, expected " +
                                std::to_string(params.inputDim));
    }
    if (dropoutMask != nullptr && dropoutMask->size() != params.hiddenUnits) {
        throw PreconditionError("dropout mask has " + std::to_string(dropoutMask->size()) +
                                " entries, expected " + std::to_string(params.hiddenUnits));
    }
    std::vector<double> hidden(params.hiddenUnits);
    const double scale = dropoutRate > kDropoutEps ? 1.0 / (1.0 - dropoutRate) : 1.0;
    for (std::size_t j = 0; j < params.hiddenUnits; ++j) {
        double z = params.b1[j];
        const double* wRow = params.w1.data() + j * params.inputDim;
        for (std::size_t i = 0; i < params.inputDim; ++i) z += x[i] * wRow[i];
        double a = z > 0.0 ? z : 0.0;
        if (dropoutMask != nullptr) a = (*dropoutMask)[j] ? a * scale : 0.0;
        hidden[j] = a;
    }
    double z2 = params.b2;
    for (std::size_t j = 0; j < params.hiddenUnits; ++j) z2 += hidden[j] * params.w2[j];
    return {kernels::sigmoid(z2), std::move(hidden)};
}

LossGradients lossAndGradients(const MlpParams& params, const std::vector<double>& x,
                               const std::vector<int>& y, std::size_t batch,
                               const std::vector<std::uint8_t>* dropoutMask, double dropoutRate,
                               Exec exec) {
    const std::size_t M = params.inputDim;
    const std::size_t N = params.hiddenUnits;
    Workspace ws;
    ws.resize(batch, M, N);

    std::vector<double> maskScale;
    const double* maskPtr = nullptr;
    if (dropoutMask != nullptr) {
        maskScale = maskScaleOf(*dropoutMask, dropoutRate);
        maskPtr = maskScale.data();
    }

    forwardBatch(params, x.data(), batch, maskPtr, ws, exec);
    const double lossSum = kernels::lossAndDelta(ws.z2.data(), y.data(), batch, ws.dz2.data(), exec);

    LossGradients out;
    out.loss = lossSum / static_cast<double>(batch);
    out.grads.inputDim = M;
    out.grads.hiddenUnits = N;
    out.grads.w1.resize(N * M);
    out.grads.b1.resize(N);
    out.grads.w2.resize(N);

    const double invB = 1.0 / static_cast<double>(batch);
    kernels::outputGradients(ws.h.data(), ws.dz2.data(), batch, N, invB, out.grads.w2.data(),
                             &out.grads.b2, exec);
    kernels::hiddenDelta(ws.dz2.data(), params.w2.data(), maskPtr, ws.z1.data(), batch, N, ws.dz1.data(),
                         exec);
    kernels::hiddenGradients(x.data(), ws.dz1.data(), batch, M, N, invB, out.grads.w1.data(),
                             out.grads.b1.data(), exec);
    return out;
}

namespace {

double partitionMetric(const MlpParams& params, const TabularDataset& data, bool wantAccuracy, Exec exec) {
    const std::size_t B = data.nRows();
    if (B == 0) return 0.0;
    Workspace ws;
    ws.resize(B, params.inputDim, params.hiddenUnits);
    forwardBatch(params, data.features.data(), B, nullptr, ws, exec);
    if (wantAccuracy) {
        std::size_t correct = 0;
        for (std::size_t s = 0; s < B; ++s) {
            const int predicted = kernels::sigmoid(ws.z2[s]) >= 0.5 ? 1 : 0;
            if (predicted == data.labels[s]) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(B);
    }
    double loss = 0.0;
    for (std::size_t s = 0; s < B; ++s) loss += kernels::bceFromLogit(ws.z2[s], data.labels[s]);
    return loss / static_cast<double>(B);
}

}  // namespace

double meanLoss(const MlpParams& params, const TabularDataset& data, Exec exec) {
    return partitionMetric(params, data, false, exec);
}

double accuracy(const MlpParams& params, const TabularDataset& data, Exec exec) {
    return partitionMetric(params, data, true, exec);
}

std::pair<MlpParams, TrainedModelReport> train(const SplitDataset& ds, const MlpConfig& config, Exec exec) {
    config.validate();
    const std::size_t nTrain = ds.train.nRows();
    if (nTrain == 0) throw PreconditionError("train partition is empty");
    if (config.inputDim != ds.train.inputDim) {
        throw PreconditionError("config inputDim " + std::to_string(config.inputDim) +
                                " does not match dataset inputDim " + std::to_string(ds.train.inputDim));
    }
    if (config.batchSize > nTrain) {
        throw PreconditionError("batchSize " + std::to_string(config.batchSize) + " exceeds " +
                                std::to_string(nTrain) + " train rows");
    }

    const auto started = std::chrono::steady_clock::now();
    const std::size_t M = config.inputDim;
    const std::size_t N = config.hiddenUnits;
    MlpParams params = initParams(config);

    MlpParams grads = params;  // shape only; contents overwritten each batch
    Workspace ws;
    ws.resize(config.batchSize, M, N);

    rng::Stream shuffleRng(rng::mix(config.shuffleSeed, 0x5u));
    rng::Stream maskRng(rng::mix(config.shuffleSeed, 0xDu));
    std::vector<std::size_t> order(nTrain);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::uint8_t> mask(N);
    std::vector<double> maskScale;
    const bool useDropout = config.dropoutRate > kDropoutEps;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffleRng.shuffle(order);
        std::size_t cursor = 0;
        std::size_t batchIndex = 0;
        while (cursor < nTrain) {
            const std::size_t B = std::min(config.batchSize, nTrain - cursor);
            for (std::size_t s = 0; s < B; ++s) {
                const std::size_t row = order[cursor + s];
                std::copy_n(ds.train.row(row), M, ws.x.begin() + static_cast<std::ptrdiff_t>(s * M));
                ws.y[s] = ds.train.labels[row];
            }
            const double* maskPtr = nullptr;
            if (useDropout) {
                for (std::size_t j = 0; j < N; ++j) mask[j] = maskRng.uniform01() < 1.0 - config.dropoutRate;
                maskScale = maskScaleOf(mask, config.dropoutRate);
                maskPtr = maskScale.data();
            }

            forwardBatch(params, ws.x.data(), B, maskPtr, ws, exec);
            const double batchLoss = kernels::lossAndDelta(ws.z2.data(), ws.y.data(), B, ws.dz2.data(), exec) /
                                     static_cast<double>(B);
            if (!std::isfinite(batchLoss)) {
                throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(batchIndex));
            }

            const double invB = 1.0 / static_cast<double>(B);
            kernels::outputGradients(ws.h.data(), ws.dz2.data(), B, N, invB, grads.w2.data(), &grads.b2, exec);
            kernels::hiddenDelta(ws.dz2.data(), params.w2.data(), maskPtr, ws.z1.data(), B, N, ws.dz1.data(),
                                 exec);
            kernels::hiddenGradients(ws.x.data(), ws.dz1.data(), B, M, N, invB, grads.w1.data(),
                                     grads.b1.data(), exec);

            kernels::sgdStep(params.w1.data(), grads.w1.data(), params.w1.size(), config.learningRate, exec);
            kernels::sgdStep(params.b1.data(), grads.b1.data(), params.b1.size(), config.learningRate, exec);
            kernels::sgdStep(params.w2.data(), grads.w2.data(), params.w2.size(), config.learningRate, exec);
            params.b2 -= config.learningRate * grads.b2;

            cursor += B;
            ++batchIndex;
        }
    }

    for (const auto* block : {&params.w1, &params.b1, &params.w2}) {
        for (double v : *block) {
            if (!std::isfinite(v)) throw NumericError("non-finite parameter after training");
        }
    }

    TrainedModelReport report;
    report.config = config;
    report.finalLoss = meanLoss(params, ds.train, exec);
    report.trainAccuracy = accuracy(params, ds.train, exec);
    report.testAccuracy = accuracy(params, ds.test, exec);
    report.wallTimeSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {std::move(params), report};
}

double pipeline(const SplitDataset& ds, std::size_t hiddenUnits, const MlpConfig& baseConfig, Exec exec) {
    if (hiddenUnits == 0) throw PreconditionError("hiddenUnits must be >= 1");
    return train(ds, baseConfig.withHiddenUnits(hiddenUnits), exec).second.testAccuracy;
}

double gradientCheck(const MlpConfig& config, std::size_t probeCount) {
    if (probeCount == 0) throw PreconditionError("probeCount must be >= 1");
    config.validate();

    // A small fixed probe batch generated from the weight seed.
    const std::size_t B = 8;
    rng::Stream dataRng(rng::mix(config.weightSeed, 0xDA7Au));
    std::vector<double> x(B * config.inputDim);
    std::vector<int> y(B);
    for (double& v : x) v = dataRng.uniform(-1.0, 1.0);
    for (int& label : y) label = dataRng.uniform01() < 0.5 ? 0 : 1;

    MlpParams params = initParams(config);
    std::vector<std::uint8_t> mask;
    const std::vector<std::uint8_t>* maskPtr = nullptr;
    if (config.dropoutRate > kDropoutEps) {
        mask.resize(config.hiddenUnits);
        for (auto& m : mask) m = dataRng.uniform01() < 1.0 - config.dropoutRate;
        maskPtr = &mask;  // held fixed so the loss stays deterministic
    }

    MlpParams analyticGrads = lossAndGradients(params, x, y, B, maskPtr, config.dropoutRate).grads;
    auto flatAt = [&](MlpParams& p, std::size_t k) -> double& {
        if (k < p.w1.size()) return p.w1[k];
        k -= p.w1.size();
        if (k < p.b1.size()) return p.b1[k];
        k -= p.b1.size();
        if (k < p.w2.size()) return p.w2[k];
        return p.b2;
    };

    const double step = 1e-5;
    rng::Stream coordRng(rng::mix(config.weightSeed, 0xC0DEu));
    double worst = 0.0;
    for (std::size_t probe = 0; probe < probeCount; ++probe) {
        const std::size_t k = static_cast<std::size_t>(coordRng.below(params.parameterCount()));
        MlpParams shifted = params;
        flatAt(shifted, k) += step;
        const double lossPlus = lossAndGradients(shifted, x, y, B, maskPtr, config.dropoutRate).loss;
        flatAt(shifted, k) -= 2.0 * step;
        const double lossMinus = lossAndGradients(shifted, x, y, B, maskPtr, config.dropoutRate).loss;
        const double numeric = (lossPlus - lossMinus) / (2.0 * step);
        const double analyticValue = flatAt(analyticGrads, k);

        const double denom = std::max(std::fabs(analyticValue), std::fabs(numeric));
        const double error = denom < 1e-8 ? std::fabs(analyticValue - numeric)
                                          : std::fabs(analyticValue - numeric) / denom;
        worst = std::max(worst, error);
    }
    return worst;
}

}  // namespace hws
