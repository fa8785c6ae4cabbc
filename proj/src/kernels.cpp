#include "hws/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace hws::kernels {

namespace {

// Per-element bodies shared by the serial and the OpenMP outer loops. Keeping
// the accumulation order identical in both paths keeps results bit-identical
// for any thread count.

inline double dotRows(const double* a, const double* b, std::size_t len) {
    double acc = 0.0;
    for (std::size_t k = 0; k < len; ++k) acc += a[k] * b[k];
    return acc;
}

inline double hiddenGradElement(const double* x, const double* dz1, std::size_t B, std::size_t M,
                                std::size_t N, std::size_t j, std::size_t i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < B; ++s) acc += x[s * M + i] * dz1[s * N + j];
    return acc;
}

inline double columnDot(const double* mat, const double* vec, std::size_t rows, std::size_t stride,
                        std::size_t col) {
    double acc = 0.0;
    for (std::size_t s = 0; s < rows; ++s) acc += mat[s * stride + col] * vec[s];
    return acc;
}

}  // namespace

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double bceFromLogit(double z, int y) {
    // -[y log p + (1-y) log(1-p)] rewritten to avoid overflow for large |z|.
    return std::fmax(z, 0.0) - z * static_cast<double>(y) + std::log1p(std::exp(-std::fabs(z)));
}

void hiddenForward(const double* x, std::size_t B, std::size_t M, std::size_t N, const double* w1,
                   const double* b1, double* z1, Exec exec) {
    const std::int64_t total = static_cast<std::int64_t>(B * N);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t e = 0; e < total; ++e) {
            const std::size_t s = static_cast<std::size_t>(e) / N;
            const std::size_t j = static_cast<std::size_t>(e) % N;
            z1[e] = b1[j] + dotRows(x + s * M, w1 + j * M, M);
        }
    } else {
        for (std::int64_t e = 0; e < total; ++e) {
            const std::size_t s = static_cast<std::size_t>(e) / N;
            const std::size_t j = static_cast<std::size_t>(e) % N;
            z1[e] = b1[j] + dotRows(x + s * M, w1 + j * M, M);
        }
    }
}

void activateHidden(const double* z1, const double* maskScale, std::size_t B, std::size_t N, double* h,
                    Exec exec) {
    const std::int64_t total = static_cast<std::int64_t>(B * N);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t e = 0; e < total; ++e) {
            const double a = z1[e] > 0.0 ? z1[e] : 0.0;
            h[e] = maskScale != nullptr ? a * maskScale[static_cast<std::size_t>(e) % N] : a;
        }
    } else {
        for (std::int64_t e = 0; e < total; ++e) {
            const double a = z1[e] > 0.0 ? z1[e] : 0.0;
            h[e] = maskScale != nullptr ? a * maskScale[static_cast<std::size_t>(e) % N] : a;
        }
    }
}

void outputForward(const double* h, std::size_t B, std::size_t N, const double* w2, double b2, double* z2,
                   Exec exec) {
    const std::int64_t rows = static_cast<std::int64_t>(B);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t s = 0; s < rows; ++s) z2[s] = b2 + dotRows(h + static_cast<std::size_t>(s) * N, w2, N);
    } else {
        for (std::int64_t s = 0; s < rows; ++s) z2[s] = b2 + dotRows(h + static_cast<std::size_t>(s) * N, w2, N);
    }
}

double lossAndDelta(const double* z2, const int* y, std::size_t B, double* dz2, Exec exec) {
    const std::int64_t rows = static_cast<std::int64_t>(B);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t s = 0; s < rows; ++s) dz2[s] = sigmoid(z2[s]) - static_cast<double>(y[s]);
    } else {
        for (std::int64_t s = 0; s < rows; ++s) dz2[s] = sigmoid(z2[s]) - static_cast<double>(y[s]);
    }
    // Serial reduction in index order for reproducibility; B is small.
    double loss = 0.0;
    for (std::size_t s = 0; s < B; ++s) loss += bceFromLogit(z2[s], y[s]);
    return loss;
}

void outputGradients(const double* h, const double* dz2, std::size_t B, std::size_t N, double invB,
                     double* gw2, double* gb2, Exec exec) {
    const std::int64_t cols = static_cast<std::int64_t>(N);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < cols; ++j) {
            gw2[j] = invB * columnDot(h, dz2, B, N, static_cast<std::size_t>(j));
        }
    } else {
        for (std::int64_t j = 0; j < cols; ++j) {
            gw2[j] = invB * columnDot(h, dz2, B, N, static_cast<std::size_t>(j));
        }
    }
    double acc = 0.0;
    for (std::size_t s = 0; s < B; ++s) acc += dz2[s];
    *gb2 = invB * acc;
}

void hiddenDelta(const double* dz2, const double* w2, const double* maskScale, const double* z1,
                 std::size_t B, std::size_t N, double* dz1, Exec exec) {
    const std::int64_t total = static_cast<std::int64_t>(B * N);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t e = 0; e < total; ++e) {
            const std::size_t s = static_cast<std::size_t>(e) / N;
            const std::size_t j = static_cast<std::size_t>(e) % N;
            const double scale = maskScale != nullptr ? maskScale[j] : 1.0;
            dz1[e] = z1[e] > 0.0 ? dz2[s] * w2[j] * scale : 0.0;
        }
    } else {
        for (std::int64_t e = 0; e < total; ++e) {
            const std::size_t s = static_cast<std::size_t>(e) / N;
            const std::size_t j = static_cast<std::size_t>(e) % N;
            const double scale = maskScale != nullptr ? maskScale[j] : 1.0;
            dz1[e] = z1[e] > 0.0 ? dz2[s] * w2[j] * scale : 0.0;
        }
    }
}

void hiddenGradients(const double* x, const double* dz1, std::size_t B, std::size_t M, std::size_t N,
                     double invB, double* gw1, double* gb1, Exec exec) {
    const std::int64_t total = static_cast<std::int64_t>(N * M);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t e = 0; e < total; ++e) {
            const std::size_t j = static_cast<std::size_t>(e) / M;
            const std::size_t i = static_cast<std::size_t>(e) % M;
            gw1[e] = invB * hiddenGradElement(x, dz1, B, M, N, j, i);
        }
    } else {
        for (std::int64_t e = 0; e < total; ++e) {
            const std::size_t j = static_cast<std::size_t>(e) / M;
            const std::size_t i = static_cast<std::size_t>(e) % M;
            gw1[e] = invB * hiddenGradElement(x, dz1, B, M, N, j, i);
        }
    }
    // Bias gradient: one serial sum per unit, identical in both paths.
    for (std::size_t j = 0; j < N; ++j) {
        double acc = 0.0;
        for (std::size_t s = 0; s < B; ++s) acc += dz1[s * N + j];
        gb1[j] = invB * acc;
    }
}

void sgdStep(double* params, const double* grads, std::size_t count, double lr, Exec exec) {
    const std::int64_t total = static_cast<std::int64_t>(count);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < total; ++k) params[k] -= lr * grads[k];
    } else {
        for (std::int64_t k = 0; k < total; ++k) params[k] -= lr * grads[k];
    }
}

}  // namespace hws::kernels
