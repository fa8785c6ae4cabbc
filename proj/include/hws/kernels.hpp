#pragma once

#include <cstddef>

namespace hws {

/// Which loop implementation drives the dense kernels. Both produce
/// bit-identical output: every output element is accumulated in the same
/// index order, the OpenMP variant only distributes elements over threads.
/// The serial variant is the reference the parallel one is tested and
/// benchmarked against.
enum class Exec { Serial, Parallel };

namespace kernels {

// Shapes: x is batch-major (B x M), w1 is hidden-major (N x M), z1/h/dz1 are
// batch-major (B x N), w2 has length N, z2/dz2 length B.

/// z1[s][j] = b1[j] + dot(x[s], w1[j])
void hiddenForward(const double* x, std::size_t B, std::size_t M, std::size_t N, const double* w1,
                   const double* b1, double* z1, Exec exec);

/// h = relu(z1) scaled per unit by maskScale (nullptr = no dropout).
void activateHidden(const double* z1, const double* maskScale, std::size_t B, std::size_t N, double* h,
                    Exec exec);

/// z2[s] = b2 + dot(h[s], w2)
void outputForward(const double* h, std::size_t B, std::size_t N, const double* w2, double b2, double* z2,
                   Exec exec);

/// dz2[s] = sigmoid(z2[s]) - y[s]; returns the summed stable BCE loss.
double lossAndDelta(const double* z2, const int* y, std::size_t B, double* dz2, Exec exec);

/// gw2[j] = invB * sum_s h[s][j] * dz2[s]; gb2 likewise over dz2.
void outputGradients(const double* h, const double* dz2, std::size_t B, std::size_t N, double invB,
                     double* gw2, double* gb2, Exec exec);

/// dz1[s][j] = dz2[s] * w2[j] * maskScale[j] * (z1[s][j] > 0)
void hiddenDelta(const double* dz2, const double* w2, const double* maskScale, const double* z1,
                 std::size_t B, std::size_t N, double* dz1, Exec exec);

/// gw1[j][i] = invB * sum_s x[s][i] * dz1[s][j]; gb1[j] likewise.
void hiddenGradients(const double* x, const double* dz1, std::size_t B, std::size_t M, std::size_t N,
                     double invB, double* gw1, double* gb1, Exec exec);

/// params[k] -= lr * grads[k]
void sgdStep(double* params, const double* grads, std::size_t count, double lr, Exec exec);

double sigmoid(double z);

/// Numerically stable binary cross-entropy of a logit against a 0/1 label.
double bceFromLogit(double z, int y);

}  // namespace kernels
}  // namespace hws
