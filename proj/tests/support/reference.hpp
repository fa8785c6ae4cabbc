#pragma once

// Straight-line reference implementations used as independent oracles.
// Nothing in here calls into hws_core's compute paths; the point is that the
// same numbers fall out of separately written code.

#include <cmath>
#include <cstddef>
#include <vector>

namespace refimpl {

/// Forward pass of the M -> N -> 1 network, written directly from the
/// definition. Weight layout matches hws::MlpParams (w1 hidden-major).
inline double scalarForward(const std::vector<double>& w1, const std::vector<double>& b1,
                            const std::vector<double>& w2, double b2, const std::vector<double>& x,
                            std::size_t M, std::size_t N,
                            const std::vector<unsigned char>* mask = nullptr, double rate = 0.0) {
    double output = b2;
    for (std::size_t j = 0; j < N; ++j) {
        double pre = b1[j];
        for (std::size_t i = 0; i < M; ++i) pre += w1[j * M + i] * x[i];
        double act = pre > 0.0 ? pre : 0.0;
        if (mask != nullptr) act = (*mask)[j] ? act / (1.0 - rate) : 0.0;
        output += w2[j] * act;
    }
    return 1.0 / (1.0 + std::exp(-output));
}

/// Standard normal CDF by Simpson quadrature of the density from 0 to |z|.
inline double normalCdfQuadrature(double z) {
    const double upper = std::fabs(z);
    const int steps = 20000;  // even
    const double h = upper / steps;
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * 3.14159265358979323846); };
    double sum = pdf(0.0) + pdf(upper);
    for (int k = 1; k < steps; ++k) sum += pdf(h * k) * (k % 2 == 1 ? 4.0 : 2.0);
    const double integral = upper == 0.0 ? 0.0 : sum * h / 3.0;
    return z >= 0.0 ? 0.5 + integral : 0.5 - integral;
}

struct OlsFit {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Normal equations on raw sums, solved by the 2x2 determinant.
inline OlsFit olsNormalEquations(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    OlsFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    return fit;
}

/// Plain full-batch logistic regression; returns training accuracy. Used to
/// certify that a toy dataset is linearly separable.
inline double logisticRegressionAccuracy(const std::vector<double>& x, const std::vector<int>& y,
                                         std::size_t rows, std::size_t cols, int iterations = 4000,
                                         double lr = 0.5) {
    std::vector<double> w(cols, 0.0);
    double b = 0.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> gw(cols, 0.0);
        double gb = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            double z = b;
            for (std::size_t c = 0; c < cols; ++c) z += w[c] * x[r * cols + c];
            const double p = 1.0 / (1.0 + std::exp(-z));
            const double d = p - y[r];
            for (std::size_t c = 0; c < cols; ++c) gw[c] += d * x[r * cols + c];
            gb += d;
        }
        for (std::size_t c = 0; c < cols; ++c) w[c] -= lr * gw[c] / rows;
        b -= lr * gb / rows;
    }
    std::size_t correct = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        double z = b;
        for (std::size_t c = 0; c < cols; ++c) z += w[c] * x[r * cols + c];
        if ((z >= 0.0 ? 1 : 0) == y[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(rows);
}

/// Independent max-fold over an array; first index (1-based) wins ties.
inline std::pair<int, double> maxFold(const std::vector<double>& values) {
    int best = 1;
    double bestValue = values.front();
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > bestValue) {
            bestValue = values[i];
            best = static_cast<int>(i) + 1;
        }
    }
    return {best, bestValue};
}

}  // namespace refimpl
