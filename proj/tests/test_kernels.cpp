#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "hws/kernels.hpp"
#include "hws/rng.hpp"

using hws::Exec;
namespace kernels = hws::kernels;

namespace {

bool sameBits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
    hws::rng::Stream rand(99);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t B = 1 + rand.below(40);
        const std::size_t M = 1 + rand.below(12);
        const std::size_t N = 1 + rand.below(50);

        std::vector<double> x(B * M), w1(N * M), b1(N), w2(N), maskScale(N);
        std::vector<int> y(B);
        for (auto& v : x) v = rand.uniform(-2.0, 2.0);
        for (auto& v : w1) v = rand.uniform(-1.0, 1.0);
        for (auto& v : b1) v = rand.uniform(-0.5, 0.5);
        for (auto& v : w2) v = rand.uniform(-1.0, 1.0);
        for (auto& v : y) v = rand.uniform01() < 0.5 ? 0 : 1;
        for (auto& v : maskScale) v = rand.uniform01() < 0.8 ? 1.25 : 0.0;
        const double* mask = trial % 2 == 0 ? maskScale.data() : nullptr;

        auto run = [&](Exec exec) {
            struct Out {
                std::vector<double> z1, h, z2, dz2, dz1, gw1, gb1, gw2;
                double gb2 = 0.0, loss = 0.0;
            } out;
            out.z1.resize(B * N);
            out.h.resize(B * N);
            out.z2.resize(B);
            out.dz2.resize(B);
            out.dz1.resize(B * N);
            out.gw1.resize(N * M);
            out.gb1.resize(N);
            out.gw2.resize(N);
            kernels::hiddenForward(x.data(), B, M, N, w1.data(), b1.data(), out.z1.data(), exec);
            kernels::activateHidden(out.z1.data(), mask, B, N, out.h.data(), exec);
            kernels::outputForward(out.h.data(), B, N, w2.data(), 0.3, out.z2.data(), exec);
            out.loss = kernels::lossAndDelta(out.z2.data(), y.data(), B, out.dz2.data(), exec);
            kernels::outputGradients(out.h.data(), out.dz2.data(), B, N, 1.0 / B, out.gw2.data(),
                                     &out.gb2, exec);
            kernels::hiddenDelta(out.dz2.data(), w2.data(), mask, out.z1.data(), B, N, out.dz1.data(),
                                 exec);
            kernels::hiddenGradients(x.data(), out.dz1.data(), B, M, N, 1.0 / B, out.gw1.data(),
                                     out.gb1.data(), exec);
            return out;
        };

        const auto serial = run(Exec::Serial);
        const auto parallel = run(Exec::Parallel);
        CHECK(sameBits(serial.z1, parallel.z1));
        CHECK(sameBits(serial.h, parallel.h));
        CHECK(sameBits(serial.z2, parallel.z2));
        CHECK(sameBits(serial.dz1, parallel.dz1));
        CHECK(sameBits(serial.gw1, parallel.gw1));
        CHECK(sameBits(serial.gb1, parallel.gb1));
        CHECK(sameBits(serial.gw2, parallel.gw2));
        CHECK(serial.gb2 == parallel.gb2);
        CHECK(serial.loss == parallel.loss);
    }
}

TEST_CASE("sgd step updates in place identically") {
    hws::rng::Stream rand(5);
    std::vector<double> a(257), g(257);
    for (auto& v : a) v = rand.uniform(-1.0, 1.0);
    for (auto& v : g) v = rand.uniform(-1.0, 1.0);
    std::vector<double> b = a;
    kernels::sgdStep(a.data(), g.data(), a.size(), 0.1, Exec::Serial);
    kernels::sgdStep(b.data(), g.data(), b.size(), 0.1, Exec::Parallel);
    CHECK(sameBits(a, b));
}

TEST_CASE("stable bce matches the naive formula where both are well-posed") {
    for (double z : {-3.0, -0.4, 0.0, 0.7, 4.2}) {
        for (int y : {0, 1}) {
            const double p = 1.0 / (1.0 + std::exp(-z));
            const double naive = -(y * std::log(p) + (1 - y) * std::log(1.0 - p));
            CHECK(kernels::bceFromLogit(z, y) == doctest::Approx(naive).epsilon(1e-12));
        }
    }
    // Extreme logits stay finite.
    CHECK(std::isfinite(kernels::bceFromLogit(800.0, 0)));
    CHECK(std::isfinite(kernels::bceFromLogit(-800.0, 1)));
}
