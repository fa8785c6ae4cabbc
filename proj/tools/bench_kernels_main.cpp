#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "hws/kernels.hpp"
#include "hws/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

// Times the dense training kernels in their serial reference form against
// the OpenMP form and checks that both produce bit-identical output.

namespace {

using hws::Exec;
namespace kernels = hws::kernels;

struct Problem {
    std::size_t B, M, N;
    std::vector<double> x, w1, b1, w2, y;
    std::vector<int> labels;

    Problem(std::size_t b, std::size_t m, std::size_t n) : B(b), M(m), N(n) {
        hws::rng::Stream rand(12345);
        x.resize(B * M);
        w1.resize(N * M);
        b1.resize(N);
        w2.resize(N);
        labels.resize(B);
        for (auto& v : x) v = rand.uniform(-1.0, 1.0);
        for (auto& v : w1) v = rand.uniform(-0.5, 0.5);
        for (auto& v : b1) v = rand.uniform(-0.1, 0.1);
        for (auto& v : w2) v = rand.uniform(-0.5, 0.5);
        for (auto& v : labels) v = rand.uniform01() < 0.5 ? 0 : 1;
    }
};

struct StepOutput {
    std::vector<double> z1, h, z2, dz2, dz1, gw1, gb1, gw2;
    double gb2 = 0.0;

    explicit StepOutput(const Problem& p)
        : z1(p.B * p.N), h(p.B * p.N), z2(p.B), dz2(p.B), dz1(p.B * p.N), gw1(p.N * p.M), gb1(p.N),
          gw2(p.N) {}
};

void runStep(const Problem& p, StepOutput& out, Exec exec) {
    kernels::hiddenForward(p.x.data(), p.B, p.M, p.N, p.w1.data(), p.b1.data(), out.z1.data(), exec);
    kernels::activateHidden(out.z1.data(), nullptr, p.B, p.N, out.h.data(), exec);
    kernels::outputForward(out.h.data(), p.B, p.N, p.w2.data(), 0.1, out.z2.data(), exec);
    kernels::lossAndDelta(out.z2.data(), p.labels.data(), p.B, out.dz2.data(), exec);
    const double invB = 1.0 / static_cast<double>(p.B);
    kernels::outputGradients(out.h.data(), out.dz2.data(), p.B, p.N, invB, out.gw2.data(), &out.gb2, exec);
    kernels::hiddenDelta(out.dz2.data(), p.w2.data(), nullptr, out.z1.data(), p.B, p.N, out.dz1.data(), exec);
    kernels::hiddenGradients(p.x.data(), out.dz1.data(), p.B, p.M, p.N, invB, out.gw1.data(),
                             out.gb1.data(), exec);
}

double timeStep(const Problem& p, StepOutput& out, Exec exec, int reps) {
    runStep(p, out, exec);  // warm-up
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) runStep(p, out, exec);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
           static_cast<double>(reps);
}

bool bitIdentical(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark the OpenMP training kernels against the serial reference"};
    std::size_t batch = 256;
    std::size_t inputs = 16;
    int reps = 20;
    std::vector<std::size_t> widths{64, 256, 1024};
    app.add_option("--batch", batch, "batch size");
    app.add_option("--inputs", inputs, "input dimension");
    app.add_option("--widths", widths, "hidden widths to benchmark");
    app.add_option("--reps", reps, "timed repetitions per width");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial path\n");
#endif
    std::printf("%8s %8s %14s %14s %9s %10s\n", "width", "batch", "serial (ms)", "parallel (ms)",
                "speedup", "identical");

    bool allIdentical = true;
    for (std::size_t width : widths) {
        Problem p(batch, inputs, width);
        StepOutput serialOut(p);
        StepOutput parallelOut(p);
        const double serialMs = 1e3 * timeStep(p, serialOut, Exec::Serial, reps);
        const double parallelMs = 1e3 * timeStep(p, parallelOut, Exec::Parallel, reps);

        const bool identical = bitIdentical(serialOut.z1, parallelOut.z1) &&
                               bitIdentical(serialOut.h, parallelOut.h) &&
                               bitIdentical(serialOut.z2, parallelOut.z2) &&
                               bitIdentical(serialOut.gw1, parallelOut.gw1) &&
                               bitIdentical(serialOut.gb1, parallelOut.gb1) &&
                               bitIdentical(serialOut.gw2, parallelOut.gw2) &&
                               serialOut.gb2 == parallelOut.gb2;
        allIdentical = allIdentical && identical;
        std::printf("%8zu %8zu %14.3f %14.3f %8.2fx %10s\n", width, batch, serialMs, parallelMs,
                    serialMs / parallelMs, identical ? "yes" : "NO");
    }
    if (!allIdentical) {
        std::fprintf(stderr, "kernel outputs diverged between serial and parallel paths\n");
        return 1;
    }
    return 0;
}
