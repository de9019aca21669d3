// Compares the serial single-tape loss+gradient against the OpenMP chunked
// kernel at a few model sizes. The two paths compute the same quantity; the
// kernel is the one the trainer uses.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stiffnet/gradient.hpp"
#include "stiffnet/loss.hpp"
#include "stiffnet/problems.hpp"

using namespace stiffnet;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Case {
    const char* name;
    int K, width, S, reps;
};

void run_case(const Case& c) {
    OdeProblem problem = make_linear1(50.0);

    ModelSpec spec;
    spec.n = 1;
    spec.horizon = problem.T;
    spec.K = c.K;
    spec.lambda_max = 100.0;
    spec.L = 1;
    spec.hidden = {c.width, c.width};
    spec.seed = 7;
    StiffModel model = build_model(spec);

    CollocationGrid grid = build_collocation(problem.T, c.S, CollocationMode::Uniform);
    LossKernel kernel(model, problem, grid, 10.0);
    std::vector<double> grad_kernel(model.param_count());

    // Warm up and correctness cross-check.
    LossParts parts = kernel.value_and_gradient(grad_kernel);
    Tape tape;
    NodeRef root = residual_loss(tape, model, problem, grid, 10.0);
    std::vector<double> grad_serial = gradient(tape, root, model.params);

    double max_rel = 0.0;
    for (std::size_t i = 0; i < grad_serial.size(); ++i) {
        const double denom = std::max(std::abs(grad_serial[i]), 1e-12);
        max_rel = std::max(max_rel, std::abs(grad_serial[i] - grad_kernel[i]) / denom);
    }

    double t0 = now_seconds();
    for (int r = 0; r < c.reps; ++r) {
        tape.clear();
        NodeRef rr = residual_loss(tape, model, problem, grid, 10.0);
        tape.backward(rr);
    }
    const double serial_ms = (now_seconds() - t0) * 1e3 / c.reps;

    t0 = now_seconds();
    for (int r = 0; r < c.reps; ++r) kernel.value_and_gradient(grad_kernel);
    const double kernel_ms = (now_seconds() - t0) * 1e3 / c.reps;

    std::printf("%-10s K=%d width=%-3d S=%-5d params=%-6zu  serial %8.2f ms  kernel %8.2f ms  "
                "speedup %5.2fx  grad agree %.2e  loss %.6e\n",
                c.name, c.K, c.width, c.S, model.param_count(), serial_ms, kernel_ms,
                serial_ms / kernel_ms, max_rel, parts.total);
}

}  // namespace

int main(int argc, char** argv) {
    int scale = 1;
    if (argc > 1) scale = std::stoi(argv[1]);

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP: not enabled\n");
#endif

    std::vector<Case> cases = {
        {"small", 2, 8, 64, 10 * scale},
        {"medium", 4, 16, 256, 3 * scale},
        {"large", 4, 20, 512, 2 * scale},
    };
    for (const Case& c : cases) run_case(c);
    return 0;
}
