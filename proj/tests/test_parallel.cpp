// The OpenMP kernel and the serial single-tape reference compute the same
// loss and gradient; results must not depend on the thread count.
#include <doctest.h>

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stiffnet/gradient.hpp"
#include "stiffnet/loss.hpp"
#include "stiffnet/problems.hpp"

using namespace stiffnet;

namespace {

StiffModel make_test_model(std::uint64_t seed) {
    ModelSpec spec;
    spec.n = 1;
    spec.horizon = 1.0;
    spec.K = 3;
    spec.lambda_max = 30.0;
    spec.L = 1;
    spec.hidden = {8, 8};
    spec.seed = seed;
    return build_model(spec);
}

}  // namespace

TEST_CASE("kernel agrees with the serial reference") {
    OdeProblem p = make_linear1(20.0);
    StiffModel m = make_test_model(3);
    CollocationGrid grid = build_collocation(p.T, 100, CollocationMode::UniformLog);

    LossKernel kernel(m, p, grid, 10.0);
    std::vector<double> gk(m.param_count());
    LossParts parts = kernel.value_and_gradient(gk);

    Tape tape;
    NodeRef root = residual_loss(tape, m, p, grid, 10.0);
    std::vector<double> gs = gradient(tape, root, m.params);

    CHECK(parts.total == doctest::Approx(root.value()).epsilon(1e-12));
    double grad_norm = 0.0;
    for (double g : gs) grad_norm = std::max(grad_norm, std::abs(g));
    for (std::size_t i = 0; i < gs.size(); ++i)
        CHECK(std::abs(gk[i] - gs[i]) <= 1e-10 * std::max(grad_norm, 1.0));
}

TEST_CASE("value_only matches value_and_gradient") {
    OdeProblem p = make_linear1(5.0);
    StiffModel m = make_test_model(4);
    CollocationGrid grid = build_collocation(p.T, 32, CollocationMode::Uniform);
    LossKernel kernel(m, p, grid, 10.0);

    std::vector<double> g(m.param_count());
    LossParts a = kernel.value_and_gradient(g);
    LossParts b = kernel.value_only();
    CHECK(a.total == b.total);
    CHECK(a.residual_mean == b.residual_mean);
    CHECK(a.ic == b.ic);
}

TEST_CASE("results are bitwise independent of the thread count") {
#ifdef _OPENMP
    OdeProblem p = make_linear1(20.0);
    StiffModel m = make_test_model(5);
    CollocationGrid grid = build_collocation(p.T, 64, CollocationMode::Uniform);

    const int saved = omp_get_max_threads();
    std::vector<std::vector<double>> grads;
    std::vector<double> losses;
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        LossKernel kernel(m, p, grid, 10.0);
        std::vector<double> g(m.param_count());
        LossParts parts = kernel.value_and_gradient(g);
        losses.push_back(parts.total);
        grads.push_back(std::move(g));
    }
    omp_set_num_threads(saved);

    CHECK(losses[0] == losses[1]);
    CHECK(losses[0] == losses[2]);
    for (std::size_t i = 0; i < grads[0].size(); ++i) {
        CHECK(grads[0][i] == grads[1][i]);
        CHECK(grads[0][i] == grads[2][i]);
    }
#else
    MESSAGE("OpenMP disabled; single-threaded by construction");
#endif
}

TEST_CASE("repeated evaluation is bitwise stable") {
    OdeProblem p = make_linear1(7.0);
    StiffModel m = make_test_model(6);
    CollocationGrid grid = build_collocation(p.T, 48, CollocationMode::UniformLog);
    LossKernel kernel(m, p, grid, 10.0);

    std::vector<double> g1(m.param_count()), g2(m.param_count());
    LossParts a = kernel.value_and_gradient(g1);
    LossParts b = kernel.value_and_gradient(g2);
    CHECK(a.total == b.total);
    for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1[i] == g2[i]);
}
