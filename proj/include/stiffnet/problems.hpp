// Catalog of stiff test problems. Each right-hand side is written once as a
// generic functor and instantiated for both the autodiff graph scalar and
// plain doubles, so the trainer and the reference integrator can never drift
// apart on the dynamics.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stiffnet/tape.hpp"

namespace stiffnet {

struct OdeProblem {
    std::string name;
    int n = 1;
    double T = 1.0;
    std::vector<double> y0;

    std::function<void(Tape&, double, std::span<const NodeRef>, std::span<NodeRef>)> rhs_graph;
    std::function<void(double, std::span<const double>, std::span<double>)> rhs_plain;

    // Closed-form solution, when one exists; fills a span of length n.
    std::function<void(double, std::span<double>)> exact;

    double lambda_min_est = 1.0;
    double lambda_max_est = 1.0;

    bool has_exact() const { return static_cast<bool>(exact); }
    double stiffness_ratio() const { return lambda_max_est / lambda_min_est; }
};

struct GraphCtx {
    Tape* tape;
    NodeRef lit(double v) const { return tape->constant(v); }
};
struct PlainCtx {
    static double lit(double v) { return v; }
};

// Binds one templated right-hand-side functor to both evaluation modes.
template <class F>
void set_rhs(OdeProblem& p, F f) {
    p.rhs_graph = [f](Tape& tape, double t, std::span<const NodeRef> y, std::span<NodeRef> dy) {
        GraphCtx ctx{&tape};
        f(ctx, t, y, dy);
    };
    p.rhs_plain = [f](double t, std::span<const double> y, std::span<double> dy) {
        PlainCtx ctx;
        f(ctx, t, y, dy);
    };
}

struct ProblemOptions {
    std::optional<double> lambda;  // rate override where the problem takes one
};

OdeProblem problem_by_name(const std::string& name, const ProblemOptions& opts = {});
std::vector<std::string> problem_names();

// Building blocks, exposed for tests and the check suites.
OdeProblem make_linear1(double lambda);
OdeProblem make_linear2();
OdeProblem make_prothero(double lambda);
OdeProblem make_tworate();
OdeProblem make_flame();

}  // namespace stiffnet
