#include "stiffnet/problems.hpp"

#include <cmath>

#include "stiffnet/errors.hpp"

namespace stiffnet {

namespace {

// Fixed mixing rotation for the coupled linear systems.
constexpr double kTheta = 0.5235987755982988;  // pi / 6

struct Linear1Rhs {
    double lambda;
    template <class C, class S>
    void operator()(C&, double, std::span<const S> y, std::span<S> dy) const {
        dy[0] = -lambda * y[0];
    }
};

struct LinearSystemRhs {
    double a11, a12, a21, a22;
    template <class C, class S>
    void operator()(C&, double, std::span<const S> y, std::span<S> dy) const {
        dy[0] = a11 * y[0] + a12 * y[1];
        dy[1] = a21 * y[0] + a22 * y[1];
    }
};

struct ProtheroRhs {
    double lambda;
    template <class C, class S>
    void operator()(C&, double t, std::span<const S> y, std::span<S> dy) const {
        dy[0] = -lambda * (y[0] - std::cos(t)) - std::sin(t);
    }
};

struct FlameRhs {
    template <class C, class S>
    void operator()(C&, double, std::span<const S> y, std::span<S> dy) const {
        S sq = y[0] * y[0];
        dy[0] = sq - sq * y[0];
    }
};

// A = R diag(mu1, mu2) R^T for the rotation by kTheta.
LinearSystemRhs rotated_system(double mu1, double mu2) {
    const double c = std::cos(kTheta), s = std::sin(kTheta);
    return {mu1 * c * c + mu2 * s * s, (mu1 - mu2) * c * s,
            (mu1 - mu2) * c * s, mu1 * s * s + mu2 * c * c};
}

}  // namespace

OdeProblem make_linear1(double lambda) {
    OdeProblem p;
    p.name = "linear1";
    p.n = 1;
    p.T = 1.0;
    p.y0 = {1.0};
    p.lambda_min_est = lambda;
    p.lambda_max_est = lambda;
    set_rhs(p, Linear1Rhs{lambda});
    p.exact = [lambda](double t, std::span<double> y) { y[0] = std::exp(-lambda * t); };
    return p;
}

OdeProblem make_linear2() {
    OdeProblem p;
    p.name = "linear2";
    p.n = 2;
    p.T = 2.0;
    p.y0 = {1.0, 1.0};
    p.lambda_min_est = 1.0;
    p.lambda_max_est = 100.0;
    set_rhs(p, rotated_system(-1.0, -100.0));
    const double c = std::cos(kTheta), s = std::sin(kTheta);
    // Modal coordinates of y0; each mode decays at its own rate.
    const double z1 = c * p.y0[0] + s * p.y0[1];
    const double z2 = -s * p.y0[0] + c * p.y0[1];
    p.exact = [c, s, z1, z2](double t, std::span<double> y) {
        const double m1 = z1 * std::exp(-t);
        const double m2 = z2 * std::exp(-100.0 * t);
        y[0] = c * m1 - s * m2;
        y[1] = s * m1 + c * m2;
    };
    return p;
}

OdeProblem make_prothero(double lambda) {
    OdeProblem p;
    p.name = "prothero";
    p.n = 1;
    p.T = 5.0;
    p.y0 = {1.0};
    p.lambda_min_est = 1.0;
    p.lambda_max_est = lambda;
    set_rhs(p, ProtheroRhs{lambda});
    p.exact = [](double t, std::span<double> y) { y[0] = std::cos(t); };
    return p;
}

OdeProblem make_tworate() {
    OdeProblem p;
    p.name = "tworate";
    p.n = 2;
    p.T = 2.0;
    const double c = std::cos(kTheta), s = std::sin(kTheta);
    // Start with both modes at unit amplitude so each component carries the
    // slow and the fast rate.
    p.y0 = {c - s, s + c};
    p.lambda_min_est = 1.0;
    p.lambda_max_est = 50.0;
    set_rhs(p, rotated_system(-1.0, -50.0));
    p.exact = [c, s](double t, std::span<double> y) {
        const double m1 = std::exp(-t);
        const double m2 = std::exp(-50.0 * t);
        y[0] = c * m1 - s * m2;
        y[1] = s * m1 + c * m2;
    };
    return p;
}

OdeProblem make_flame() {
    OdeProblem p;
    p.name = "flame";
    p.n = 1;
    p.T = 200.0;  // 2 / y0
    p.y0 = {0.01};
    p.lambda_min_est = 0.02;
    p.lambda_max_est = 1.0;
    set_rhs(p, FlameRhs{});
    return p;  // no closed form; oracle-only
}

OdeProblem problem_by_name(const std::string& name, const ProblemOptions& opts) {
    if (name == "linear1") return make_linear1(opts.lambda.value_or(100.0));
    if (name == "prothero") return make_prothero(opts.lambda.value_or(1e4));
    if (opts.lambda.has_value())
        throw ConfigError("problem '" + name + "' does not take a lambda override");
    if (name == "linear2") return make_linear2();
    if (name == "tworate") return make_tworate();
    if (name == "flame") return make_flame();
    throw unknown_problem(name);
}

std::vector<std::string> problem_names() {
    return {"linear1", "linear2", "prothero", "tworate", "flame"};
}

}  // namespace stiffnet
