#include "stiffnet/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stiffnet/gradient.hpp"
#include "stiffnet/loss.hpp"
#include "stiffnet/metrics.hpp"
#include "stiffnet/rng.hpp"

namespace stiffnet {

namespace {

std::string format_err(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Mildly coupled 2x2 linear system; rates kept small so the loss surface is
// well conditioned for finite differences.
struct Mild2Rhs {
    template <class C, class S>
    void operator()(C&, double, std::span<const S> y, std::span<S> dy) const {
        dy[0] = -0.8 * y[0] + 0.3 * y[1];
        dy[1] = 0.3 * y[0] - 2.5 * y[1];
    }
};

OdeProblem make_mild2() {
    OdeProblem p;
    p.name = "mild2";
    p.n = 2;
    p.T = 1.5;
    p.y0 = {1.0, -0.5};
    p.lambda_min_est = 0.8;
    p.lambda_max_est = 2.5;
    set_rhs(p, Mild2Rhs{});
    return p;
}

}  // namespace

StiffModel random_small_model(std::uint64_t seed, int n, double horizon, double lambda_max_cap) {
    SplitMix64 r(seed);
    ModelSpec spec;
    spec.form = (r.next() & 1) ? ModelForm::Compact : ModelForm::Expanded;
    spec.n = n;
    spec.horizon = horizon;
    spec.K = 1 + static_cast<int>(r.next() % 4);
    spec.lambda_max = r.uniform(0.5, lambda_max_cap);
    spec.L = 1 + static_cast<int>(r.next() % 2);
    spec.omega_max = spec.L > 1 ? r.uniform(0.5, 6.0) : 0.0;
    const int w = 2 + static_cast<int>(r.next() % 7);
    spec.hidden = {w, w};
    spec.seed = r.next();
    return build_model(spec);
}

SuiteResult check_grad_suite() {
    SuiteResult res;
    res.pass = true;
    double worst = 0.0;
    int worst_cfg = -1;

    for (int cfg = 0; cfg < 20; ++cfg) {
        SplitMix64 r(4200 + static_cast<std::uint64_t>(cfg));

        OdeProblem problem;
        switch (cfg % 3) {
            case 0: problem = make_linear1(r.uniform(0.5, 5.0)); break;
            case 1: problem = make_mild2(); break;
            default: problem = make_flame(); break;
        }

        ModelSpec spec;
        spec.form = (cfg % 2 == 0) ? ModelForm::Compact : ModelForm::Expanded;
        spec.n = problem.n;
        spec.horizon = problem.T;
        spec.K = 1 + static_cast<int>(r.next() % 3);
        spec.lambda_max = r.uniform(1.0, 8.0);
        spec.L = 1 + static_cast<int>(r.next() % 2);
        spec.omega_max = spec.L > 1 ? r.uniform(1.0, 4.0) : 0.0;
        const int w = 3 + static_cast<int>(r.next() % 6);  // nets within [1, 8, 8, out]
        spec.hidden = {w, w};
        spec.per_component = (cfg % 5 == 0);
        spec.seed = 1700 + static_cast<std::uint64_t>(cfg);
        StiffModel model = build_model(spec);

        const int S = 4 + static_cast<int>(r.next() % 13);  // <= 16
        CollocationGrid grid = build_collocation(
            problem.T, S, (cfg % 4 == 3) ? CollocationMode::UniformLog : CollocationMode::Uniform);

        GraphFn f = [&](Tape& tape, const ParamSet&) {
            return residual_loss(tape, model, problem, grid, 10.0);
        };
        const double err = finite_diff_check(f, model.params, 1e-5);
        if (err > worst) {
            worst = err;
            worst_cfg = cfg;
        }
    }

    res.worst = worst;
    res.pass = worst < 1e-5;
    res.detail = "max rel err " + format_err(worst) + " (config " + std::to_string(worst_cfg) +
                 "), threshold 1e-5";
    return res;
}

SuiteResult check_dual_suite() {
    SuiteResult res;
    double worst = 0.0;

    std::vector<double> yp, ym, yd;
    for (int trial = 0; trial < 100; ++trial) {
        SplitMix64 r(8800 + static_cast<std::uint64_t>(trial));
        const int n = 1 + static_cast<int>(r.next() % 2);
        const double T = r.uniform(0.5, 2.0);
        StiffModel model = random_small_model(r.next(), n, T, 100.0);

        const double h = 1e-5 * T;
        const double t = r.uniform(2.0 * h, T - 2.0 * h);

        Tape tape;
        std::vector<Dual> y(static_cast<std::size_t>(n));
        eval_model(model, tape, dual_time(tape, t), y);

        yp.resize(static_cast<std::size_t>(n));
        ym.resize(static_cast<std::size_t>(n));
        eval_model_plain(model, t + h, yp);
        eval_model_plain(model, t - h, ym);

        for (int i = 0; i < n; ++i) {
            const double an = y[static_cast<std::size_t>(i)].dt.value();
            const double fd = (yp[static_cast<std::size_t>(i)] - ym[static_cast<std::size_t>(i)]) /
                              (2.0 * h);
            const double rel = std::abs(an - fd) / std::max(std::abs(an), 1e-8);
            worst = std::max(worst, rel);
        }
    }

    res.worst = worst;
    res.pass = worst < 1e-6;
    res.detail = "max rel err " + format_err(worst) + " over 100 pairs, threshold 1e-6";
    return res;
}

TrainConfig absorb_train_config() {
    TrainConfig cfg;
    cfg.K = 2;
    cfg.lambda_max = 100.0;  // grid {50, 100}; true rate 75 sits mid-cell
    cfg.L = 1;
    cfg.omega_max = 0.0;
    cfg.hidden_layers = 2;
    cfg.width = 16;
    cfg.S = 256;
    cfg.mode = CollocationMode::UniformLog;
    cfg.ic_weight = 10.0;
    cfg.adam.lr = 3e-3;
    cfg.adam.decay = 1.0;
    cfg.adam.iterations = 6000;
    cfg.seed = 11;
    return cfg;
}

SuiteResult check_absorb_suite() {
    SuiteResult res;
    OdeProblem problem = make_linear1(kAbsorbLambda);
    auto [model, report] = train(problem, absorb_train_config());

    std::vector<double> times = uniform_times(problem.T, 2001);
    ErrorMetrics m = model_errors(model, problem, times);
    res.worst = m.rel_l2;
    res.pass = !report.diverged && m.rel_l2 < 5e-2;
    res.detail = "rel L2 " + format_err(m.rel_l2) + " vs exp(-" +
                 std::to_string(static_cast<int>(kAbsorbLambda)) + "t), threshold 5e-2";
    return res;
}

OdeProblem make_manufactured(std::shared_ptr<const StiffModel> model) {
    OdeProblem p;
    p.name = "manufactured";
    p.n = model->n;
    p.T = model->horizon;
    p.y0.resize(static_cast<std::size_t>(model->n));
    eval_model_plain(*model, 0.0, p.y0);

    const int n = model->n;
    auto tangents = [model, n](double t, std::span<double> out) {
        thread_local Tape tape;
        tape.clear();
        std::vector<Dual> y(static_cast<std::size_t>(n));
        eval_model(*model, tape, dual_time(tape, t), y);
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)].dt.value();
    };

    p.rhs_plain = [tangents](double t, std::span<const double>, std::span<double> dy) {
        tangents(t, dy);
    };
    p.rhs_graph = [tangents, n](Tape& tape, double t, std::span<const NodeRef>,
                                std::span<NodeRef> dy) {
        std::vector<double> tmp(static_cast<std::size_t>(n));
        tangents(t, tmp);
        for (int i = 0; i < n; ++i)
            dy[static_cast<std::size_t>(i)] = tape.constant(tmp[static_cast<std::size_t>(i)]);
    };
    return p;
}

}  // namespace stiffnet
