#include "stiffnet/train.hpp"

#include <chrono>
#include <cmath>

#include "stiffnet/loss.hpp"

namespace stiffnet {

std::pair<StiffModel, TrainReport> train(const OdeProblem& problem, const TrainConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();

    ModelSpec spec;
    spec.form = config.form;
    spec.n = problem.n;
    spec.horizon = problem.T;
    spec.K = config.K;
    spec.lambda_max = config.lambda_max;
    spec.L = config.L;
    spec.omega_max = config.omega_max;
    spec.hidden = config.hidden_sizes();
    spec.per_component = config.per_component;
    spec.seed = config.seed;

    StiffModel model = build_model(spec);
    CollocationGrid grid = build_collocation(problem.T, config.S, config.mode);
    LossKernel kernel(model, problem, grid, config.ic_weight);

    TrainReport report;
    report.seed = config.seed;
    report.stiffness_ratio = problem.stiffness_ratio();
    report.loss_history.reserve(static_cast<std::size_t>(config.adam.iterations));

    AdamState state(model.param_count());
    std::vector<double> grad(model.param_count(), 0.0);

    for (int it = 0; it < config.adam.iterations; ++it) {
        try {
            LossParts parts = kernel.value_and_gradient(grad);
            report.loss_history.push_back(parts.total);
            adam_step(model.params.values(), grad, state, config.adam);
        } catch (const NumericError&) {
            report.diverged = true;
            report.diverged_iteration = it;
            report.loss_history.resize(static_cast<std::size_t>(it));
            break;
        }
    }

    if (!report.diverged) {
        LossParts parts = kernel.value_only();
        report.final_loss = parts.total;
        report.final_residual_rms = std::sqrt(parts.residual_mean);
        report.ic_error = std::sqrt(parts.ic);
    } else if (!report.loss_history.empty()) {
        report.final_loss = report.loss_history.back();
    }

    // Error metrics on a 10x denser uniform grid than the collocation count.
    report.eval_points = 10 * config.S + 1;
    if (!report.diverged) {
        std::vector<double> times = uniform_times(problem.T, report.eval_points);
        report.errors = model_errors(model, problem, times);
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(model), std::move(report)};
}

}  // namespace stiffnet
