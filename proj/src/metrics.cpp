#include "stiffnet/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "stiffnet/errors.hpp"

namespace stiffnet {

ErrorMetrics compare_series(std::span<const double> approx, std::span<const double> truth, int n) {
    if (approx.size() != truth.size() || n <= 0 || approx.size() % static_cast<std::size_t>(n) != 0)
        throw shape_error("series sizes disagree");
    const std::size_t rows = approx.size() / static_cast<std::size_t>(n);

    ErrorMetrics m;
    m.linf_comp.assign(static_cast<std::size_t>(n), 0.0);
    m.rel_l2_comp.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> diff2(static_cast<std::size_t>(n), 0.0);
    std::vector<double> truth2(static_cast<std::size_t>(n), 0.0);

    for (std::size_t r = 0; r < rows; ++r) {
        for (int i = 0; i < n; ++i) {
            const std::size_t idx = r * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
            const double d = approx[idx] - truth[idx];
            m.linf_comp[static_cast<std::size_t>(i)] =
                std::max(m.linf_comp[static_cast<std::size_t>(i)], std::abs(d));
            diff2[static_cast<std::size_t>(i)] += d * d;
            truth2[static_cast<std::size_t>(i)] += truth[idx] * truth[idx];
        }
    }

    double diff2_all = 0.0, truth2_all = 0.0;
    for (int i = 0; i < n; ++i) {
        diff2_all += diff2[static_cast<std::size_t>(i)];
        truth2_all += truth2[static_cast<std::size_t>(i)];
        m.rel_l2_comp[static_cast<std::size_t>(i)] =
            std::sqrt(diff2[static_cast<std::size_t>(i)]) /
            (std::sqrt(truth2[static_cast<std::size_t>(i)]) + 1e-12);
        m.linf = std::max(m.linf, m.linf_comp[static_cast<std::size_t>(i)]);
    }
    m.rel_l2 = std::sqrt(diff2_all) / (std::sqrt(truth2_all) + 1e-12);
    return m;
}

std::vector<double> truth_series(const OdeProblem& problem, std::span<const double> times,
                                 double atol, double rtol) {
    std::vector<double> out(times.size() * static_cast<std::size_t>(problem.n), 0.0);
    if (problem.has_exact()) {
        for (std::size_t r = 0; r < times.size(); ++r)
            problem.exact(times[r], std::span<double>(out).subspan(
                                        r * static_cast<std::size_t>(problem.n),
                                        static_cast<std::size_t>(problem.n)));
        return out;
    }
    ReferenceTrajectory traj = integrate_reference(problem, atol, rtol, times);
    return traj.states;
}

std::vector<double> model_series(const StiffModel& model, std::span<const double> times) {
    std::vector<double> out(times.size() * static_cast<std::size_t>(model.n), 0.0);
    for (std::size_t r = 0; r < times.size(); ++r)
        eval_model_plain(model, times[r],
                         std::span<double>(out).subspan(r * static_cast<std::size_t>(model.n),
                                                        static_cast<std::size_t>(model.n)));
    return out;
}

ErrorMetrics model_errors(const StiffModel& model, const OdeProblem& problem,
                          std::span<const double> times) {
    if (model.n != problem.n) throw shape_error("model/problem dimension mismatch");
    return compare_series(model_series(model, times), truth_series(problem, times), problem.n);
}

ErrorMetrics trajectory_errors(const ReferenceTrajectory& traj, const OdeProblem& problem) {
    if (traj.n != problem.n) throw shape_error("trajectory/problem dimension mismatch");
    if (!problem.has_exact()) throw ConfigError("trajectory_errors needs a closed-form solution");
    std::vector<double> truth(traj.states.size());
    std::vector<double> buf(static_cast<std::size_t>(problem.n));
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        problem.exact(traj.times[r], buf);
        for (int i = 0; i < problem.n; ++i)
            truth[r * static_cast<std::size_t>(problem.n) + static_cast<std::size_t>(i)] =
                buf[static_cast<std::size_t>(i)];
    }
    return compare_series(traj.states, truth, problem.n);
}

}  // namespace stiffnet
