// Error metrics between a trained model (or trajectory) and the truth:
// closed form when the problem has one, reference integration otherwise.
#pragma once

#include <span>
#include <vector>

#include "stiffnet/model.hpp"
#include "stiffnet/problems.hpp"
#include "stiffnet/reference.hpp"

namespace stiffnet {

struct ErrorMetrics {
    double linf = 0.0;
    double rel_l2 = 0.0;
    std::vector<double> linf_comp;    // per state component
    std::vector<double> rel_l2_comp;  // denominator ||truth||_2 + 1e-12
};

// Both series row-major [times][n].
ErrorMetrics compare_series(std::span<const double> approx, std::span<const double> truth, int n);

// Truth at the given times: exact solution if present, else the reference
// integrator at the given tolerances.
std::vector<double> truth_series(const OdeProblem& problem, std::span<const double> times,
                                 double atol = 1e-10, double rtol = 1e-10);

std::vector<double> model_series(const StiffModel& model, std::span<const double> times);

ErrorMetrics model_errors(const StiffModel& model, const OdeProblem& problem,
                          std::span<const double> times);

ErrorMetrics trajectory_errors(const ReferenceTrajectory& traj, const OdeProblem& problem);

}  // namespace stiffnet
