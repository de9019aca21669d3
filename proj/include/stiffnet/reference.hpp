// Independent numerical oracle: adaptive TR-BDF2 (one-step, L-stable) with
// damped simplified Newton, central-difference Jacobians, an embedded
// third-order error estimate, and cubic Hermite dense output.
#pragma once

#include <span>
#include <vector>

#include "stiffnet/problems.hpp"

namespace stiffnet {

struct ReferenceTrajectory {
    std::vector<double> times;   // requested output times, sorted
    std::vector<double> states;  // row-major [times.size()][n]
    int n = 0;
    double atol = 0.0, rtol = 0.0;
    long steps_accepted = 0;
    long steps_rejected = 0;

    // Accepted step endpoints (t_0 = 0 included), row-major like states.
    std::vector<double> node_times;
    std::vector<double> node_states;

    std::span<const double> state(std::size_t i) const {
        return std::span<const double>(states).subspan(i * static_cast<std::size_t>(n),
                                                       static_cast<std::size_t>(n));
    }
};

// Integrates the problem over [0, T] and reports states at dense_times
// (which must be sorted and lie within [0, T]).
ReferenceTrajectory integrate_reference(const OdeProblem& problem, double atol, double rtol,
                                        std::span<const double> dense_times);

// Uniform count-point output grid over [0, T].
std::vector<double> uniform_times(double T, int count);

}  // namespace stiffnet
