// Parameter gradients of a recorded scalar plus the central-difference audit
// used by tests and the `check grad` suite.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "stiffnet/param_set.hpp"
#include "stiffnet/tape.hpp"

namespace stiffnet {

// d(root)/d(p) for every parameter; parameters not reaching root get 0.
inline std::vector<double> gradient(Tape& tape, NodeRef root, const ParamSet& params) {
    tape.backward(root);
    std::vector<double> grad(params.size(), 0.0);
    tape.accumulate_var_adjoints(grad);
    return grad;
}

// Throws NonFiniteGradient naming the offending op if the sweep produced a
// non-finite adjoint anywhere.
inline void require_finite_gradient(const Tape& tape, std::span<const double> grad) {
    for (double g : grad) {
        if (!std::isfinite(g)) {
            // The first non-finite forward value names the culprit better
            // than the var node its adjoint lands on.
            Op op{};
            std::uint32_t idx = 0;
            if (tape.find_nonfinite_value(op, idx) || tape.find_nonfinite_adjoint(op, idx))
                throw non_finite_gradient(std::string("op '") + op_name(op) + "' at node " +
                                          std::to_string(idx));
            throw non_finite_gradient("gradient entry not finite");
        }
    }
}

using GraphFn = std::function<NodeRef(Tape&, const ParamSet&)>;

// Max relative error between reverse-mode and central-difference gradients.
// The denominator floors at 1e-8 so zero-gradient components compare cleanly.
inline double finite_diff_check(const GraphFn& f, ParamSet& params, double h) {
    Tape tape;
    NodeRef root = f(tape, params);
    std::vector<double> analytic = gradient(tape, root, params);

    double worst = 0.0;
    Tape scratch;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[static_cast<std::uint32_t>(i)];
        params[static_cast<std::uint32_t>(i)] = saved + h;
        scratch.clear();
        const double up = f(scratch, params).value();
        params[static_cast<std::uint32_t>(i)] = saved - h;
        scratch.clear();
        const double dn = f(scratch, params).value();
        params[static_cast<std::uint32_t>(i)] = saved;

        const double fd = (up - dn) / (2.0 * h);
        const double rel = std::abs(analytic[i] - fd) / std::max(std::abs(analytic[i]), 1e-8);
        worst = std::max(worst, rel);
    }
    return worst;
}

}  // namespace stiffnet
