// Adam with bias correction and an optional per-iteration learning-rate decay.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "stiffnet/errors.hpp"

namespace stiffnet {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double decay = 1.0;  // lr_i = lr * decay^i
    int iterations = 10000;
};

struct AdamState {
    std::vector<double> m, v;
    long step = 0;

    explicit AdamState(std::size_t params) : m(params, 0.0), v(params, 0.0) {}
};

// One full-batch update. A non-finite gradient aborts before any mutation.
inline void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
                      const AdamConfig& cfg) {
    if (params.size() != grad.size() || params.size() != state.m.size())
        throw shape_error("adam_step size mismatch");
    for (double g : grad)
        if (!std::isfinite(g)) throw non_finite_gradient("adam step aborted");

    state.step += 1;
    const double b1t = std::pow(cfg.beta1, static_cast<double>(state.step));
    const double b2t = std::pow(cfg.beta2, static_cast<double>(state.step));
    const double lr =
        cfg.lr * (cfg.decay == 1.0 ? 1.0 : std::pow(cfg.decay, static_cast<double>(state.step - 1)));

    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        const double mhat = state.m[i] / (1.0 - b1t);
        const double vhat = state.v[i] / (1.0 - b2t);
        params[i] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
}

}  // namespace stiffnet
