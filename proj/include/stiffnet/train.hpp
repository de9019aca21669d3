// Training loop: full-batch Adam on the collocation residual loss.
// A run is a pure function of (problem, config) — fixed seed, fixed-order
// reductions — so repeated runs reproduce loss histories bitwise.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stiffnet/adam.hpp"
#include "stiffnet/collocation.hpp"
#include "stiffnet/metrics.hpp"
#include "stiffnet/model.hpp"
#include "stiffnet/problems.hpp"

namespace stiffnet {

struct TrainConfig {
    int K = 4;
    double lambda_max = 1.0;
    int L = 1;
    double omega_max = 0.0;

    int hidden_layers = 3;
    int width = 20;
    bool per_component = false;

    int S = 512;
    CollocationMode mode = CollocationMode::Uniform;
    double ic_weight = 10.0;

    AdamConfig adam;
    std::uint64_t seed = 1;
    ModelForm form = ModelForm::Compact;

    std::vector<int> hidden_sizes() const { return std::vector<int>(static_cast<std::size_t>(hidden_layers), width); }
};

struct TrainReport {
    std::vector<double> loss_history;  // one entry per completed iteration
    double final_loss = 0.0;
    double final_residual_rms = 0.0;  // sqrt of the mean residual term
    double ic_error = 0.0;            // ||Y(0) - y0||_2
    ErrorMetrics errors;              // vs exact, else vs reference integrator
    double stiffness_ratio = 1.0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    bool diverged = false;
    long diverged_iteration = -1;
    int eval_points = 0;
};

std::pair<StiffModel, TrainReport> train(const OdeProblem& problem, const TrainConfig& config);

}  // namespace stiffnet
