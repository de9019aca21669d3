// Self-check suites behind `check --suite ...` and the acceptance tests:
//   grad   — reverse-mode gradients vs central differences on seeded configs;
//   dual   — time tangents vs central differences in t;
//   absorb — off-grid rate trained halfway between two grid rates.
#pragma once

#include <memory>
#include <string>

#include "stiffnet/model.hpp"
#include "stiffnet/problems.hpp"
#include "stiffnet/train.hpp"

namespace stiffnet {

struct SuiteResult {
    bool pass = false;
    double worst = 0.0;
    std::string detail;
};

SuiteResult check_grad_suite();
SuiteResult check_dual_suite();
SuiteResult check_absorb_suite();

// Problem whose right-hand side is the model's own time derivative and whose
// initial state is the model's value at 0: the residual loss must vanish.
OdeProblem make_manufactured(std::shared_ptr<const StiffModel> model);

// Config used by the absorb suite and acceptance: rate strictly between grid
// points {50, 100}.
TrainConfig absorb_train_config();
inline constexpr double kAbsorbLambda = 75.0;

// Seeded random model used by the dual suite and tests.
StiffModel random_small_model(std::uint64_t seed, int n, double horizon, double lambda_max_cap);

}  // namespace stiffnet
