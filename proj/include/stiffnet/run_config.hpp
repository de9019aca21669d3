// The JSON run configuration: strict schema (unknown keys rejected),
// documented defaults, lossless round-trip through resolved_json().
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "stiffnet/problems.hpp"
#include "stiffnet/train.hpp"

namespace stiffnet {

struct RunConfig {
    std::string problem_name;
    std::optional<double> problem_lambda;

    int K = 4;
    std::optional<double> lambda_max;  // default: 2x the problem's fast-rate hint
    int L = 1;
    double omega_max = 0.0;

    int hidden_layers = 3;
    int width = 20;
    bool per_component = false;

    int S = 512;
    std::string collocation_mode = "uniform";
    int iterations = 10000;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lr_decay = 1.0;
    double ic_weight = 10.0;
    std::uint64_t seed = 1;
    std::string form = "compact";

    std::string out_dir = "out";

    OdeProblem make_problem() const;
    TrainConfig make_train_config(const OdeProblem& problem) const;

    // Every key explicit, fixed order; parsing this back yields *this.
    nlohmann::ordered_json resolved_json(const OdeProblem& problem) const;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config_file(const std::string& path);

}  // namespace stiffnet
