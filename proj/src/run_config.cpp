#include "stiffnet/run_config.hpp"

#include <fstream>
#include <set>

#include "stiffnet/errors.hpp"

namespace stiffnet {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::string& scope,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" +
                              (scope.empty() ? it.key() : scope + "." + it.key()) + "'");
    }
}

template <class T>
T get_or(const json& obj, const std::string& scope, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: bad value for '" + scope + "." + key + "'");
    }
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
    reject_unknown(doc, "", {"problem", "grid", "net", "train", "output"});

    RunConfig c;

    if (!doc.contains("problem") || !doc.at("problem").is_object())
        throw ConfigError("config: missing 'problem' object");
    {
        const json& p = doc.at("problem");
        reject_unknown(p, "problem", {"name", "lambda"});
        if (!p.contains("name")) throw ConfigError("config: missing 'problem.name'");
        c.problem_name = p.at("name").get<std::string>();
        if (p.contains("lambda")) c.problem_lambda = p.at("lambda").get<double>();
    }

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        if (!g.is_object()) throw ConfigError("config: 'grid' must be an object");
        reject_unknown(g, "grid", {"K", "lambda_max", "L", "omega_max"});
        c.K = get_or(g, "grid", "K", c.K);
        if (g.contains("lambda_max")) c.lambda_max = g.at("lambda_max").get<double>();
        c.L = get_or(g, "grid", "L", c.L);
        c.omega_max = get_or(g, "grid", "omega_max", c.omega_max);
        if (c.K < 1) throw ConfigError("config: 'grid.K' must be >= 1");
        if (c.lambda_max && !(*c.lambda_max > 0.0))
            throw ConfigError("config: 'grid.lambda_max' must be > 0");
        if (c.L < 1) throw ConfigError("config: 'grid.L' must be >= 1");
        if (c.omega_max < 0.0) throw ConfigError("config: 'grid.omega_max' must be >= 0");
    }

    if (doc.contains("net")) {
        const json& n = doc.at("net");
        if (!n.is_object()) throw ConfigError("config: 'net' must be an object");
        reject_unknown(n, "net", {"hidden_layers", "width", "per_component"});
        c.hidden_layers = get_or(n, "net", "hidden_layers", c.hidden_layers);
        c.width = get_or(n, "net", "width", c.width);
        c.per_component = get_or(n, "net", "per_component", c.per_component);
        if (c.hidden_layers < 0) throw ConfigError("config: 'net.hidden_layers' must be >= 0");
        if (c.width < 1) throw ConfigError("config: 'net.width' must be >= 1");
    }

    if (doc.contains("train")) {
        const json& t = doc.at("train");
        if (!t.is_object()) throw ConfigError("config: 'train' must be an object");
        reject_unknown(t, "train",
                       {"S", "collocation_mode", "iterations", "lr", "beta1", "beta2", "eps",
                        "lr_decay", "ic_weight", "seed", "form"});
        c.S = get_or(t, "train", "S", c.S);
        c.collocation_mode = get_or(t, "train", "collocation_mode", c.collocation_mode);
        c.iterations = get_or(t, "train", "iterations", c.iterations);
        c.lr = get_or(t, "train", "lr", c.lr);
        c.beta1 = get_or(t, "train", "beta1", c.beta1);
        c.beta2 = get_or(t, "train", "beta2", c.beta2);
        c.eps = get_or(t, "train", "eps", c.eps);
        c.lr_decay = get_or(t, "train", "lr_decay", c.lr_decay);
        c.ic_weight = get_or(t, "train", "ic_weight", c.ic_weight);
        c.seed = get_or(t, "train", "seed", c.seed);
        c.form = get_or(t, "train", "form", c.form);
        if (c.S < 2) throw ConfigError("config: 'train.S' must be >= 2");
        if (c.iterations < 0) throw ConfigError("config: 'train.iterations' must be >= 0");
        if (!(c.lr > 0.0)) throw ConfigError("config: 'train.lr' must be > 0");
        if (c.ic_weight < 0.0) throw ConfigError("config: 'train.ic_weight' must be >= 0");
        collocation_mode_from_string(c.collocation_mode);
        if (c.form != "compact" && c.form != "expanded")
            throw ConfigError("config: 'train.form' must be compact or expanded");
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        if (!o.is_object()) throw ConfigError("config: 'output' must be an object");
        reject_unknown(o, "output", {"dir"});
        c.out_dir = get_or(o, "output", "dir", c.out_dir);
    }

    return c;
}

RunConfig load_run_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    return parse_run_config(doc);
}

OdeProblem RunConfig::make_problem() const {
    ProblemOptions opts;
    opts.lambda = problem_lambda;
    return problem_by_name(problem_name, opts);
}

TrainConfig RunConfig::make_train_config(const OdeProblem& problem) const {
    TrainConfig t;
    t.K = K;
    t.lambda_max = lambda_max.value_or(2.0 * problem.lambda_max_est);
    t.L = L;
    t.omega_max = omega_max;
    t.hidden_layers = hidden_layers;
    t.width = width;
    t.per_component = per_component;
    t.S = S;
    t.mode = collocation_mode_from_string(collocation_mode);
    t.ic_weight = ic_weight;
    t.adam.lr = lr;
    t.adam.beta1 = beta1;
    t.adam.beta2 = beta2;
    t.adam.eps = eps;
    t.adam.decay = lr_decay;
    t.adam.iterations = iterations;
    t.seed = seed;
    t.form = form == "compact" ? ModelForm::Compact : ModelForm::Expanded;
    return t;
}

ordered_json RunConfig::resolved_json(const OdeProblem& problem) const {
    ordered_json doc;
    doc["problem"]["name"] = problem_name;
    if (problem_lambda) doc["problem"]["lambda"] = *problem_lambda;
    doc["grid"] = {{"K", K},
                   {"lambda_max", lambda_max.value_or(2.0 * problem.lambda_max_est)},
                   {"L", L},
                   {"omega_max", omega_max}};
    doc["net"] = {{"hidden_layers", hidden_layers},
                  {"width", width},
                  {"per_component", per_component}};
    doc["train"] = {{"S", S},
                    {"collocation_mode", collocation_mode},
                    {"iterations", iterations},
                    {"lr", lr},
                    {"beta1", beta1},
                    {"beta2", beta2},
                    {"eps", eps},
                    {"lr_decay", lr_decay},
                    {"ic_weight", ic_weight},
                    {"seed", seed},
                    {"form", form}};
    doc["output"] = {{"dir", out_dir}};
    return doc;
}

}  // namespace stiffnet
