#include "stiffnet/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "stiffnet/checks.hpp"
#include "stiffnet/csv.hpp"
#include "stiffnet/errors.hpp"
#include "stiffnet/run_config.hpp"
#include "stiffnet/snapshot.hpp"

namespace stiffnet::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("STIFFNET_SEED");
    if (!v || !*v) return std::nullopt;
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(v, &end, 10);
    if (end == v || *end != '\0')
        throw ConfigError("STIFFNET_SEED is not an unsigned integer: '" + std::string(v) + "'");
    return static_cast<std::uint64_t>(parsed);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

int cmd_train(const std::string& config_path, const std::string& out_override,
              std::optional<std::uint64_t> seed_flag, bool svg) {
    RunConfig cfg = load_run_config_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;

    // Seed precedence: flag > environment > config file.
    if (auto es = env_seed()) cfg.seed = *es;
    if (seed_flag) cfg.seed = *seed_flag;

    OdeProblem problem = cfg.make_problem();
    TrainConfig tcfg = cfg.make_train_config(problem);

    const ordered_json resolved = cfg.resolved_json(problem);
    const std::string resolved_text = resolved.dump(2) + "\n";

    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    write_text(out / "config.json", resolved_text);

    auto [model, report] = train(problem, tcfg);

    write_loss_csv((out / "loss.csv").string(), report.loss_history);

    SnapshotMeta meta;
    meta.seed = cfg.seed;
    meta.config_hash = fnv1a_hex(resolved_text);
    save_model_file((out / "model.json").string(), model, meta);

    std::vector<double> times = uniform_times(problem.T, report.eval_points);
    std::vector<double> yhat = model_series(model, times);
    std::vector<double> truth = truth_series(problem, times);
    write_solution_csv((out / "solution.csv").string(), times, yhat, truth, problem.n);

    ordered_json rep;
    rep["problem"] = problem.name;
    rep["seed"] = report.seed;
    rep["iterations_run"] = report.loss_history.size();
    rep["final_loss"] = report.final_loss;
    rep["final_residual_rms"] = report.final_residual_rms;
    rep["ic_error"] = report.ic_error;
    rep["errors"] = {{"linf", report.errors.linf},
                     {"rel_l2", report.errors.rel_l2},
                     {"linf_comp", report.errors.linf_comp},
                     {"rel_l2_comp", report.errors.rel_l2_comp}};
    rep["stiffness_ratio"] = report.stiffness_ratio;
    rep["wall_seconds"] = report.wall_seconds;
    rep["diverged"] = report.diverged;
    rep["diverged_iteration"] = report.diverged_iteration;
    rep["eval_points"] = report.eval_points;
    rep["loss_history"] = report.loss_history;
    write_text(out / "report.json", rep.dump(2) + "\n");

    if (svg) {
        if (report.loss_history.size() >= 2) {
            std::vector<double> iters(report.loss_history.size());
            for (std::size_t i = 0; i < iters.size(); ++i) iters[i] = static_cast<double>(i);
            write_svg_chart((out / "loss.svg").string(), "training loss", iters,
                            report.loss_history, 1, true);
        }
        std::vector<double> combined(times.size() * static_cast<std::size_t>(2 * problem.n));
        for (std::size_t r = 0; r < times.size(); ++r)
            for (int i = 0; i < problem.n; ++i) {
                combined[r * static_cast<std::size_t>(2 * problem.n) + static_cast<std::size_t>(i)] =
                    yhat[r * static_cast<std::size_t>(problem.n) + static_cast<std::size_t>(i)];
                combined[r * static_cast<std::size_t>(2 * problem.n) +
                         static_cast<std::size_t>(problem.n + i)] =
                    truth[r * static_cast<std::size_t>(problem.n) + static_cast<std::size_t>(i)];
            }
        write_svg_chart((out / "solution.svg").string(), "solution (yhat, ytruth)", times, combined,
                        2 * problem.n, false);
    }

    if (report.diverged) {
        std::cerr << "training diverged at iteration " << report.diverged_iteration << "\n";
        return 2;
    }
    std::cout << "trained " << problem.name << ": final loss " << report.final_loss << ", rel L2 "
              << report.errors.rel_l2 << ", outputs in " << cfg.out_dir << "\n";
    return 0;
}

int cmd_oracle(const std::string& name, std::optional<double> lambda, double atol, double rtol,
               const std::string& out_dir) {
    ProblemOptions opts;
    opts.lambda = lambda;
    OdeProblem problem = problem_by_name(name, opts);

    std::vector<double> times = uniform_times(problem.T, 1001);
    ReferenceTrajectory traj = integrate_reference(problem, atol, rtol, times);

    fs::create_directories(out_dir);
    write_reference_csv((fs::path(out_dir) / "reference.csv").string(), traj);
    std::cout << "integrated " << problem.name << ": " << traj.steps_accepted << " steps ("
              << traj.steps_rejected << " rejected), reference.csv in " << out_dir << "\n";
    return 0;
}

int cmd_check(const std::string& suite) {
    SuiteResult res;
    if (suite == "grad")
        res = check_grad_suite();
    else if (suite == "dual")
        res = check_dual_suite();
    else if (suite == "absorb")
        res = check_absorb_suite();
    else
        throw ConfigError("unknown suite '" + suite + "' (grad | dual | absorb)");

    std::cout << "check " << suite << ": " << (res.pass ? "PASS" : "FAIL") << " — " << res.detail
              << "\n";
    return res.pass ? 0 : 3;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"stiffnet — global-in-time stiff ODE solver via decaying-oscillatory basis training"};
    app.require_subcommand(1);

    auto* train_cmd = app.add_subcommand("train", "train a model from a JSON config");
    std::string config_path, out_override;
    std::optional<std::uint64_t> seed_flag;
    bool svg = false;
    train_cmd->add_option("--config", config_path, "run configuration JSON")->required();
    train_cmd->add_option("--out", out_override, "output directory (overrides output.dir)");
    train_cmd->add_option("--seed", seed_flag, "seed override (beats STIFFNET_SEED and the file)");
    train_cmd->add_flag("--svg", svg, "also emit loss.svg and solution.svg");

    auto* oracle_cmd = app.add_subcommand("oracle", "run the reference integrator");
    std::string problem_name, oracle_out = "out";
    std::optional<double> lambda;
    double atol = 1e-8, rtol = 1e-8;
    oracle_cmd->add_option("--problem", problem_name, "problem name")->required();
    oracle_cmd->add_option("--lambda", lambda, "rate override where applicable");
    oracle_cmd->add_option("--atol", atol, "absolute tolerance");
    oracle_cmd->add_option("--rtol", rtol, "relative tolerance");
    oracle_cmd->add_option("--out", oracle_out, "output directory");

    auto* check_cmd = app.add_subcommand("check", "run a property suite");
    std::string suite;
    check_cmd->add_option("--suite", suite, "grad | dual | absorb")->required();

    auto* version_cmd = app.add_subcommand("version", "print version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train_cmd->parsed()) return cmd_train(config_path, out_override, seed_flag, svg);
        if (oracle_cmd->parsed()) return cmd_oracle(problem_name, lambda, atol, rtol, oracle_out);
        if (check_cmd->parsed()) return cmd_check(suite);
        if (version_cmd->parsed()) {
            std::cout << "stiffnet " << kVersion << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("stiffnet");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace stiffnet::cli
