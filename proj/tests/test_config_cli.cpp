#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stiffnet/cli.hpp"
#include "stiffnet/run_config.hpp"
#include "stiffnet/snapshot.hpp"

using namespace stiffnet;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("stiffnet_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream out(p);
    out << body;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kTinyConfig = R"({
  "problem": {"name": "linear1", "lambda": 5.0},
  "grid": {"K": 2, "lambda_max": 10.0},
  "net": {"hidden_layers": 1, "width": 4},
  "train": {"S": 16, "iterations": 5, "seed": 3}
})";

}  // namespace

TEST_CASE("defaults fill in missing keys") {
    nlohmann::json doc = nlohmann::json::parse(R"({"problem": {"name": "linear1"}})");
    RunConfig c = parse_run_config(doc);
    CHECK(c.K == 4);
    CHECK(c.L == 1);
    CHECK(c.S == 512);
    CHECK(c.iterations == 10000);
    CHECK(c.collocation_mode == "uniform");
    CHECK(c.form == "compact");
    CHECK_FALSE(c.lambda_max.has_value());

    OdeProblem p = c.make_problem();
    TrainConfig t = c.make_train_config(p);
    CHECK(t.lambda_max == 200.0);  // 2x the problem's fast-rate hint (lambda=100)
}

TEST_CASE("unknown keys are rejected by full path") {
    auto expect_error = [](const char* body, const char* needle) {
        nlohmann::json doc = nlohmann::json::parse(body);
        try {
            parse_run_config(doc);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error(R"({"problem": {"name": "linear1"}, "grid": {"foo": 1}})", "grid.foo");
    expect_error(R"({"problem": {"name": "linear1", "speed": 2}})", "problem.speed");
    expect_error(R"({"problem": {"name": "linear1"}, "extra": {}})", "extra");
}

TEST_CASE("validation names the offending key") {
    auto expect_error = [](const char* body, const char* needle) {
        nlohmann::json doc = nlohmann::json::parse(body);
        try {
            parse_run_config(doc);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error(R"({"problem": {"name": "linear1"}, "grid": {"K": 0}})", "grid.K");
    expect_error(R"({"problem": {"name": "linear1"}, "train": {"S": 1}})", "train.S");
    expect_error(R"({"problem": {"name": "linear1"}, "train": {"lr": 0.0}})", "train.lr");
}

TEST_CASE("resolved config round-trips losslessly") {
    nlohmann::json doc = nlohmann::json::parse(kTinyConfig);
    RunConfig c = parse_run_config(doc);
    OdeProblem p = c.make_problem();

    nlohmann::ordered_json resolved = c.resolved_json(p);
    RunConfig c2 = parse_run_config(resolved);
    nlohmann::ordered_json resolved2 = c2.resolved_json(c2.make_problem());
    CHECK(resolved.dump() == resolved2.dump());
}

TEST_CASE("cmd_train writes the documented artifacts") {
    fs::path dir = temp_dir("train");
    std::string cfg = write_config(dir, kTinyConfig);
    const fs::path out = dir / "run";

    int code = cli::run({"train", "--config", cfg, "--out", out.string()});
    CHECK(code == 0);
    CHECK(fs::exists(out / "loss.csv"));
    CHECK(fs::exists(out / "solution.csv"));
    CHECK(fs::exists(out / "model.json"));
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "config.json"));

    std::string solution = slurp(out / "solution.csv");
    CHECK(solution.rfind("t,yhat_1,ytruth_1\n", 0) == 0);

    std::string loss = slurp(out / "loss.csv");
    CHECK(loss.rfind("iteration,loss\n", 0) == 0);
    int lines = 0;
    for (char ch : loss)
        if (ch == '\n') ++lines;
    CHECK(lines == 6);  // header + 5 iterations

    // The snapshot reloads into a working model.
    StiffModel m = load_model_file((out / "model.json").string());
    CHECK(m.n == 1);
    fs::remove_all(dir);
}

TEST_CASE("zero-iteration run leaves a header-only loss.csv") {
    fs::path dir = temp_dir("noop");
    std::string cfg = write_config(dir, R"({
      "problem": {"name": "linear1", "lambda": 2.0},
      "grid": {"K": 1, "lambda_max": 4.0},
      "net": {"hidden_layers": 1, "width": 3},
      "train": {"S": 8, "iterations": 0}
    })");
    const fs::path out = dir / "run";
    CHECK(cli::run({"train", "--config", cfg, "--out", out.string()}) == 0);
    CHECK(slurp(out / "loss.csv") == "iteration,loss\n");
    fs::remove_all(dir);
}

TEST_CASE("config errors exit 1 and name the key") {
    fs::path dir = temp_dir("badcfg");
    std::string cfg = write_config(dir, R"({
      "problem": {"name": "linear1"},
      "grid": {"K": 0}
    })");
    CHECK(cli::run({"train", "--config", cfg, "--out", (dir / "o").string()}) == 1);
    CHECK(cli::run({"train", "--config", (dir / "missing.json").string()}) == 1);
    CHECK(cli::run({"oracle", "--problem", "unknown", "--out", (dir / "o2").string()}) == 1);
    fs::remove_all(dir);
}

TEST_CASE("oracle writes reference.csv with the IC row") {
    fs::path dir = temp_dir("oracle");
    CHECK(cli::run({"oracle", "--problem", "prothero", "--out", dir.string()}) == 0);
    std::string csv = slurp(dir / "reference.csv");
    CHECK(csv.rfind("t,y_1\n0,1\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("oracle hits the exponential table value") {
    fs::path dir = temp_dir("oracle2");
    CHECK(cli::run({"oracle", "--problem", "linear1", "--lambda", "100", "--atol", "1e-10",
                    "--rtol", "1e-10", "--out", dir.string()}) == 0);
    std::ifstream in(dir / "reference.csv");
    std::string line;
    std::getline(in, line);  // header
    double t = 0.0, y = 0.0;
    for (int i = 0; i <= 100; ++i) {
        std::getline(in, line);
        std::sscanf(line.c_str(), "%lf,%lf", &t, &y);
    }
    CHECK(t == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(y - 4.5399929762484854e-5) < 1e-8);
    fs::remove_all(dir);
}

TEST_CASE("seed precedence: flag beats env beats file") {
    fs::path dir = temp_dir("seeds");
    std::string cfg = write_config(dir, kTinyConfig);  // file seed 3

    auto run_and_read_seed = [&](const std::vector<std::string>& args, const fs::path& out) {
        REQUIRE(cli::run(args) == 0);
        nlohmann::json rep = nlohmann::json::parse(slurp(out / "report.json"));
        return rep.at("seed").get<std::uint64_t>();
    };

    fs::path o1 = dir / "o1";
    CHECK(run_and_read_seed({"train", "--config", cfg, "--out", o1.string()}, o1) == 3);

    setenv("STIFFNET_SEED", "42", 1);
    fs::path o2 = dir / "o2";
    CHECK(run_and_read_seed({"train", "--config", cfg, "--out", o2.string()}, o2) == 42);

    fs::path o3 = dir / "o3";
    CHECK(run_and_read_seed({"train", "--config", cfg, "--out", o3.string(), "--seed", "7"}, o3) == 7);
    unsetenv("STIFFNET_SEED");

    fs::remove_all(dir);
}

TEST_CASE("svg flag emits charts") {
    fs::path dir = temp_dir("svg");
    std::string cfg = write_config(dir, kTinyConfig);
    const fs::path out = dir / "run";
    CHECK(cli::run({"train", "--config", cfg, "--out", out.string(), "--svg"}) == 0);
    CHECK(fs::exists(out / "loss.svg"));
    CHECK(fs::exists(out / "solution.svg"));
    std::string svg = slurp(out / "loss.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("version and usage") {
    CHECK(cli::run({"version"}) == 0);
    CHECK(cli::run({"definitely-not-a-command"}) == 1);
    CHECK(cli::run({"check", "--suite", "nonsense"}) == 1);
}

TEST_CASE("check dual suite passes via the CLI") {
    CHECK(cli::run({"check", "--suite", "dual"}) == 0);
}
