#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <vector>

#include "stiffnet/checks.hpp"
#include "stiffnet/snapshot.hpp"

using namespace stiffnet;

TEST_CASE("hex-float encoding is bit-exact") {
    for (double v : {0.0, -0.0, 1.0, -1.5, 3.141592653589793, 4.9406564584124654e-324,
                     1.7976931348623157e308, -2.2250738585072014e-308}) {
        CHECK(decode_double(encode_double(v)) == v);
    }
    CHECK_THROWS_AS(decode_double("zzz"), ConfigError);
}

TEST_CASE("save/load reproduces outputs bitwise on a probe grid") {
    for (auto form : {ModelForm::Compact, ModelForm::Expanded}) {
        ModelSpec spec;
        spec.form = form;
        spec.n = 2;
        spec.horizon = 1.5;
        spec.K = 3;
        spec.lambda_max = 40.0;
        spec.L = 2;
        spec.omega_max = 3.0;
        spec.hidden = {6, 6};
        spec.seed = 2024;
        StiffModel m = build_model(spec);

        SnapshotMeta meta;
        meta.seed = 2024;
        meta.config_hash = fnv1a_hex("probe");
        nlohmann::ordered_json doc = save_model(m, meta);

        SnapshotMeta loaded_meta;
        StiffModel loaded = load_model(doc, &loaded_meta);
        CHECK(loaded_meta.seed == 2024);
        CHECK(loaded_meta.config_hash == meta.config_hash);
        REQUIRE(loaded.param_count() == m.param_count());

        std::vector<double> a(2), b(2);
        for (int j = 0; j < 32; ++j) {
            const double t = 1.5 * j / 31.0;
            eval_model_plain(m, t, a);
            eval_model_plain(loaded, t, b);
            CHECK(a[0] == b[0]);
            CHECK(a[1] == b[1]);
        }
    }
}

TEST_CASE("file round trip") {
    StiffModel m = random_small_model(404, 1, 1.0, 50.0);
    const std::string path = (std::filesystem::temp_directory_path() / "stiffnet_snap_test.json").string();

    SnapshotMeta meta;
    meta.seed = 7;
    meta.config_hash = "00";
    save_model_file(path, m, meta);
    StiffModel loaded = load_model_file(path);
    REQUIRE(loaded.param_count() == m.param_count());
    for (std::uint32_t i = 0; i < m.params.size(); ++i) CHECK(loaded.params[i] == m.params[i]);
    std::remove(path.c_str());
}

TEST_CASE("corrupt snapshots are rejected") {
    StiffModel m = random_small_model(11, 1, 1.0, 10.0);
    SnapshotMeta meta;
    nlohmann::ordered_json doc = save_model(m, meta);

    nlohmann::json bad = doc;
    bad["params"].erase(bad["params"].size() - 1);
    CHECK_THROWS_AS(load_model(bad, nullptr), ConfigError);

    nlohmann::json wrong = doc;
    wrong["format"] = "something-else";
    CHECK_THROWS_AS(load_model(wrong, nullptr), ConfigError);

    nlohmann::json v2 = doc;
    v2["version"] = 2;
    CHECK_THROWS_AS(load_model(v2, nullptr), ConfigError);
}

TEST_CASE("fnv1a is stable") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
    CHECK(fnv1a_hex("stiffnet") == fnv1a_hex("stiffnet"));
}
