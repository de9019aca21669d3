#include "stiffnet/snapshot.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "stiffnet/errors.hpp"

namespace stiffnet {

using nlohmann::json;
using nlohmann::ordered_json;

std::string encode_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double decode_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw ConfigError("snapshot: bad float literal '" + s + "'");
    return v;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ordered_json save_model(const StiffModel& model, const SnapshotMeta& meta) {
    ordered_json doc;
    doc["format"] = "stiffnet-model";
    doc["version"] = 1;
    doc["form"] = model.form == ModelForm::Compact ? "compact" : "expanded";
    doc["n"] = model.n;
    doc["horizon"] = encode_double(model.horizon);
    doc["grid"] = {{"K", model.rates.K},
                   {"lambda_max", encode_double(model.rates.lambda_max)},
                   {"L", model.freqs.L},
                   {"omega_max", encode_double(model.freqs.omega_max)}};

    // All nets share one trunk shape; record it from the first net.
    const Mlp& probe = model.form == ModelForm::Compact ? model.block_nets.front()
                                                        : model.w_nets.front();
    std::vector<int> hidden(probe.layer_sizes().begin() + 1, probe.layer_sizes().end() - 1);
    doc["net"] = {{"hidden", hidden}, {"per_component", model.per_component}};
    doc["seed"] = meta.seed;
    doc["config_hash"] = meta.config_hash;

    ordered_json params = ordered_json::array();
    for (double v : model.params.values()) params.push_back(encode_double(v));
    doc["params"] = std::move(params);
    return doc;
}

StiffModel load_model(const json& doc, SnapshotMeta* meta_out) {
    if (doc.value("format", "") != "stiffnet-model")
        throw ConfigError("snapshot: missing or wrong 'format'");
    if (doc.value("version", 0) != 1) throw ConfigError("snapshot: unsupported version");

    ModelSpec spec;
    const std::string form = doc.at("form").get<std::string>();
    if (form == "compact")
        spec.form = ModelForm::Compact;
    else if (form == "expanded")
        spec.form = ModelForm::Expanded;
    else
        throw ConfigError("snapshot: bad form '" + form + "'");

    spec.n = doc.at("n").get<int>();
    spec.horizon = decode_double(doc.at("horizon").get<std::string>());
    spec.K = doc.at("grid").at("K").get<int>();
    spec.lambda_max = decode_double(doc.at("grid").at("lambda_max").get<std::string>());
    spec.L = doc.at("grid").at("L").get<int>();
    spec.omega_max = decode_double(doc.at("grid").at("omega_max").get<std::string>());
    spec.hidden = doc.at("net").at("hidden").get<std::vector<int>>();
    spec.per_component = doc.at("net").at("per_component").get<bool>();
    spec.seed = doc.value("seed", std::uint64_t{0});

    StiffModel model = build_model(spec);
    const auto& params = doc.at("params");
    if (params.size() != model.param_count())
        throw ConfigError("snapshot: parameter count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i)
        model.params[static_cast<std::uint32_t>(i)] =
            decode_double(params[i].get<std::string>());

    if (meta_out) {
        meta_out->seed = spec.seed;
        meta_out->config_hash = doc.value("config_hash", "");
    }
    return model;
}

void save_model_file(const std::string& path, const StiffModel& model, const SnapshotMeta& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << save_model(model, meta).dump(2) << "\n";
}

StiffModel load_model_file(const std::string& path, SnapshotMeta* meta_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("snapshot parse error: " + std::string(e.what()));
    }
    return load_model(doc, meta_out);
}

}  // namespace stiffnet
