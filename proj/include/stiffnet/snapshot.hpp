// Versioned JSON model snapshots. Parameters are stored as hex-float
// strings, so a load reproduces the saved model bit for bit.
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "stiffnet/model.hpp"

namespace stiffnet {

struct SnapshotMeta {
    std::uint64_t seed = 0;
    std::string config_hash;
};

nlohmann::ordered_json save_model(const StiffModel& model, const SnapshotMeta& meta);
StiffModel load_model(const nlohmann::json& doc, SnapshotMeta* meta_out = nullptr);

void save_model_file(const std::string& path, const StiffModel& model, const SnapshotMeta& meta);
StiffModel load_model_file(const std::string& path, SnapshotMeta* meta_out = nullptr);

// Bit-exact double <-> string encoding (hex-float).
std::string encode_double(double v);
double decode_double(const std::string& s);

// FNV-1a over a string; used to stamp snapshots with their config.
std::string fnv1a_hex(const std::string& data);

}  // namespace stiffnet
