#include "stiffnet/collocation.hpp"

#include <algorithm>
#include <cmath>

#include "stiffnet/errors.hpp"
#include "stiffnet/rng.hpp"

namespace stiffnet {

namespace {
constexpr std::uint64_t kLogLayerSeed = 0x7C0110CA71ABull;
}

CollocationMode collocation_mode_from_string(const std::string& s) {
    if (s == "uniform") return CollocationMode::Uniform;
    if (s == "uniform+log") return CollocationMode::UniformLog;
    throw ConfigError("unknown collocation mode '" + s + "' (uniform | uniform+log)");
}

std::string to_string(CollocationMode mode) {
    return mode == CollocationMode::Uniform ? "uniform" : "uniform+log";
}

CollocationGrid build_collocation(double T, int S, CollocationMode mode) {
    if (!(T > 0.0)) throw invalid_grid("horizon must be > 0");
    if (S < 2) throw invalid_grid("collocation count S must be >= 2");

    CollocationGrid grid;
    grid.mode = mode;
    grid.points.reserve(static_cast<std::size_t>(S + S / 4 + 1));
    for (int s = 0; s < S; ++s) grid.points.push_back((s * T) / (S - 1));
    grid.points.back() = T;

    if (mode == CollocationMode::UniformLog) {
        SplitMix64 rng(kLogLayerSeed);
        const int extra = (S + 3) / 4;
        for (int j = 0; j < extra; ++j) {
            const double u = rng.uniform(1.0, 6.0);
            grid.points.push_back(T * std::pow(10.0, -u));
        }
        std::sort(grid.points.begin(), grid.points.end());
        grid.points.erase(std::unique(grid.points.begin(), grid.points.end()), grid.points.end());
    }
    return grid;
}

}  // namespace stiffnet
