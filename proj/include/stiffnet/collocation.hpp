// Time stations for the residual loss: machine-uniform over [0, T], with an
// optional log-spaced layer near t = 0 that resolves fast transients.
#pragma once

#include <string>
#include <vector>

namespace stiffnet {

enum class CollocationMode { Uniform, UniformLog };

CollocationMode collocation_mode_from_string(const std::string& s);
std::string to_string(CollocationMode mode);

struct CollocationGrid {
    std::vector<double> points;  // sorted, unique, within [0, T]
    CollocationMode mode = CollocationMode::Uniform;

    int count() const { return static_cast<int>(points.size()); }
};

// Uniform: t_s = s*T/(S-1). UniformLog additionally appends ceil(S/4) points
// T*10^{-u}, u drawn uniformly from [1, 6] with a fixed internal seed, so the
// grid is a pure function of (T, S, mode).
CollocationGrid build_collocation(double T, int S, CollocationMode mode);

}  // namespace stiffnet
