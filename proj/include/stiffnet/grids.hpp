// Rate and frequency grids plus the decaying-oscillatory basis factors.
// Each basis block is one point s = -lambda + i*omega in the Laplace plane,
// realized as the real pair {e^{-lambda t} cos(omega t), e^{-lambda t} sin(omega t)}.
#pragma once

#include <utility>
#include <vector>

#include "stiffnet/dual.hpp"

namespace stiffnet {

struct RateGrid {
    double lambda_max = 0.0;
    int K = 0;
    std::vector<double> rates;  // k * lambda_max / K, k = 1..K

    double delta() const { return lambda_max / K; }
};

struct FrequencyGrid {
    double omega_max = 0.0;
    int L = 0;
    std::vector<double> freqs;  // l * omega_max / (L-1), l = 0..L-1; {0} when L == 1
    bool omega_max_ignored = false;
};

struct BasisIndex {
    double lambda = 0.0;  // 0 selects the non-decaying (DC) row
    double omega = 0.0;
};

RateGrid build_rate_grid(double lambda_max, int K);
FrequencyGrid build_freq_grid(double omega_max, int L);

struct AbsorbResult {
    double nearest = 0.0;
    double gap = 0.0;
};

// Nearest grid rate and its distance; the gap is bounded by delta().
AbsorbResult absorb_check(double lambda_true, const RateGrid& grid);

// Contributions below this decay level are clamped to an exact zero so
// subnormals never leak into gradients. exp(-x) < 1e-300 for x above this.
inline constexpr double kDecayFloorLogThreshold = 690.7755278982137;

inline bool basis_is_dead(const BasisIndex& idx, double t) {
    return idx.lambda * t > kDecayFloorLogThreshold;
}

// (c, s) with exact tangents, recorded from graph primitives. For constant t
// the chain folds to constants on the tape.
std::pair<Dual, Dual> basis_dual(Tape& tape, const BasisIndex& idx, Dual t);

// Value-only twin, op-for-op identical to the folded graph computation.
void basis_plain(const BasisIndex& idx, double t, double& c, double& s);

}  // namespace stiffnet
