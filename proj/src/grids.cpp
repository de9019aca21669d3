#include "stiffnet/grids.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stiffnet/errors.hpp"

namespace stiffnet {

RateGrid build_rate_grid(double lambda_max, int K) {
    if (!(lambda_max > 0.0)) throw invalid_grid("lambda_max must be > 0");
    if (K < 1) throw invalid_grid("K must be >= 1");
    RateGrid g;
    g.lambda_max = lambda_max;
    g.K = K;
    g.rates.reserve(static_cast<std::size_t>(K));
    const double dl = lambda_max / K;
    for (int k = 1; k <= K; ++k) g.rates.push_back(k * dl);
    g.rates.back() = lambda_max;  // k = K lands exactly on the endpoint
    return g;
}

FrequencyGrid build_freq_grid(double omega_max, int L) {
    if (!(omega_max >= 0.0)) throw invalid_grid("omega_max must be >= 0");
    if (L < 1) throw invalid_grid("L must be >= 1");
    FrequencyGrid g;
    g.omega_max = omega_max;
    g.L = L;
    g.freqs.reserve(static_cast<std::size_t>(L));
    if (L == 1) {
        g.freqs.push_back(0.0);
        g.omega_max_ignored = (omega_max > 0.0);
    } else {
        const double dw = omega_max / (L - 1);
        for (int l = 0; l < L; ++l) g.freqs.push_back(l * dw);
    }
    return g;
}

AbsorbResult absorb_check(double lambda_true, const RateGrid& grid) {
    const double dl = grid.delta();
    if (!(lambda_true > 0.0) || lambda_true > grid.lambda_max + dl)
        throw out_of_range("lambda_true " + std::to_string(lambda_true) +
                           " outside (0, lambda_max + delta]");
    int k = static_cast<int>(std::floor(lambda_true / dl + 0.5));
    k = std::clamp(k, 1, grid.K);
    const double nearest = grid.rates[static_cast<std::size_t>(k - 1)];
    return {nearest, std::abs(lambda_true - nearest)};
}

std::pair<Dual, Dual> basis_dual(Tape& tape, const BasisIndex& idx, Dual t) {
    if (tape.is_const(t.v) && basis_is_dead(idx, t.v.value())) {
        return {dual_const(tape, 0.0), dual_const(tape, 0.0)};
    }
    Dual lt = idx.lambda * t;
    Dual e = exp(-lt);
    Dual wt = idx.omega * t;
    Dual c = e * cos(wt);
    Dual s = e * sin(wt);
    return {c, s};
}

void basis_plain(const BasisIndex& idx, double t, double& c, double& s) {
    if (basis_is_dead(idx, t)) {
        c = 0.0;
        s = 0.0;
        return;
    }
    const double e = std::exp(-(idx.lambda * t));
    const double wt = idx.omega * t;
    c = e * std::cos(wt);
    s = e * std::sin(wt);
}

}  // namespace stiffnet
