// The trainable ansatz: per-block subnetworks modulated by the basis factors.
//
// Compact form: one net per (lambda, omega) block, emitting a cos and a sin
// channel per state component; the lambda = 0 row carries the non-decaying
// part. Expanded form: gate nets U_{k,l} (cos/sin pair) multiply envelope
// nets V_k per rate, with the lambda = 0 row handled by W_l nets.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stiffnet/grids.hpp"
#include "stiffnet/mlp.hpp"

namespace stiffnet {

enum class ModelForm { Compact, Expanded };

struct ModelSpec {
    ModelForm form = ModelForm::Compact;
    int n = 1;
    double horizon = 1.0;
    int K = 4;
    double lambda_max = 1.0;
    int L = 1;
    double omega_max = 0.0;
    std::vector<int> hidden = {20, 20, 20};
    bool per_component = false;  // one net per (block, state component) instead of shared trunks
    std::uint64_t seed = 1;
};

struct StiffModel {
    ModelForm form = ModelForm::Compact;
    RateGrid rates;
    FrequencyGrid freqs;
    int n = 1;
    double horizon = 1.0;
    bool per_component = false;

    // Compact: blocks enumerate lambda in {0, rates...} (outer) x freqs (inner).
    std::vector<BasisIndex> blocks;
    std::vector<Mlp> block_nets;  // shared: one per block; per_component: n per block

    // Expanded.
    std::vector<Mlp> w_nets;  // L   (per_component: L*n)
    std::vector<Mlp> v_nets;  // K   (per_component: K*n)
    std::vector<Mlp> u_nets;  // K*L

    ParamSet params;

    std::size_t param_count() const { return params.size(); }
    std::size_t trunk_count() const {
        return form == ModelForm::Compact ? block_nets.size()
                                          : w_nets.size() + v_nets.size() + u_nets.size();
    }
};

StiffModel build_model(const ModelSpec& spec);

// Y(t) with exact time tangents; out.size() == n.
void eval_model(const StiffModel& m, Tape& tape, Dual t, std::span<Dual> out);
void eval_compact(const StiffModel& m, Tape& tape, Dual t, std::span<Dual> out);
void eval_expanded(const StiffModel& m, Tape& tape, Dual t, std::span<Dual> out);

// Value-only evaluation mirroring the graph computation op for op.
void eval_model_plain(const StiffModel& m, double t, std::span<double> out);

}  // namespace stiffnet
