#include "stiffnet/mlp.hpp"

#include <cmath>

#include "stiffnet/errors.hpp"
#include "stiffnet/rng.hpp"

namespace stiffnet {

std::size_t Mlp::param_count(const std::vector<int>& layer_sizes) {
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
        total += static_cast<std::size_t>(layer_sizes[l] + 1) * layer_sizes[l + 1];
    return total;
}

Mlp Mlp::init(const std::vector<int>& layer_sizes, std::uint64_t seed, ParamSet& params,
              const std::string& name, double in_scale, double in_shift) {
    if (layer_sizes.size() < 2)
        throw invalid_architecture("need at least input and output layers in '" + name + "'");
    if (layer_sizes.front() != 1)
        throw invalid_architecture("input layer must have size 1 in '" + name + "'");
    for (int s : layer_sizes)
        if (s <= 0) throw invalid_architecture("zero layer size in '" + name + "'");

    Mlp mlp;
    mlp.sizes_ = layer_sizes;
    mlp.in_scale_ = in_scale;
    mlp.in_shift_ = in_shift;
    mlp.slice_ = params.register_slice(name, static_cast<std::uint32_t>(param_count(layer_sizes)));

    SplitMix64 rng(seed);
    std::uint32_t p = mlp.slice_.offset;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int n_in = layer_sizes[l];
        const int n_out = layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / (n_in + n_out));
        for (int j = 0; j < n_out; ++j)
            for (int i = 0; i < n_in; ++i) params[p++] = rng.uniform(-limit, limit);
        for (int j = 0; j < n_out; ++j) params[p++] = 0.0;
    }
    return mlp;
}

namespace {
std::uint32_t layer_base(const std::vector<int>& sizes, std::uint32_t offset, int layer) {
    std::uint32_t off = offset;
    for (int l = 0; l < layer; ++l)
        off += static_cast<std::uint32_t>(sizes[l] + 1) * sizes[l + 1];
    return off;
}
}  // namespace

std::uint32_t Mlp::weight_index(int layer, int row, int col) const {
    return layer_base(sizes_, slice_.offset, layer) +
           static_cast<std::uint32_t>(row * sizes_[layer] + col);
}

std::uint32_t Mlp::bias_index(int layer, int row) const {
    return layer_base(sizes_, slice_.offset, layer) +
           static_cast<std::uint32_t>(sizes_[layer] * sizes_[layer + 1] + row);
}

namespace {
thread_local std::vector<Dual> g_act_a;
thread_local std::vector<Dual> g_act_b;
thread_local std::vector<double> g_val_a;
thread_local std::vector<double> g_val_b;
}  // namespace

void Mlp::forward(Tape& tape, const ParamSet& params, Dual t, std::span<Dual> out) const {
    const std::size_t n_layers = sizes_.size();
    g_act_a.clear();
    g_act_b.clear();

    // Scaled time input.
    Dual x = in_scale_ * t + in_shift_;
    g_act_a.assign(1, x);

    std::vector<Dual>* cur = &g_act_a;
    std::vector<Dual>* nxt = &g_act_b;

    std::uint32_t p = slice_.offset;
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
        const int n_in = sizes_[l];
        const int n_out = sizes_[l + 1];
        const bool hidden = (l + 2 < n_layers);
        nxt->clear();
        const std::uint32_t bias_base = p + static_cast<std::uint32_t>(n_in * n_out);
        for (int j = 0; j < n_out; ++j) {
            Dual acc = dual_var(tape, bias_base + j, params[bias_base + j]);
            const std::uint32_t row = p + static_cast<std::uint32_t>(j * n_in);
            for (int i = 0; i < n_in; ++i) {
                Dual w = dual_var(tape, row + i, params[row + i]);
                acc = acc + w * (*cur)[static_cast<std::size_t>(i)];
            }
            nxt->push_back(hidden ? tanh(acc) : acc);
        }
        p = bias_base + static_cast<std::uint32_t>(n_out);
        std::swap(cur, nxt);
    }

    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = (*cur)[j];
        if (!std::isfinite(out[j].v.value()) || !std::isfinite(out[j].dt.value())) {
            Op op{};
            std::uint32_t idx = 0;
            tape.find_nonfinite_value(op, idx);
            throw non_finite_forward(std::string("op '") + op_name(op) + "' while evaluating net");
        }
    }
}

void Mlp::forward_plain(const ParamSet& params, double t, std::span<double> out) const {
    const std::size_t n_layers = sizes_.size();
    g_val_a.assign(1, in_scale_ * t + in_shift_);

    std::vector<double>* cur = &g_val_a;
    std::vector<double>* nxt = &g_val_b;

    std::uint32_t p = slice_.offset;
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
        const int n_in = sizes_[l];
        const int n_out = sizes_[l + 1];
        const bool hidden = (l + 2 < n_layers);
        nxt->clear();
        const std::uint32_t bias_base = p + static_cast<std::uint32_t>(n_in * n_out);
        for (int j = 0; j < n_out; ++j) {
            double acc = params[bias_base + j];
            const std::uint32_t row = p + static_cast<std::uint32_t>(j * n_in);
            for (int i = 0; i < n_in; ++i) acc += params[row + i] * (*cur)[static_cast<std::size_t>(i)];
            nxt->push_back(hidden ? std::tanh(acc) : acc);
        }
        p = bias_base + static_cast<std::uint32_t>(n_out);
        std::swap(cur, nxt);
    }

    for (std::size_t j = 0; j < out.size(); ++j) out[j] = (*cur)[j];
}

}  // namespace stiffnet
