// Small dense tanh networks of a single (time) input. Weights live in a
// ParamSet slice; evaluation records onto a caller-supplied tape with both
// value and d/dt tangent.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stiffnet/dual.hpp"
#include "stiffnet/param_set.hpp"

namespace stiffnet {

class Mlp {
  public:
    // Xavier-uniform weights from a deterministic stream, zero biases.
    // layer_sizes[0] must be 1 (the scaled time input).
    static Mlp init(const std::vector<int>& layer_sizes, std::uint64_t seed, ParamSet& params,
                    const std::string& name, double in_scale = 1.0, double in_shift = 0.0);

    // Dual-valued forward pass; out.size() must equal output_dim().
    void forward(Tape& tape, const ParamSet& params, Dual t, std::span<Dual> out) const;

    // Plain-double forward mirroring the recorded op order exactly, for
    // evaluation paths that need no derivatives.
    void forward_plain(const ParamSet& params, double t, std::span<double> out) const;

    int output_dim() const { return sizes_.back(); }
    const std::vector<int>& layer_sizes() const { return sizes_; }
    const ParamSlice& slice() const { return slice_; }
    double in_scale() const { return in_scale_; }
    double in_shift() const { return in_shift_; }

    static std::size_t param_count(const std::vector<int>& layer_sizes);

    // Flat offsets within the slice, for tests and hand-built fixtures.
    std::uint32_t weight_index(int layer, int row, int col) const;
    std::uint32_t bias_index(int layer, int row) const;

  private:
    std::vector<int> sizes_;
    ParamSlice slice_;
    double in_scale_ = 1.0;
    double in_shift_ = 0.0;
};

}  // namespace stiffnet
