// Flat parameter storage with named slices, one slice per subnetwork.
// Indices are stable for the lifetime of the set; the optimizer and the
// snapshot format both address parameters through this layout.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "stiffnet/errors.hpp"

namespace stiffnet {

struct ParamSlice {
    std::uint32_t offset = 0;
    std::uint32_t count = 0;
};

class ParamSet {
  public:
    ParamSlice register_slice(const std::string& name, std::uint32_t count) {
        if (by_name_.count(name) != 0)
            throw ConfigError("ParamSet: duplicate slice name '" + name + "'");
        ParamSlice s{static_cast<std::uint32_t>(values_.size()), count};
        values_.resize(values_.size() + count, 0.0);
        by_name_.emplace(name, static_cast<std::uint32_t>(slices_.size()));
        slices_.push_back(s);
        names_.push_back(name);
        return s;
    }

    std::size_t size() const { return values_.size(); }

    double& operator[](std::uint32_t i) { return values_[i]; }
    double operator[](std::uint32_t i) const { return values_[i]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    const ParamSlice& slice(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw ConfigError("ParamSet: no slice named '" + name + "'");
        return slices_[it->second];
    }

    std::size_t slice_count() const { return slices_.size(); }
    const ParamSlice& slice_at(std::size_t i) const { return slices_[i]; }
    const std::string& slice_name(std::size_t i) const { return names_[i]; }

  private:
    std::vector<double> values_;
    std::vector<ParamSlice> slices_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> by_name_;
};

}  // namespace stiffnet
