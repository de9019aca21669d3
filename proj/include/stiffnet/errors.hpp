// Error types shared across the library. Config errors map to CLI exit 1,
// numeric errors to exit 2, check-suite failures to exit 3.
#pragma once

#include <stdexcept>
#include <string>

namespace stiffnet {

// Bad user input: malformed config, invalid grid sizes, unknown problem name.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure at runtime: non-finite values, integrator breakdown.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline ConfigError invalid_grid(const std::string& what) {
    return ConfigError("InvalidGrid: " + what);
}
inline ConfigError invalid_architecture(const std::string& what) {
    return ConfigError("InvalidArchitecture: " + what);
}
inline ConfigError unknown_problem(const std::string& name) {
    return ConfigError("UnknownProblem: no problem named '" + name + "'");
}
inline ConfigError out_of_range(const std::string& what) {
    return ConfigError("OutOfRange: " + what);
}
inline ConfigError shape_error(const std::string& what) {
    return ConfigError("ShapeError: " + what);
}

inline NumericError non_finite_forward(const std::string& where) {
    return NumericError("NonFiniteForward: " + where);
}
inline NumericError non_finite_gradient(const std::string& where) {
    return NumericError("NonFiniteGradient: " + where);
}
inline NumericError non_finite_residual(const std::string& where) {
    return NumericError("NonFiniteResidual: " + where);
}
inline NumericError non_finite_rhs(const std::string& where) {
    return NumericError("NonFiniteRhs: " + where);
}
inline NumericError stiff_failure(const std::string& where) {
    return NumericError("StiffFailure: " + where);
}

}  // namespace stiffnet
