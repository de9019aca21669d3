// Forward tangents carried through the tape: a Dual pairs a primal node with
// the node holding its d/dt. Both live on the same tape, so reverse mode
// differentiates through time derivatives (forward-over-reverse).
//
// Tangent chains rely on the tape's constant folding: parameters carry a
// structural zero tangent, so the tangent side of parameter-only products
// costs no nodes.
#pragma once

#include <functional>
#include <utility>

#include "stiffnet/tape.hpp"

namespace stiffnet {

struct Dual {
    NodeRef v;   // primal
    NodeRef dt;  // d(primal)/dt, as a graph node
};

inline Dual dual_const(Tape& t, double c) { return {t.constant(c), t.constant(0.0)}; }

// The time input itself: tangent 1.
inline Dual dual_time(Tape& t, double time) { return {t.constant(time), t.constant(1.0)}; }

// A parameter leaf: varies with theta, constant in t.
inline Dual dual_var(Tape& t, std::uint32_t param_index, double value) {
    return {t.var(param_index, value), t.constant(0.0)};
}

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.dt + b.dt}; }
inline Dual operator-(Dual a) { return {-a.v, -a.dt}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.dt - b.dt}; }
inline Dual operator*(Dual a, Dual b) {
    return {a.v * b.v, a.dt * b.v + a.v * b.dt};
}
inline Dual operator*(double c, Dual a) { return {c * a.v, c * a.dt}; }
inline Dual operator*(Dual a, double c) { return c * a; }
inline Dual operator+(Dual a, double c) { return {a.v + c, a.dt}; }
inline Dual operator+(double c, Dual a) { return a + c; }
inline Dual operator-(Dual a, double c) { return a + (-c); }

inline Dual exp(Dual a) {
    NodeRef e = exp(a.v);
    return {e, e * a.dt};
}
inline Dual sin(Dual a) {
    return {sin(a.v), cos(a.v) * a.dt};
}
inline Dual cos(Dual a) {
    return {cos(a.v), -(sin(a.v) * a.dt)};
}
inline Dual tanh(Dual a) {
    NodeRef th = tanh(a.v);
    return {th, (1.0 - th * th) * a.dt};
}
inline Dual recip(Dual a) {
    NodeRef r = recip(a.v);
    return {r, -(r * r * a.dt)};
}

// Records f on a fresh section of the tape at time t and returns
// (f(t), df/dt). The returned Dual stays on the tape, so callers can keep
// building (and differentiating) past it.
inline Dual record_dual(Tape& tape, const std::function<Dual(Tape&, Dual)>& f, double t) {
    return f(tape, dual_time(tape, t));
}

inline std::pair<double, double> eval_dual(const std::function<Dual(Tape&, Dual)>& f, double t) {
    Tape tape;
    Dual out = record_dual(tape, f, t);
    return {out.v.value(), out.dt.value()};
}

}  // namespace stiffnet
