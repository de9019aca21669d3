// Reverse-mode autodiff over a flat tape of scalar operations.
//
// Nodes are appended in topological order (operands always precede results),
// so the backward sweep is a single reverse pass. Local partial derivatives
// are computed at recording time; the sweep itself is just multiply-add into
// parent adjoints. Constant subexpressions fold at recording time, which also
// implements the exact-zero contribution of fully decayed basis blocks.
#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stiffnet/errors.hpp"

namespace stiffnet {

enum class Op : std::uint8_t { Const, Var, Add, Mul, Neg, Exp, Sin, Cos, Tanh, Recip };

inline const char* op_name(Op op) {
    switch (op) {
        case Op::Const: return "const";
        case Op::Var:   return "var";
        case Op::Add:   return "add";
        case Op::Mul:   return "mul";
        case Op::Neg:   return "neg";
        case Op::Exp:   return "exp";
        case Op::Sin:   return "sin";
        case Op::Cos:   return "cos";
        case Op::Tanh:  return "tanh";
        case Op::Recip: return "recip";
    }
    return "?";
}

class Tape;

// Cheap handle into a tape; all arithmetic on NodeRef records new nodes.
struct NodeRef {
    Tape* tape = nullptr;
    std::uint32_t idx = 0;

    double value() const;
    double adjoint() const;
    bool valid() const { return tape != nullptr; }
};

class Tape {
  public:
    static constexpr std::uint32_t kNoParent = 0xFFFFFFFFu;

    struct Node {
        double value;
        double adjoint;
        double pa, pb;       // d(value)/d(parent a), d(value)/d(parent b)
        std::uint32_t a, b;  // parent indices, kNoParent when absent
        Op op;
    };

    Tape() { nodes_.reserve(1u << 12); }

    std::size_t size() const { return nodes_.size(); }

    // Drops all recorded nodes but keeps capacity; variables must be
    // re-recorded for the next forward pass.
    void clear() {
        nodes_.clear();
        vars_.clear();
    }

    NodeRef constant(double v) { return push(Op::Const, v, kNoParent, kNoParent, 0.0, 0.0); }

    // Leaf parameter; param_index identifies the slot in the owning ParamSet.
    NodeRef var(std::uint32_t param_index, double v) {
        NodeRef r = push(Op::Var, v, kNoParent, kNoParent, 0.0, 0.0);
        vars_.push_back({r.idx, param_index});
        return r;
    }

    NodeRef add(NodeRef x, NodeRef y) {
        assert(x.tape == this && y.tape == this);
        const Node& nx = nodes_[x.idx];
        const Node& ny = nodes_[y.idx];
        if (nx.op == Op::Const && ny.op == Op::Const) return constant(nx.value + ny.value);
        if (nx.op == Op::Const && nx.value == 0.0) return y;
        if (ny.op == Op::Const && ny.value == 0.0) return x;
        return push(Op::Add, nx.value + ny.value, x.idx, y.idx, 1.0, 1.0);
    }

    NodeRef mul(NodeRef x, NodeRef y) {
        assert(x.tape == this && y.tape == this);
        const Node& nx = nodes_[x.idx];
        const Node& ny = nodes_[y.idx];
        if (nx.op == Op::Const && ny.op == Op::Const) return constant(nx.value * ny.value);
        if (nx.op == Op::Const) {
            if (nx.value == 0.0) return constant(0.0);
            if (nx.value == 1.0) return y;
        }
        if (ny.op == Op::Const) {
            if (ny.value == 0.0) return constant(0.0);
            if (ny.value == 1.0) return x;
        }
        return push(Op::Mul, nx.value * ny.value, x.idx, y.idx, ny.value, nx.value);
    }

    NodeRef neg(NodeRef x) {
        const Node& nx = nodes_[x.idx];
        if (nx.op == Op::Const) return constant(-nx.value);
        return push(Op::Neg, -nx.value, x.idx, kNoParent, -1.0, 0.0);
    }

    NodeRef sub(NodeRef x, NodeRef y) { return add(x, neg(y)); }

    NodeRef exp_(NodeRef x) {
        const Node& nx = nodes_[x.idx];
        double v = std::exp(nx.value);
        if (nx.op == Op::Const) return constant(v);
        return push(Op::Exp, v, x.idx, kNoParent, v, 0.0);
    }

    NodeRef sin_(NodeRef x) {
        const Node& nx = nodes_[x.idx];
        if (nx.op == Op::Const) return constant(std::sin(nx.value));
        return push(Op::Sin, std::sin(nx.value), x.idx, kNoParent, std::cos(nx.value), 0.0);
    }

    NodeRef cos_(NodeRef x) {
        const Node& nx = nodes_[x.idx];
        if (nx.op == Op::Const) return constant(std::cos(nx.value));
        return push(Op::Cos, std::cos(nx.value), x.idx, kNoParent, -std::sin(nx.value), 0.0);
    }

    NodeRef tanh_(NodeRef x) {
        const Node& nx = nodes_[x.idx];
        double v = std::tanh(nx.value);
        if (nx.op == Op::Const) return constant(v);
        return push(Op::Tanh, v, x.idx, kNoParent, 1.0 - v * v, 0.0);
    }

    NodeRef recip(NodeRef x) {
        const Node& nx = nodes_[x.idx];
        double v = 1.0 / nx.value;
        if (nx.op == Op::Const) return constant(v);
        return push(Op::Recip, v, x.idx, kNoParent, -v * v, 0.0);
    }

    double value(NodeRef r) const { return nodes_[r.idx].value; }
    double adjoint(NodeRef r) const { return nodes_[r.idx].adjoint; }
    bool is_const(NodeRef r) const { return nodes_[r.idx].op == Op::Const; }
    bool is_zero_const(NodeRef r) const {
        const Node& n = nodes_[r.idx];
        return n.op == Op::Const && n.value == 0.0;
    }
    Op op(NodeRef r) const { return nodes_[r.idx].op; }

    // Reverse sweep from root; fills adjoints of every node at index <= root.
    void backward(NodeRef root) {
        assert(root.tape == this);
        const std::uint32_t last = root.idx;
        for (std::uint32_t i = 0; i <= last; ++i) nodes_[i].adjoint = 0.0;
        nodes_[last].adjoint = 1.0;
        for (std::uint32_t i = last + 1; i-- > 0;) {
            const Node& n = nodes_[i];
            const double adj = n.adjoint;
            if (adj == 0.0) continue;
            if (n.a != kNoParent) nodes_[n.a].adjoint += adj * n.pa;
            if (n.b != kNoParent) nodes_[n.b].adjoint += adj * n.pb;
        }
    }

    // Adds the adjoint of every recorded variable into grad[param_index].
    void accumulate_var_adjoints(std::span<double> grad, double scale = 1.0) const {
        for (const VarEntry& v : vars_) {
            assert(v.param < grad.size());
            grad[v.param] += scale * nodes_[v.node].adjoint;
        }
    }

    // Diagnostic scan used on the slow path once a non-finite result is seen.
    // Returns the op tag and index of the first offending node, if any.
    bool find_nonfinite_value(Op& op_out, std::uint32_t& idx_out) const {
        for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
            if (!std::isfinite(nodes_[i].value)) {
                op_out = nodes_[i].op;
                idx_out = i;
                return true;
            }
        }
        return false;
    }

    bool find_nonfinite_adjoint(Op& op_out, std::uint32_t& idx_out) const {
        for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
            if (!std::isfinite(nodes_[i].adjoint)) {
                op_out = nodes_[i].op;
                idx_out = i;
                return true;
            }
        }
        return false;
    }

  private:
    struct VarEntry {
        std::uint32_t node;
        std::uint32_t param;
    };

    NodeRef push(Op op, double v, std::uint32_t a, std::uint32_t b, double pa, double pb) {
        nodes_.push_back(Node{v, 0.0, pa, pb, a, b, op});
        return NodeRef{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
    }

    std::vector<Node> nodes_;
    std::vector<VarEntry> vars_;
};

inline double NodeRef::value() const { return tape->value(*this); }
inline double NodeRef::adjoint() const { return tape->adjoint(*this); }

// Operator sugar so right-hand sides read like the math they implement.
inline NodeRef operator+(NodeRef x, NodeRef y) { return x.tape->add(x, y); }
inline NodeRef operator-(NodeRef x, NodeRef y) { return x.tape->sub(x, y); }
inline NodeRef operator*(NodeRef x, NodeRef y) { return x.tape->mul(x, y); }
inline NodeRef operator-(NodeRef x) { return x.tape->neg(x); }

inline NodeRef operator+(NodeRef x, double c) { return x.tape->add(x, x.tape->constant(c)); }
inline NodeRef operator+(double c, NodeRef x) { return x + c; }
inline NodeRef operator-(NodeRef x, double c) { return x + (-c); }
inline NodeRef operator-(double c, NodeRef x) { return x.tape->add(x.tape->constant(c), x.tape->neg(x)); }
inline NodeRef operator*(NodeRef x, double c) { return x.tape->mul(x, x.tape->constant(c)); }
inline NodeRef operator*(double c, NodeRef x) { return x * c; }

inline NodeRef exp(NodeRef x) { return x.tape->exp_(x); }
inline NodeRef sin(NodeRef x) { return x.tape->sin_(x); }
inline NodeRef cos(NodeRef x) { return x.tape->cos_(x); }
inline NodeRef tanh(NodeRef x) { return x.tape->tanh_(x); }
inline NodeRef recip(NodeRef x) { return x.tape->recip(x); }

// double overloads so templated right-hand sides instantiate for both the
// graph scalar and plain doubles.
inline double recip(double x) { return 1.0 / x; }

}  // namespace stiffnet
