#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "stiffnet/dual.hpp"
#include "stiffnet/gradient.hpp"
#include "stiffnet/mlp.hpp"
#include "stiffnet/rng.hpp"
#include "stiffnet/tape.hpp"

using namespace stiffnet;

TEST_CASE("backward: product rule") {
    ParamSet ps;
    ps.register_slice("xy", 2);
    ps[0] = 2.0;
    ps[1] = 3.0;

    Tape tape;
    NodeRef x = tape.var(0, ps[0]);
    NodeRef y = tape.var(1, ps[1]);
    std::vector<double> g = gradient(tape, x * y, ps);
    CHECK(g[0] == 3.0);
    CHECK(g[1] == 2.0);
}

TEST_CASE("backward: tanh'(0) = 1") {
    ParamSet ps;
    ps.register_slice("x", 1);
    Tape tape;
    NodeRef x = tape.var(0, 0.0);
    std::vector<double> g = gradient(tape, tanh(x), ps);
    CHECK(g[0] == 1.0);
}

TEST_CASE("backward: d/dt exp(-2t) sin(t) at 0") {
    ParamSet ps;
    ps.register_slice("t", 1);
    Tape tape;
    NodeRef t = tape.var(0, 0.0);
    NodeRef f = exp(-(2.0 * t)) * sin(t);
    std::vector<double> g = gradient(tape, f, ps);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("backward: unreachable parameters get zero gradient") {
    ParamSet ps;
    ps.register_slice("p", 3);
    Tape tape;
    NodeRef a = tape.var(0, 1.5);
    tape.var(1, 2.5);  // recorded but unused
    NodeRef root = a * a;
    std::vector<double> g = gradient(tape, root, ps);
    CHECK(g[0] == 3.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
}

TEST_CASE("linearity of the gradient") {
    // backward(a*f + b*g) == a*grad f + b*grad g
    ParamSet ps;
    ps.register_slice("p", 2);
    ps[0] = 0.7;
    ps[1] = -0.4;
    const double a = 2.5, b = -1.25;

    auto build_f = [](NodeRef x, NodeRef y) { return exp(x) * sin(y); };
    auto build_g = [](NodeRef x, NodeRef y) { return tanh(x * y); };

    Tape t1;
    std::vector<double> gf = gradient(t1, build_f(t1.var(0, ps[0]), t1.var(1, ps[1])), ps);

    Tape t2;
    std::vector<double> gg = gradient(t2, build_g(t2.var(0, ps[0]), t2.var(1, ps[1])), ps);

    Tape t3;
    NodeRef x3 = t3.var(0, ps[0]), y3 = t3.var(1, ps[1]);
    NodeRef combo = a * build_f(x3, y3) + b * build_g(x3, y3);
    std::vector<double> gc = gradient(t3, combo, ps);

    for (std::size_t i = 0; i < 2; ++i)
        CHECK(gc[i] == doctest::Approx(a * gf[i] + b * gg[i]).epsilon(1e-12));
}

TEST_CASE("determinism: identical graphs give bitwise identical gradients") {
    auto run = [] {
        ParamSet ps;
        ps.register_slice("p", 4);
        SplitMix64 r(99);
        for (std::uint32_t i = 0; i < 4; ++i) ps[i] = r.uniform(-1, 1);
        Tape tape;
        NodeRef p0 = tape.var(0, ps[0]), p1 = tape.var(1, ps[1]);
        NodeRef p2 = tape.var(2, ps[2]), p3 = tape.var(3, ps[3]);
        NodeRef root = tanh(p0 * p1 + exp(p2) * cos(p3)) * recip(1.0 + p0 * p0);
        return gradient(tape, root, ps);
    };
    std::vector<double> g1 = run(), g2 = run();
    for (std::size_t i = 0; i < 4; ++i) CHECK(g1[i] == g2[i]);
}

TEST_CASE("tape reuse: clear and re-record") {
    ParamSet ps;
    ps.register_slice("p", 1);
    ps[0] = 1.0;
    Tape tape;
    NodeRef x = tape.var(0, ps[0]);
    std::vector<double> g = gradient(tape, x * x, ps);
    CHECK(g[0] == 2.0);

    ps[0] = 3.0;
    tape.clear();
    NodeRef x2 = tape.var(0, ps[0]);
    g = gradient(tape, x2 * x2 * x2, ps);
    CHECK(g[0] == 27.0);
}

TEST_CASE("constant folding keeps values exact") {
    Tape tape;
    NodeRef z = tape.constant(0.0);
    NodeRef one = tape.constant(1.0);
    NodeRef x = tape.var(0, 2.5);

    CHECK(tape.add(z, x).idx == x.idx);         // 0 + x -> x
    CHECK(tape.mul(one, x).idx == x.idx);       // 1 * x -> x
    CHECK(tape.is_zero_const(tape.mul(z, x)));  // 0 * x -> 0
    NodeRef folded = exp(tape.constant(-2.0)) * tape.constant(4.0);
    CHECK(tape.is_const(folded));
    CHECK(folded.value() == std::exp(-2.0) * 4.0);
}

TEST_CASE("non-finite values are reported with the op tag") {
    ParamSet ps;
    ps.register_slice("p", 1);
    Tape tape;
    NodeRef x = tape.var(0, 0.0);
    NodeRef bad = recip(x);  // 1/0 -> inf
    std::vector<double> g(1, 0.0);
    tape.backward(bad);
    tape.accumulate_var_adjoints(g);
    CHECK_THROWS_AS(require_finite_gradient(tape, g), NumericError);
    try {
        require_finite_gradient(tape, g);
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("recip") != std::string::npos);
    }
}

TEST_CASE("eval_dual examples") {
    auto sq = [](Tape&, Dual t) { return t * t; };
    auto [v1, d1] = eval_dual(sq, 3.0);
    CHECK(v1 == 9.0);
    CHECK(d1 == 6.0);

    auto mixed = [](Tape&, Dual t) { return exp(-5.0 * t) * cos(2.0 * t); };
    auto [v2, d2] = eval_dual(mixed, 0.0);
    CHECK(v2 == 1.0);
    CHECK(d2 == -5.0);

    auto th = [](Tape&, Dual t) { return tanh(2.0 * t); };
    auto [v3, d3] = eval_dual(th, 0.0);
    CHECK(v3 == 0.0);
    CHECK(d3 == 2.0);
}

TEST_CASE("dual tangents survive reverse mode") {
    // d/dp of (d/dt p*t^2) = d/dp (2 p t) = 2t
    ParamSet ps;
    ps.register_slice("p", 1);
    ps[0] = 1.7;
    Tape tape;
    Dual t = dual_time(tape, 3.0);
    Dual p = dual_var(tape, 0, ps[0]);
    Dual f = p * t * t;
    std::vector<double> g = gradient(tape, f.dt, ps);
    CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("dual consistency: random compositions vs finite differences in t") {
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        SplitMix64 r(500 + static_cast<std::uint64_t>(trial));
        const double a = r.uniform(-2, 2), b = r.uniform(-3, 3), c = r.uniform(-1, 1);
        const int kind = static_cast<int>(r.next() % 5);
        auto f = [&](Tape&, Dual t) -> Dual {
            switch (kind) {
                case 0: return exp(a * t) * sin(b * t) + c * t * t;
                case 1: return tanh(a * t + b * t * t) * cos(c * t);
                case 2: return recip(2.0 + t * t) * exp(b * t);
                case 3: return (a * t + 1.0) * (b * t * t - t) * cos(c * t);
                default: return sin(a * t) * sin(a * t) + cos(b * t) * tanh(c * t);
            }
        };
        const double t0 = r.uniform(-0.9, 0.9);
        auto [v, dv] = eval_dual(f, t0);
        auto [vp, dp_] = eval_dual(f, t0 + h);
        auto [vm, dm_] = eval_dual(f, t0 - h);
        const double fd = (vp - vm) / (2.0 * h);
        worst = std::max(worst, std::abs(dv - fd) / std::max({std::abs(dv), std::abs(fd), 1e-8}));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("finite_diff_check: quadratic") {
    ParamSet ps;
    ps.register_slice("p", 6);
    SplitMix64 r(321);
    for (std::uint32_t i = 0; i < 6; ++i) ps[i] = r.uniform(-2, 2);

    GraphFn f = [](Tape& tape, const ParamSet& params) {
        NodeRef acc = tape.constant(0.0);
        for (std::uint32_t i = 0; i < params.size(); ++i) {
            NodeRef p = tape.var(i, params[i]);
            acc = acc + p * p;
        }
        return acc;
    };
    CHECK(finite_diff_check(f, ps, 1e-6) < 1e-7);
}

TEST_CASE("finite_diff_check: one-hidden-layer tanh net loss") {
    ParamSet ps;
    Mlp net = Mlp::init({1, 6, 1}, 7, ps, "net");

    // Asymmetric grid and a non-odd target: with fresh zero biases a
    // symmetric fixture would have exactly-zero bias gradients, which a
    // finite difference can only see as roundoff.
    GraphFn f = [&](Tape& tape, const ParamSet& params) {
        NodeRef acc = tape.constant(0.0);
        for (int j = 0; j < 8; ++j) {
            const double x = -0.95 + 1.8 * j / 7.0;
            Dual out[1];
            net.forward(tape, params, dual_time(tape, x), out);
            NodeRef r = out[0].v - (std::sin(2.0 * x) + 0.3 + 0.4 * x * x);
            acc = acc + r * r;
        }
        return acc;
    };
    CHECK(finite_diff_check(f, ps, 1e-6) < 1e-5);
}

TEST_CASE("finite_diff_check: constant function") {
    ParamSet ps;
    ps.register_slice("p", 3);
    GraphFn f = [](Tape& tape, const ParamSet&) { return tape.constant(4.25); };
    CHECK(finite_diff_check(f, ps, 1e-6) < 1e-8);
}
