#include "stiffnet/model.hpp"

#include <cassert>

#include "stiffnet/errors.hpp"
#include "stiffnet/rng.hpp"

namespace stiffnet {

namespace {

std::vector<int> net_sizes(const std::vector<int>& hidden, int out_dim) {
    std::vector<int> sizes;
    sizes.reserve(hidden.size() + 2);
    sizes.push_back(1);
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(out_dim);
    return sizes;
}

}  // namespace

StiffModel build_model(const ModelSpec& spec) {
    if (spec.n < 1) throw ConfigError("model: state dimension must be >= 1");
    if (!(spec.horizon > 0.0)) throw ConfigError("model: horizon must be > 0");

    StiffModel m;
    m.form = spec.form;
    m.n = spec.n;
    m.horizon = spec.horizon;
    m.per_component = spec.per_component;
    m.rates = build_rate_grid(spec.lambda_max, spec.K);
    m.freqs = build_freq_grid(spec.omega_max, spec.L);

    // Map t in [0, T] onto [-1, 1] for every subnet input.
    const double in_scale = 2.0 / spec.horizon;
    const double in_shift = -1.0;

    SplitMix64 seeder(spec.seed);
    auto make_net = [&](const std::string& name, int out_dim) {
        return Mlp::init(net_sizes(spec.hidden, out_dim), seeder.next(), m.params, name, in_scale,
                         in_shift);
    };

    if (spec.form == ModelForm::Compact) {
        for (int ki = 0; ki <= spec.K; ++ki) {
            const double lam = (ki == 0) ? 0.0 : m.rates.rates[static_cast<std::size_t>(ki - 1)];
            for (int li = 0; li < spec.L; ++li) {
                m.blocks.push_back({lam, m.freqs.freqs[static_cast<std::size_t>(li)]});
                const std::string base = "T_k" + std::to_string(ki) + "_l" + std::to_string(li);
                if (spec.per_component) {
                    for (int i = 0; i < spec.n; ++i)
                        m.block_nets.push_back(make_net(base + "_c" + std::to_string(i), 2));
                } else {
                    m.block_nets.push_back(make_net(base, 2 * spec.n));
                }
            }
        }
    } else {
        for (int li = 0; li < spec.L; ++li) {
            const std::string base = "W_l" + std::to_string(li);
            if (spec.per_component) {
                for (int i = 0; i < spec.n; ++i)
                    m.w_nets.push_back(make_net(base + "_c" + std::to_string(i), 2));
            } else {
                m.w_nets.push_back(make_net(base, 2 * spec.n));
            }
        }
        for (int ki = 1; ki <= spec.K; ++ki) {
            const std::string base = "V_k" + std::to_string(ki);
            if (spec.per_component) {
                for (int i = 0; i < spec.n; ++i)
                    m.v_nets.push_back(make_net(base + "_c" + std::to_string(i), 1));
            } else {
                m.v_nets.push_back(make_net(base, spec.n));
            }
        }
        for (int ki = 1; ki <= spec.K; ++ki)
            for (int li = 0; li < spec.L; ++li)
                m.u_nets.push_back(
                    make_net("U_k" + std::to_string(ki) + "_l" + std::to_string(li), 2));
    }
    return m;
}

namespace {
thread_local std::vector<Dual> g_block_out;
thread_local std::vector<Dual> g_gate_out;
thread_local std::vector<double> g_block_val;
thread_local std::vector<double> g_gate_val;
}  // namespace

void eval_compact(const StiffModel& m, Tape& tape, Dual t, std::span<Dual> out) {
    assert(out.size() == static_cast<std::size_t>(m.n));
    const int n = m.n;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = dual_const(tape, 0.0);

    const double tv = t.v.value();
    for (std::size_t b = 0; b < m.blocks.size(); ++b) {
        const BasisIndex& idx = m.blocks[b];
        if (tape.is_const(t.v) && basis_is_dead(idx, tv)) continue;  // exact-zero contribution
        auto [c, s] = basis_dual(tape, idx, t);
        if (!m.per_component) {
            g_block_out.resize(static_cast<std::size_t>(2 * n));
            m.block_nets[b].forward(tape, m.params, t, g_block_out);
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    out[static_cast<std::size_t>(i)] + c * g_block_out[static_cast<std::size_t>(i)] +
                    s * g_block_out[static_cast<std::size_t>(n + i)];
        } else {
            for (int i = 0; i < n; ++i) {
                g_block_out.resize(2);
                m.block_nets[b * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)].forward(
                    tape, m.params, t, g_block_out);
                out[static_cast<std::size_t>(i)] =
                    out[static_cast<std::size_t>(i)] + c * g_block_out[0] + s * g_block_out[1];
            }
        }
    }
}

void eval_expanded(const StiffModel& m, Tape& tape, Dual t, std::span<Dual> out) {
    assert(out.size() == static_cast<std::size_t>(m.n));
    const int n = m.n;
    const int L = m.freqs.L;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = dual_const(tape, 0.0);

    const double tv = t.v.value();
    const bool t_const = tape.is_const(t.v);

    for (int li = 0; li < L; ++li) {
        const BasisIndex idx{0.0, m.freqs.freqs[static_cast<std::size_t>(li)]};
        auto [c, s] = basis_dual(tape, idx, t);
        if (!m.per_component) {
            g_block_out.resize(static_cast<std::size_t>(2 * n));
            m.w_nets[static_cast<std::size_t>(li)].forward(tape, m.params, t, g_block_out);
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    out[static_cast<std::size_t>(i)] + c * g_block_out[static_cast<std::size_t>(i)] +
                    s * g_block_out[static_cast<std::size_t>(n + i)];
        } else {
            for (int i = 0; i < n; ++i) {
                g_block_out.resize(2);
                m.w_nets[static_cast<std::size_t>(li * n + i)].forward(tape, m.params, t,
                                                                       g_block_out);
                out[static_cast<std::size_t>(i)] =
                    out[static_cast<std::size_t>(i)] + c * g_block_out[0] + s * g_block_out[1];
            }
        }
    }

    const int K = m.rates.K;
    for (int ki = 1; ki <= K; ++ki) {
        const double lam = m.rates.rates[static_cast<std::size_t>(ki - 1)];
        if (t_const && basis_is_dead({lam, 0.0}, tv)) continue;  // whole rate row decayed away

        g_block_out.resize(static_cast<std::size_t>(n));
        std::span<Dual> v(g_block_out);
        if (!m.per_component) {
            m.v_nets[static_cast<std::size_t>(ki - 1)].forward(tape, m.params, t, v);
        } else {
            for (int i = 0; i < n; ++i)
                m.v_nets[static_cast<std::size_t>((ki - 1) * n + i)].forward(
                    tape, m.params, t, v.subspan(static_cast<std::size_t>(i), 1));
        }
        for (int li = 0; li < L; ++li) {
            const BasisIndex idx{lam, m.freqs.freqs[static_cast<std::size_t>(li)]};
            auto [c, s] = basis_dual(tape, idx, t);
            g_gate_out.resize(2);
            m.u_nets[static_cast<std::size_t>((ki - 1) * L + li)].forward(tape, m.params, t,
                                                                          g_gate_out);
            Dual gate = c * g_gate_out[0] + s * g_gate_out[1];
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    out[static_cast<std::size_t>(i)] + gate * v[static_cast<std::size_t>(i)];
        }
    }
}

void eval_model(const StiffModel& m, Tape& tape, Dual t, std::span<Dual> out) {
    if (m.form == ModelForm::Compact)
        eval_compact(m, tape, t, out);
    else
        eval_expanded(m, tape, t, out);
}

void eval_model_plain(const StiffModel& m, double t, std::span<double> out) {
    assert(out.size() == static_cast<std::size_t>(m.n));
    const int n = m.n;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = 0.0;

    if (m.form == ModelForm::Compact) {
        for (std::size_t b = 0; b < m.blocks.size(); ++b) {
            const BasisIndex& idx = m.blocks[b];
            if (basis_is_dead(idx, t)) continue;
            double c, s;
            basis_plain(idx, t, c, s);
            if (!m.per_component) {
                g_block_val.resize(static_cast<std::size_t>(2 * n));
                m.block_nets[b].forward_plain(m.params, t, g_block_val);
                for (int i = 0; i < n; ++i)
                    out[static_cast<std::size_t>(i)] =
                        out[static_cast<std::size_t>(i)] +
                        c * g_block_val[static_cast<std::size_t>(i)] +
                        s * g_block_val[static_cast<std::size_t>(n + i)];
            } else {
                for (int i = 0; i < n; ++i) {
                    g_block_val.resize(2);
                    m.block_nets[b * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)]
                        .forward_plain(m.params, t, g_block_val);
                    out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)] +
                                                       c * g_block_val[0] + s * g_block_val[1];
                }
            }
        }
        return;
    }

    const int L = m.freqs.L;
    for (int li = 0; li < L; ++li) {
        const BasisIndex idx{0.0, m.freqs.freqs[static_cast<std::size_t>(li)]};
        double c, s;
        basis_plain(idx, t, c, s);
        if (!m.per_component) {
            g_block_val.resize(static_cast<std::size_t>(2 * n));
            m.w_nets[static_cast<std::size_t>(li)].forward_plain(m.params, t, g_block_val);
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)] +
                                                   c * g_block_val[static_cast<std::size_t>(i)] +
                                                   s * g_block_val[static_cast<std::size_t>(n + i)];
        } else {
            for (int i = 0; i < n; ++i) {
                g_block_val.resize(2);
                m.w_nets[static_cast<std::size_t>(li * n + i)].forward_plain(m.params, t,
                                                                             g_block_val);
                out[static_cast<std::size_t>(i)] =
                    out[static_cast<std::size_t>(i)] + c * g_block_val[0] + s * g_block_val[1];
            }
        }
    }
    const int K = m.rates.K;
    for (int ki = 1; ki <= K; ++ki) {
        const double lam = m.rates.rates[static_cast<std::size_t>(ki - 1)];
        if (basis_is_dead({lam, 0.0}, t)) continue;

        g_block_val.resize(static_cast<std::size_t>(n));
        std::span<double> v(g_block_val);
        if (!m.per_component) {
            m.v_nets[static_cast<std::size_t>(ki - 1)].forward_plain(m.params, t, v);
        } else {
            for (int i = 0; i < n; ++i)
                m.v_nets[static_cast<std::size_t>((ki - 1) * n + i)].forward_plain(
                    m.params, t, v.subspan(static_cast<std::size_t>(i), 1));
        }
        for (int li = 0; li < L; ++li) {
            const BasisIndex idx{lam, m.freqs.freqs[static_cast<std::size_t>(li)]};
            double c, s;
            basis_plain(idx, t, c, s);
            g_gate_val.resize(2);
            m.u_nets[static_cast<std::size_t>((ki - 1) * L + li)].forward_plain(m.params, t,
                                                                                g_gate_val);
            const double gate = c * g_gate_val[0] + s * g_gate_val[1];
            for (int i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    out[static_cast<std::size_t>(i)] + gate * v[static_cast<std::size_t>(i)];
        }
    }
}

}  // namespace stiffnet
