#include "stiffnet/loss.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stiffnet/errors.hpp"
#include "stiffnet/gradient.hpp"

namespace stiffnet {

namespace {

thread_local std::vector<Dual> g_y;
thread_local std::vector<NodeRef> g_yv;
thread_local std::vector<NodeRef> g_f;

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int thread_id() {
#ifdef _OPENMP
    return omp_get_thread_num();
#else
    return 0;
#endif
}

}  // namespace

NodeRef point_residual(Tape& tape, const StiffModel& model, const OdeProblem& problem, double t) {
    const int n = model.n;
    g_y.resize(static_cast<std::size_t>(n));
    g_yv.resize(static_cast<std::size_t>(n));
    g_f.resize(static_cast<std::size_t>(n));

    Dual td = dual_time(tape, t);
    eval_model(model, tape, td, g_y);
    for (int i = 0; i < n; ++i) g_yv[static_cast<std::size_t>(i)] = g_y[static_cast<std::size_t>(i)].v;

    problem.rhs_graph(tape, t, g_yv, g_f);
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(g_f[static_cast<std::size_t>(i)].value()))
            throw non_finite_residual("f not finite at t_s=" + std::to_string(t));

    NodeRef acc = tape.constant(0.0);
    for (int i = 0; i < n; ++i) {
        NodeRef r = g_y[static_cast<std::size_t>(i)].dt - g_f[static_cast<std::size_t>(i)];
        acc = acc + r * r;
    }
    return acc;
}

NodeRef ic_penalty(Tape& tape, const StiffModel& model, const OdeProblem& problem) {
    const int n = model.n;
    g_y.resize(static_cast<std::size_t>(n));
    Dual t0 = dual_time(tape, 0.0);
    eval_model(model, tape, t0, g_y);
    NodeRef acc = tape.constant(0.0);
    for (int i = 0; i < n; ++i) {
        NodeRef d = g_y[static_cast<std::size_t>(i)].v - problem.y0[static_cast<std::size_t>(i)];
        acc = acc + d * d;
    }
    return acc;
}

NodeRef residual_loss(Tape& tape, const StiffModel& model, const OdeProblem& problem,
                      const CollocationGrid& grid, double gamma) {
    if (model.n != problem.n) throw shape_error("model/problem dimension mismatch");
    NodeRef sum = tape.constant(0.0);
    for (double t : grid.points) sum = sum + point_residual(tape, model, problem, t);
    NodeRef mean = (1.0 / grid.count()) * sum;
    return mean + gamma * ic_penalty(tape, model, problem);
}

LossKernel::LossKernel(const StiffModel& model, const OdeProblem& problem,
                       const CollocationGrid& grid, double gamma)
    : model_(model), problem_(problem), grid_(grid), gamma_(gamma) {
    if (model.n != problem.n) throw shape_error("model/problem dimension mismatch");
    tapes_.resize(static_cast<std::size_t>(max_threads()));
}

LossParts LossKernel::value_and_gradient(std::span<double> grad) { return run(grad, true); }

LossParts LossKernel::value_only() { return run({}, false); }

LossParts LossKernel::run(std::span<double> grad, bool want_grad) {
    const std::size_t P = model_.param_count();
    const int S = grid_.count();
    const int chunks = (S + kChunk - 1) / kChunk;

    if (want_grad && grad.size() != P) throw shape_error("gradient span has wrong length");

    chunk_loss.assign(static_cast<std::size_t>(chunks), 0.0);
    if (want_grad) chunk_grad.assign(static_cast<std::size_t>(chunks) * P, 0.0);

    std::exception_ptr error;

#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < chunks; ++c) {
        try {
            Tape& tape = tapes_[static_cast<std::size_t>(thread_id())];
            std::span<double> cg;
            if (want_grad)
                cg = std::span<double>(chunk_grad).subspan(static_cast<std::size_t>(c) * P, P);
            const int lo = c * kChunk;
            const int hi = std::min(S, lo + kChunk);
            for (int s = lo; s < hi; ++s) {
                tape.clear();
                NodeRef root = point_residual(tape, model_, problem_, grid_.points[static_cast<std::size_t>(s)]);
                chunk_loss[static_cast<std::size_t>(c)] += root.value();
                if (want_grad) {
                    tape.backward(root);
                    tape.accumulate_var_adjoints(cg);
                }
            }
        } catch (...) {
#pragma omp critical(stiffnet_loss_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    LossParts parts;
    double res_sum = 0.0;
    for (int c = 0; c < chunks; ++c) res_sum += chunk_loss[static_cast<std::size_t>(c)];
    parts.residual_mean = res_sum / S;

    if (want_grad) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (int c = 0; c < chunks; ++c) {
            const double* cg = chunk_grad.data() + static_cast<std::size_t>(c) * P;
            for (std::size_t p = 0; p < P; ++p) grad[p] += cg[p];
        }
        const double inv_s = 1.0 / S;
        for (std::size_t p = 0; p < P; ++p) grad[p] *= inv_s;
    }

    // Initial-condition term, on the main thread.
    Tape& tape = tapes_[0];
    tape.clear();
    NodeRef ic = ic_penalty(tape, model_, problem_);
    parts.ic = ic.value();
    if (want_grad && gamma_ != 0.0) {
        tape.backward(ic);
        tape.accumulate_var_adjoints(grad, gamma_);
    }

    parts.total = parts.residual_mean + gamma_ * parts.ic;

    if (!std::isfinite(parts.total)) {
        Op op{};
        std::uint32_t idx = 0;
        if (tape.find_nonfinite_value(op, idx))
            throw non_finite_residual(std::string("op '") + op_name(op) + "'");
        throw non_finite_residual("loss not finite");
    }
    if (want_grad) require_finite_gradient(tape, grad);
    return parts;
}

}  // namespace stiffnet
