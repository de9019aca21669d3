// Collocation residual loss
//     loss = (1/S) * sum_s ||Ydot(t_s) - f(t_s, Y(t_s))||^2 + gamma * ||Y(0) - y0||^2
//
// Two implementations of the same quantity:
//  * residual_loss records the whole sum on one tape and returns the root
//    node — the serial reference used by gradient audits and tests;
//  * LossKernel evaluates collocation points on per-thread tapes (OpenMP)
//    and reduces fixed-size chunks in index order, so the result is
//    deterministic and independent of the thread count.
#pragma once

#include <span>
#include <vector>

#include "stiffnet/collocation.hpp"
#include "stiffnet/model.hpp"
#include "stiffnet/problems.hpp"

namespace stiffnet {

struct LossParts {
    double total = 0.0;
    double residual_mean = 0.0;  // (1/S) sum_s ||r_s||^2
    double ic = 0.0;             // ||Y(0) - y0||^2, unweighted
};

// Residual term of a single collocation point: sum_i r_i(t)^2.
NodeRef point_residual(Tape& tape, const StiffModel& model, const OdeProblem& problem, double t);

// ||Y(0) - y0||^2.
NodeRef ic_penalty(Tape& tape, const StiffModel& model, const OdeProblem& problem);

// Serial reference: the full loss as one graph node.
NodeRef residual_loss(Tape& tape, const StiffModel& model, const OdeProblem& problem,
                      const CollocationGrid& grid, double gamma);

class LossKernel {
  public:
    LossKernel(const StiffModel& model, const OdeProblem& problem, const CollocationGrid& grid,
               double gamma);

    // Overwrites grad (size = model.param_count()).
    LossParts value_and_gradient(std::span<double> grad);
    LossParts value_only();

    static constexpr int kChunk = 16;

  private:
    LossParts run(std::span<double> grad, bool want_grad);

    const StiffModel& model_;
    const OdeProblem& problem_;
    const CollocationGrid& grid_;
    double gamma_;

    std::vector<Tape> tapes_;        // one per OpenMP thread
    std::vector<double> chunk_loss;  // per-chunk residual sums
    std::vector<double> chunk_grad;  // [chunks][params]
};

}  // namespace stiffnet
