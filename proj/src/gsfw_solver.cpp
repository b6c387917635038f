#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsfw/error.hpp"
#include "gsfw/kernels.hpp"
#include "gsfw/solvers.hpp"

namespace gsfw {

GsfwSolver::GsfwSolver(Problem prob, Schedule schedule, std::size_t batch_size, Rng rng)
    : prob_(prob),
      schedule_(schedule),
      batch_(batch_size),
      sampler_(prob.n(), rng),
      beta_bar_(prob.p(), 0.0),
      s_(prob.n(), 0.0),
      d_(prob.p(), 0.0),
      w_(prob.n(), 0.0),
      beta_tilde_(prob.p(), 0.0) {
  if (batch_ == 0 || batch_ > prob.n()) {
    throw std::invalid_argument("gsfw: batch size must lie in [1, n]");
  }
  grad_weights(*prob_.lf, s_, w_);
  kernels::serial::weighted_columns(*prob_.ds, w_, d_);
  dual_avg_ = LazyWeightedAverage(w_);
  counters_.sg_calls += prob.n();
  counters_.full_grad_calls += 1;
}

void GsfwSolver::step() { step_with(sampler_.draw(batch_)); }

void GsfwSolver::step_with(std::span<const std::size_t> batch) {
  const Dataset& ds = *prob_.ds;
  const LossFamily& lf = *prob_.lf;
  const std::size_t i = iter_;
  const double eta = schedule_.eta(i);
  const double alpha = schedule_.alpha(i);
  const double inv_n = 1.0 / static_cast<double>(prob_.n());

  loo_solve(*prob_.reg, d_, beta_tilde_);
  counters_.loo_calls += 1;

  const bool averaging = schedule_.mode == ScheduleMode::kNonStrong;
  if (averaging) dual_avg_.begin_step(schedule_.weight(i));

  for (std::size_t j : batch) {
    const double s_new = (1.0 - eta) * s_[j] + eta * row_dot(ds, j, beta_tilde_);
    const double w_new = lf.deriv(j, s_new);
    axpy_row(d_, ds, j, inv_n * (w_new - w_[j]));
    s_[j] = s_new;
    w_[j] = w_new;
    if (averaging) dual_avg_.update(j, w_new);
  }
  counters_.sg_calls += batch.size();

  for (std::size_t k = 0; k < beta_bar_.size(); ++k) {
    beta_bar_[k] = (1.0 - alpha) * beta_bar_[k] + alpha * beta_tilde_[k];
  }
  ++iter_;

#ifndef NDEBUG
  double dmax = 0.0;
  for (double v : d_) dmax = std::max(dmax, std::abs(v));
  if (substitute_gradient_residual() > 1e-9 * (1.0 + dmax)) {
    throw InternalError("gsfw: substitute gradient drifted from (1/n) X^T grad L(s)");
  }
#endif
}

std::vector<double> GsfwSolver::dual_point() const {
  if (schedule_.mode == ScheduleMode::kStrong) return w_;
  return dual_avg_.mean();
}

double GsfwSolver::substitute_gradient_residual() const {
  const auto w = grad_weights(*prob_.lf, s_);
  std::vector<double> fresh(prob_.p());
  kernels::serial::weighted_columns(*prob_.ds, w, fresh);
  double worst = 0.0;
  for (std::size_t k = 0; k < fresh.size(); ++k) {
    worst = std::max(worst, std::abs(fresh[k] - d_[k]));
  }
  return worst;
}

}  // namespace gsfw
