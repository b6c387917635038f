#include <stdexcept>
#include <string>

#include "gsfw/error.hpp"
#include "gsfw/kernels.hpp"
#include "gsfw/solvers.hpp"

namespace gsfw {

RcmdSolver::RcmdSolver(Problem prob, Schedule schedule, Rng rng)
    : prob_(prob),
      schedule_(schedule),
      sampler_(prob.n(), rng),
      w_(prob.n()),
      beta_bar_(prob.p(), 0.0),
      beta_tilde_(prob.p(), 0.0),
      c_(prob.p(), 0.0) {
  const std::vector<double> zero(prob.n(), 0.0);
  grad_weights(*prob_.lf, zero, w_);
  dual_avg_ = LazyWeightedAverage(w_);
}

void RcmdSolver::step() { step_with(sampler_.draw(1)[0]); }

void RcmdSolver::step_with(std::size_t j) {
  const Dataset& ds = *prob_.ds;
  const LossFamily& lf = *prob_.lf;
  if (j >= prob_.n()) throw std::out_of_range("rcmd: sample index out of range");
  const std::size_t i = iter_;
  const double eta = schedule_.eta(i);
  const double alpha = schedule_.alpha(i);

  kernels::serial::weighted_columns(ds, w_, c_);
  loo_solve(*prob_.reg, c_, beta_tilde_);
  counters_.loo_calls += 1;

  const bool averaging = schedule_.mode == ScheduleMode::kNonStrong;
  if (averaging) dual_avg_.begin_step(schedule_.weight(i));

  double s_j;
  try {
    s_j = lf.conj_deriv(j, w_[j]);
  } catch (const DomainError& e) {
    throw InternalError(std::string("rcmd: dual iterate left the conjugate domain: ") + e.what());
  }
  const double pred = row_dot(ds, j, beta_tilde_);
  last_subgrad_ = (pred - s_j) / static_cast<double>(prob_.n());
  w_[j] = lf.deriv(j, (1.0 - eta) * s_j + eta * pred);
  if (averaging) dual_avg_.update(j, w_[j]);
  counters_.sg_calls += 1;

  for (std::size_t k = 0; k < beta_bar_.size(); ++k) {
    beta_bar_[k] = (1.0 - alpha) * beta_bar_[k] + alpha * beta_tilde_[k];
  }
  ++iter_;
}

std::vector<double> RcmdSolver::dual_point() const {
  if (schedule_.mode == ScheduleMode::kStrong) return w_;
  return dual_avg_.mean();
}

}  // namespace gsfw
