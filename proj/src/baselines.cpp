#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsfw/kernels.hpp"
#include "gsfw/solvers.hpp"

namespace gsfw {

namespace {

void blend(std::vector<double>& beta, std::span<const double> target, double alpha) {
  for (std::size_t k = 0; k < beta.size(); ++k) {
    beta[k] = (1.0 - alpha) * beta[k] + alpha * target[k];
  }
}

double fw_alpha(std::size_t i) { return 2.0 / (static_cast<double>(i) + 2.0); }

std::size_t half(std::size_t n) { return std::max<std::size_t>(1, n / 2); }

}  // namespace

std::vector<double> dual_response(const Problem& prob, std::span<const double> beta) {
  std::vector<double> s(prob.n());
  kernels::parallel::predict(*prob.ds, beta, s);
  return grad_weights(*prob.lf, s);
}

void batch_gradient(const Problem& prob, std::span<const double> beta,
                    std::span<const std::size_t> batch, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (batch.empty()) return;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (std::size_t j : batch) {
    const double g = prob.lf->deriv(j, row_dot(*prob.ds, j, beta));
    axpy_row(out, *prob.ds, j, g * inv_b);
  }
}

std::size_t sfw_batch(std::size_t k, std::size_t n) {
  const std::size_t cap = half(n);
  if (k >= cap) return cap;
  return std::min(k * k, cap);
}

std::size_t svrf_batch(std::size_t k, std::size_t n) {
  return std::clamp<std::size_t>(k, 1, half(n));
}

double scgm_rho(std::size_t k) {
  return std::pow(static_cast<double>(k) + 1.0, -2.0 / 3.0);
}

// ---- deterministic Frank-Wolfe ----

FrankWolfeSolver::FrankWolfeSolver(Problem prob)
    : prob_(prob),
      beta_(prob.p(), 0.0),
      grad_(prob.p(), 0.0),
      s_(prob.n(), 0.0),
      w_(prob.n(), 0.0),
      beta_tilde_(prob.p(), 0.0) {}

void FrankWolfeSolver::step() {
  const Dataset& ds = *prob_.ds;
  kernels::serial::predict(ds, beta_, s_);
  grad_weights(*prob_.lf, s_, w_);
  kernels::serial::weighted_columns(ds, w_, grad_);
  counters_.full_grad_calls += 1;
  counters_.sg_calls += prob_.n();

  loo_solve(*prob_.reg, grad_, beta_tilde_);
  counters_.loo_calls += 1;

  double lin = 0.0;
  for (std::size_t k = 0; k < beta_.size(); ++k) lin += grad_[k] * (beta_[k] - beta_tilde_[k]);
  last_gap_ = lin + reg_value(*prob_.reg, beta_) - reg_value(*prob_.reg, beta_tilde_);

  blend(beta_, beta_tilde_, fw_alpha(iter_));
  ++iter_;
}

std::vector<double> FrankWolfeSolver::dual_point() const { return dual_response(prob_, beta_); }

// ---- stochastic Frank-Wolfe ----

SfwSolver::SfwSolver(Problem prob, Rng rng)
    : prob_(prob),
      sampler_(prob.n(), rng),
      beta_(prob.p(), 0.0),
      grad_(prob.p(), 0.0),
      beta_tilde_(prob.p(), 0.0) {}

void SfwSolver::step() {
  last_batch_ = sfw_batch(iter_ + 1, prob_.n());
  batch_gradient(prob_, beta_, sampler_.draw(last_batch_), grad_);
  counters_.sg_calls += last_batch_;
  loo_solve(*prob_.reg, grad_, beta_tilde_);
  counters_.loo_calls += 1;
  blend(beta_, beta_tilde_, fw_alpha(iter_));
  ++iter_;
}

std::vector<double> SfwSolver::dual_point() const { return dual_response(prob_, beta_); }

// ---- stochastic variance-reduced Frank-Wolfe ----

SvrfSolver::SvrfSolver(Problem prob, Rng rng)
    : prob_(prob),
      sampler_(prob.n(), rng),
      beta_(prob.p(), 0.0),
      snap_grad_(prob.p(), 0.0),
      snap_w_(prob.n(), 0.0),
      snap_s_(prob.n(), 0.0),
      est_(prob.p(), 0.0),
      beta_tilde_(prob.p(), 0.0) {}

void SvrfSolver::take_snapshot() {
  const Dataset& ds = *prob_.ds;
  kernels::serial::predict(ds, beta_, snap_s_);
  grad_weights(*prob_.lf, snap_s_, snap_w_);
  kernels::serial::weighted_columns(ds, snap_w_, snap_grad_);
  counters_.full_grad_calls += 1;
  counters_.sg_calls += prob_.n();
  const std::size_t m = svrf_batch(iter_ + 1, prob_.n());
  inner_left_ = (prob_.n() + m - 1) / m;
  ++epochs_;
}

void SvrfSolver::step() {
  if (inner_left_ == 0) take_snapshot();
  const Dataset& ds = *prob_.ds;
  last_batch_ = svrf_batch(iter_ + 1, prob_.n());
  const auto batch = sampler_.draw(last_batch_);
  std::copy(snap_grad_.begin(), snap_grad_.end(), est_.begin());
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (std::size_t j : batch) {
    const double g = prob_.lf->deriv(j, row_dot(ds, j, beta_));
    axpy_row(est_, ds, j, (g - snap_w_[j]) * inv_b);
  }
  counters_.sg_calls += batch.size();
  loo_solve(*prob_.reg, est_, beta_tilde_);
  counters_.loo_calls += 1;
  blend(beta_, beta_tilde_, fw_alpha(iter_));
  --inner_left_;
  ++iter_;
}

std::vector<double> SvrfSolver::dual_point() const { return dual_response(prob_, beta_); }

// ---- stochastic conditional gradient with momentum ----

ScgmSolver::ScgmSolver(Problem prob, std::size_t batch_size, Rng rng)
    : prob_(prob),
      batch_(batch_size),
      sampler_(prob.n(), rng),
      beta_(prob.p(), 0.0),
      d_(prob.p(), 0.0),
      grad_(prob.p(), 0.0),
      beta_tilde_(prob.p(), 0.0) {
  if (batch_ == 0 || batch_ > prob.n()) {
    throw std::invalid_argument("scgm: batch size must lie in [1, n]");
  }
}

void ScgmSolver::step() {
  batch_gradient(prob_, beta_, sampler_.draw(batch_), grad_);
  counters_.sg_calls += batch_;
  const double rho = scgm_rho(iter_);
  for (std::size_t k = 0; k < d_.size(); ++k) d_[k] = (1.0 - rho) * d_[k] + rho * grad_[k];
  loo_solve(*prob_.reg, d_, beta_tilde_);
  counters_.loo_calls += 1;
  blend(beta_, beta_tilde_, 1.0 / (static_cast<double>(iter_) + 1.0));
  ++iter_;
}

std::vector<double> ScgmSolver::dual_point() const { return dual_response(prob_, beta_); }

}  // namespace gsfw
