#include "gsfw/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gsfw/error.hpp"
#include "gsfw/kernels.hpp"

namespace gsfw {

namespace {

std::vector<double> loss_terms(const Problem& prob, std::span<const double> s) {
  std::vector<double> terms(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) terms[j] = prob.lf->value(j, s[j]);
  return terms;
}

}  // namespace

double primal_value(const Problem& prob, std::span<const double> beta) {
  if (beta.size() != prob.p()) throw std::invalid_argument("primal_value: length must equal p");
  const double r = reg_value(*prob.reg, beta);
  if (std::isinf(r)) return std::numeric_limits<double>::infinity();
  std::vector<double> s(prob.n());
  kernels::parallel::predict(*prob.ds, beta, s);
  const double loss = kernels::parallel::blocked_sum(loss_terms(prob, s));
  return loss / static_cast<double>(prob.n()) + r;
}

double dual_value(const Problem& prob, std::span<const double> w, CallCounters* diag) {
  if (w.size() != prob.n()) throw std::invalid_argument("dual_value: length must equal n");
  std::vector<double> conj(prob.n());
  for (std::size_t j = 0; j < w.size(); ++j) conj[j] = prob.lf->conj(j, w[j]);
  const double conj_sum = kernels::parallel::blocked_sum(conj);

  std::vector<double> c(prob.p());
  kernels::parallel::weighted_columns(*prob.ds, w, c);
  for (double& v : c) v = -v;
  const double r_star = conj_reg_value(*prob.reg, c);
  if (diag != nullptr) diag->diag_loo_calls += 1;
  return -r_star - conj_sum / static_cast<double>(prob.n());
}

GapReport duality_gap(const Problem& prob, std::span<const double> beta,
                      std::span<const double> w, CallCounters* diag) {
  GapReport rep;
  rep.primal = primal_value(prob, beta);
  rep.dual = dual_value(prob, w, diag);
  rep.gap = rep.primal - rep.dual;
  return rep;
}

double dmax_bound(double gamma, double M) { return gamma * M * M; }

double dmax_logistic() { return std::numbers::ln2; }

double bregman_distance(const LossFamily& lf, std::span<const double> w,
                        std::span<const double> w0) {
  if (w.size() != lf.n() || w0.size() != lf.n()) {
    throw std::invalid_argument("bregman_distance: length must equal n");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    acc += lf.conj(j, w[j]) - lf.conj(j, w0[j]) - lf.conj_deriv(j, w0[j]) * (w[j] - w0[j]);
  }
  return acc / static_cast<double>(lf.n());
}

double bound_thm1(double n_eff, double gamma, double M, double Dmax, std::size_t k) {
  const double dk = static_cast<double>(k);
  const double denom = 4.0 * n_eff + dk;
  return 8.0 * n_eff * gamma * M * M / denom +
         2.0 * n_eff * (2.0 * n_eff - 1.0) * Dmax / (denom * (dk + 1.0));
}

double bound_thm2(double n_eff, double sigma, double Dmax, std::size_t k) {
  const double ns = n_eff * sigma;
  if (k == 0) throw DomainError("bound_thm2: undefined at k = 0");
  if (!(ns > 1.0)) throw DomainError("bound_thm2: needs n sigma > 1");
  // (1 + 1/(ns-1))^k - 1 via expm1/log1p keeps precision for large ns.
  const double growth = std::expm1(static_cast<double>(k) * std::log1p(1.0 / (ns - 1.0)));
  return Dmax / growth;
}

double bound_thm2_relaxed(double n_eff, double sigma, double Dmax, std::size_t k) {
  const double ns = n_eff * sigma;
  return ns * std::pow(1.0 - 1.0 / ns, static_cast<double>(k)) * Dmax;
}

double bound_corollary(double n, double gamma, double max_row_norm_sq, double mu,
                       double Dmax, std::size_t k) {
  const double q = gamma * max_row_norm_sq / mu + n;
  return Dmax * q * std::pow(1.0 - 1.0 / q, static_cast<double>(k));
}

}  // namespace gsfw
