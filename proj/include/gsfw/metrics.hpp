#ifndef GSFW_METRICS_HPP_
#define GSFW_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>

#include "gsfw/solvers.hpp"

namespace gsfw {

struct GapReport {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::optional<double> bound;
  std::size_t k = 0;
};

/// P(beta) = (1/n) sum_j l_j(x_j^T beta) + R(beta); +inf when infeasible.
double primal_value(const Problem& prob, std::span<const double> beta);

/// D(w) = -R^*(-(1/n) X^T w) - (1/n) sum_j l_j^*(w_j). Costs one oracle call,
/// added to `diag->diag_loo_calls` when given. Throws DomainError outside dom L^*.
double dual_value(const Problem& prob, std::span<const double> w,
                  CallCounters* diag = nullptr);

GapReport duality_gap(const Problem& prob, std::span<const double> beta,
                      std::span<const double> w, CallCounters* diag = nullptr);

double dmax_bound(double gamma, double M);
double dmax_logistic();

/// D_h(w, w0) for h(w) = (1/n) sum_j l_j^*(w_j).
double bregman_distance(const LossFamily& lf, std::span<const double> w,
                        std::span<const double> w0);

/// 8 n gamma M^2 / (4n+k) + 2n(2n-1) Dmax / ((4n+k)(k+1)).
double bound_thm1(double n_eff, double gamma, double M, double Dmax, std::size_t k);

/// Dmax / ((1 + 1/(n sigma - 1))^k - 1); DomainError at k = 0 or n sigma <= 1.
double bound_thm2(double n_eff, double sigma, double Dmax, std::size_t k);

/// n sigma (1 - 1/(n sigma))^k Dmax, an upper bound on bound_thm2.
double bound_thm2_relaxed(double n_eff, double sigma, double Dmax, std::size_t k);

/// Dmax (gamma max||x||^2/mu + n)(1 - 1/(n + gamma max||x||^2/mu))^k.
double bound_corollary(double n, double gamma, double max_row_norm_sq, double mu,
                       double Dmax, std::size_t k);

}  // namespace gsfw

#endif  // GSFW_METRICS_HPP_
