#ifndef GSFW_SCHEDULE_HPP_
#define GSFW_SCHEDULE_HPP_

#include <cstddef>

namespace gsfw {

enum class ScheduleMode { kNonStrong, kStrong };

/**
 * Step-size schedule for the generalized stochastic Frank-Wolfe iteration.
 *
 * Non-strong: alpha_i = 2(2n+i) / ((i+1)(4n+i)), eta_i = 2n / (2n+i+1),
 * averaging weights gamma_i = 2n + i.
 * Strong:     eta_i = 1/sigma,
 *             alpha_i = (1/(n sigma)) / (1 - ((sigma - 1/n)/sigma)^(i+1)),
 * averaging weights gamma_i = (n sigma / (n sigma - 1))^i.
 *
 * n is the effective sample count n_eff = ceil(n / b) under mini-batching.
 */
struct Schedule {
  ScheduleMode mode = ScheduleMode::kNonStrong;
  double n_eff = 1.0;
  double sigma = 0.0;

  static Schedule nonstrong(double n_eff);
  static Schedule strong(double n_eff, double sigma);

  double alpha(std::size_t i) const;
  double eta(std::size_t i) const;
  /// Unnormalized averaging weight gamma_i matching alpha.
  double weight(std::size_t i) const;
};

double alpha_nonstrong(double n_eff, std::size_t i);
double eta_nonstrong(double n_eff, std::size_t i);
double alpha_strong(double n_eff, double sigma, std::size_t i);
double eta_strong(double sigma);

/// Coordinate-wise relative smoothness of the dual: gamma max||x_j||^2/(n mu) + 1.
double sigma_strong(double gamma, double max_row_norm_sq, double n, double mu);

/// ceil(n / b).
std::size_t effective_samples(std::size_t n, std::size_t b);

}  // namespace gsfw

#endif  // GSFW_SCHEDULE_HPP_
