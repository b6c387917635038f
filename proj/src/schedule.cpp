#include "gsfw/schedule.hpp"

#include <cmath>
#include <stdexcept>

#include "gsfw/error.hpp"

namespace gsfw {

double alpha_nonstrong(double n_eff, std::size_t i) {
  const double di = static_cast<double>(i);
  return 2.0 * (2.0 * n_eff + di) / ((di + 1.0) * (4.0 * n_eff + di));
}

double eta_nonstrong(double n_eff, std::size_t i) {
  const double di = static_cast<double>(i);
  return 2.0 * n_eff / (2.0 * n_eff + di + 1.0);
}

double alpha_strong(double n_eff, double sigma, std::size_t i) {
  if (!(sigma > 1.0 / n_eff)) {
    throw DomainError("alpha_strong: sigma must exceed 1/n_eff");
  }
  // 1 - (1 - x)^(i+1) without overflow or cancellation
  const double x = 1.0 / (n_eff * sigma);
  const double head = -std::expm1((static_cast<double>(i) + 1.0) * std::log1p(-x));
  return x / head;
}

double eta_strong(double sigma) { return 1.0 / sigma; }

double sigma_strong(double gamma, double max_row_norm_sq, double n, double mu) {
  if (!(gamma > 0) || !(max_row_norm_sq > 0) || !(n > 0) || !(mu > 0)) {
    throw std::invalid_argument("sigma_strong: all inputs must be positive");
  }
  return gamma * max_row_norm_sq / (n * mu) + 1.0;
}

std::size_t effective_samples(std::size_t n, std::size_t b) {
  if (b == 0) throw std::invalid_argument("batch size must be positive");
  return (n + b - 1) / b;
}

Schedule Schedule::nonstrong(double n_eff) {
  if (!(n_eff >= 1.0)) throw std::invalid_argument("n_eff must be >= 1");
  return {ScheduleMode::kNonStrong, n_eff, 0.0};
}

Schedule Schedule::strong(double n_eff, double sigma) {
  if (!(n_eff >= 1.0)) throw std::invalid_argument("n_eff must be >= 1");
  if (!(sigma > 1.0)) throw std::invalid_argument("strong schedule needs sigma > 1");
  return {ScheduleMode::kStrong, n_eff, sigma};
}

double Schedule::alpha(std::size_t i) const {
  return mode == ScheduleMode::kNonStrong ? alpha_nonstrong(n_eff, i)
                                          : alpha_strong(n_eff, sigma, i);
}

double Schedule::eta(std::size_t i) const {
  return mode == ScheduleMode::kNonStrong ? eta_nonstrong(n_eff, i) : eta_strong(sigma);
}

double Schedule::weight(std::size_t i) const {
  if (mode == ScheduleMode::kNonStrong) return 2.0 * n_eff + static_cast<double>(i);
  const double ns = n_eff * sigma;
  return std::pow(ns / (ns - 1.0), static_cast<double>(i));
}

}  // namespace gsfw
