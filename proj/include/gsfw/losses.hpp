#ifndef GSFW_LOSSES_HPP_
#define GSFW_LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "gsfw/dataset.hpp"

namespace gsfw {

/**
 * Per-sample univariate losses l_j(s) parameterized by the labels y_j.
 *
 * logistic: l_j(s) = ln(1 + exp(-y_j s)), gamma = 1/4, y_j in {-1,+1}.
 * squared:  l_j(s) = (s - y_j)^2 / 2,     gamma = 1.
 *
 * The conjugate l_j^*(w) = sup_s { w s - l_j(s) } has domain
 * 0 <= -y_j w <= 1 for logistic (with 0 ln 0 = 0) and all reals for squared.
 */
class LossFamily {
 public:
  LossFamily(LossKind kind, std::vector<double> y);
  static LossFamily for_dataset(LossKind kind, const Dataset& ds);

  LossKind kind() const { return kind_; }
  std::size_t n() const { return y_.size(); }
  std::span<const double> y() const { return y_; }
  double gamma() const { return kind_ == LossKind::kLogistic ? 0.25 : 1.0; }

  double value(std::size_t j, double s) const;
  double deriv(std::size_t j, double s) const;
  /// Throws DomainError outside dom l_j^*.
  double conj(std::size_t j, double w) const;
  /// The s with deriv(j, s) == w. Throws DomainError unless w is interior.
  double conj_deriv(std::size_t j, double w) const;

 private:
  LossKind kind_;
  std::vector<double> y_;
};

/// Componentwise derivative: (l_1'(s_1), ..., l_n'(s_n)).
std::vector<double> grad_weights(const LossFamily& lf, std::span<const double> s);
void grad_weights(const LossFamily& lf, std::span<const double> s, std::span<double> out);

/// L(s) = sum_j l_j(s_j).
double total_loss(const LossFamily& lf, std::span<const double> s);

/// L^*(w) = sum_j l_j^*(w_j); propagates DomainError.
double total_conj(const LossFamily& lf, std::span<const double> w);

}  // namespace gsfw

#endif  // GSFW_LOSSES_HPP_
