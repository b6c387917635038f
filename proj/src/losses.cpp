#include "gsfw/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gsfw/error.hpp"

namespace gsfw {

LossFamily::LossFamily(LossKind kind, std::vector<double> y)
    : kind_(kind), y_(std::move(y)) {
  if (kind_ == LossKind::kLogistic) {
    for (double v : y_) {
      if (v != 1.0 && v != -1.0) {
        throw std::invalid_argument("logistic loss needs labels in {-1,+1}");
      }
    }
  }
}

LossFamily LossFamily::for_dataset(LossKind kind, const Dataset& ds) {
  return LossFamily(kind, std::vector<double>(ds.y().begin(), ds.y().end()));
}

namespace {

// ln(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// a ln a with 0 ln 0 = 0.
double xlogx(double a) { return a == 0.0 ? 0.0 : a * std::log(a); }

}  // namespace

double LossFamily::value(std::size_t j, double s) const {
  const double yj = y_[j];
  if (kind_ == LossKind::kLogistic) return softplus(-yj * s);
  const double r = s - yj;
  return 0.5 * r * r;
}

double LossFamily::deriv(std::size_t j, double s) const {
  const double yj = y_[j];
  if (kind_ == LossKind::kLogistic) {
    const double m = yj * s;
    if (m >= 0.0) {
      const double e = std::exp(-m);
      return -yj * e / (1.0 + e);
    }
    return -yj / (1.0 + std::exp(m));
  }
  return s - yj;
}

double LossFamily::conj(std::size_t j, double w) const {
  const double yj = y_[j];
  if (kind_ == LossKind::kLogistic) {
    const double a = -yj * w;
    if (!(a >= 0.0 && a <= 1.0)) {
      throw DomainError("logistic conjugate: -y w = " + std::to_string(a) +
                        " outside [0, 1]");
    }
    return xlogx(a) + xlogx(1.0 - a);
  }
  return 0.5 * w * w + yj * w;
}

double LossFamily::conj_deriv(std::size_t j, double w) const {
  const double yj = y_[j];
  if (kind_ == LossKind::kLogistic) {
    const double a = -yj * w;
    if (!(a > 0.0 && a < 1.0)) {
      throw DomainError("logistic conjugate derivative: -y w = " + std::to_string(a) +
                        " not in the open interval (0, 1)");
    }
    return -yj * (std::log(a) - std::log1p(-a));
  }
  return w + yj;
}

void grad_weights(const LossFamily& lf, std::span<const double> s, std::span<double> out) {
  if (s.size() != lf.n() || out.size() != lf.n()) {
    throw std::invalid_argument("grad_weights: length must equal n");
  }
  for (std::size_t j = 0; j < s.size(); ++j) out[j] = lf.deriv(j, s[j]);
}

std::vector<double> grad_weights(const LossFamily& lf, std::span<const double> s) {
  std::vector<double> out(lf.n());
  grad_weights(lf, s, out);
  return out;
}

double total_loss(const LossFamily& lf, std::span<const double> s) {
  if (s.size() != lf.n()) throw std::invalid_argument("total_loss: length must equal n");
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) acc += lf.value(j, s[j]);
  return acc;
}

double total_conj(const LossFamily& lf, std::span<const double> w) {
  if (w.size() != lf.n()) throw std::invalid_argument("total_conj: length must equal n");
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += lf.conj(j, w[j]);
  return acc;
}

}  // namespace gsfw
