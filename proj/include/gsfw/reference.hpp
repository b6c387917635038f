#ifndef GSFW_REFERENCE_HPP_
#define GSFW_REFERENCE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "gsfw/solvers.hpp"

namespace gsfw {

/// argmin_beta { step R(beta) + ||beta - v||^2 / 2 } for each regularizer.
std::vector<double> prox(const Regularizer& reg, std::span<const double> v, double step);

struct ReferenceResult {
  std::vector<double> beta;
  double primal = 0.0;
  /// P(beta) - D(grad L(X beta)), an upper bound on P(beta) - P*.
  double gap = 0.0;
  std::size_t iters = 0;
};

/// High-accuracy minimizer of P by accelerated proximal gradient with
/// backtracking and adaptive restart, stopped once the certified gap is below
/// `gap_tol` or after `max_iters` iterations.
ReferenceResult reference_optimum(const Problem& prob, double gap_tol = 1e-11,
                                  std::size_t max_iters = 200000);

}  // namespace gsfw

#endif  // GSFW_REFERENCE_HPP_
