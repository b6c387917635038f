#ifndef GSFW_REGULARIZER_HPP_
#define GSFW_REGULARIZER_HPP_

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gsfw/dataset.hpp"

namespace gsfw {

/// Indicator of { ||beta||_1 <= delta }.
struct L1Ball {
  double delta;
};
/// Indicator of { ||beta||_2 <= delta }.
struct L2Ball {
  double delta;
};
/// Indicator of { beta >= 0, sum(beta) = delta }. Does not contain 0.
struct Simplex {
  double delta;
};
/// (mu/2) ||beta||_2^2 restricted to { ||beta||_2 <= rho }.
struct QuadBall {
  double mu;
  double rho;
};

using Regularizer = std::variant<L1Ball, L2Ball, Simplex, QuadBall>;

/// Throws std::invalid_argument for nonpositive radii or moduli.
void validate(const Regularizer& reg);

std::string describe(const Regularizer& reg);

/// Whether 0 lies in dom R (false only for Simplex).
bool contains_origin(const Regularizer& reg);

/// Feasibility tolerance on the defining norm used by reg_value.
inline constexpr double kFeasibilityTol = 1e-9;

/**
 * Exact minimizer of c^T beta + R(beta), written into `out`.
 *
 * Ties go to the lowest index; c = 0 yields the origin for the ball
 * variants and delta e_0 for the simplex. Throws DomainError on non-finite c.
 */
void loo_solve(const Regularizer& reg, std::span<const double> c, std::span<double> out);
std::vector<double> loo_solve(const Regularizer& reg, std::span<const double> c);

/// R(beta); +infinity outside dom R (up to kFeasibilityTol).
double reg_value(const Regularizer& reg, std::span<const double> beta);

/// R^*(c) = sup_beta { c^T beta - R(beta) }, closed form via loo_solve(-c).
double conj_reg_value(const Regularizer& reg, std::span<const double> c);

/// M = max over dom R of max_j |x_j^T beta|.
double bound_M(const Regularizer& reg, const Dataset& ds);

/// Strong-convexity modulus of R: mu for QuadBall, 0 otherwise.
double strong_modulus(const Regularizer& reg);

}  // namespace gsfw

#endif  // GSFW_REGULARIZER_HPP_
