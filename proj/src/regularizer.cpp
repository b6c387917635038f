#include "gsfw/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gsfw/error.hpp"

namespace gsfw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

void check_finite(std::span<const double> c) {
  for (double v : c) {
    if (!std::isfinite(v)) throw DomainError("linear oracle: non-finite cost vector");
  }
}

}  // namespace

void validate(const Regularizer& reg) {
  std::visit(overloaded{
                 [](const L1Ball& r) {
                   if (!(r.delta > 0)) throw std::invalid_argument("l1ball: delta must be > 0");
                 },
                 [](const L2Ball& r) {
                   if (!(r.delta > 0)) throw std::invalid_argument("l2ball: delta must be > 0");
                 },
                 [](const Simplex& r) {
                   if (!(r.delta > 0)) throw std::invalid_argument("simplex: delta must be > 0");
                 },
                 [](const QuadBall& r) {
                   if (!(r.mu > 0) || !(r.rho > 0)) {
                     throw std::invalid_argument("quadball: mu and rho must be > 0");
                   }
                 },
             },
             reg);
}

std::string describe(const Regularizer& reg) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const L1Ball& r) { os << "l1ball(delta=" << r.delta << ")"; },
                 [&](const L2Ball& r) { os << "l2ball(delta=" << r.delta << ")"; },
                 [&](const Simplex& r) { os << "simplex(delta=" << r.delta << ")"; },
                 [&](const QuadBall& r) { os << "quadball(mu=" << r.mu << ",rho=" << r.rho << ")"; },
             },
             reg);
  return os.str();
}

bool contains_origin(const Regularizer& reg) {
  return !std::holds_alternative<Simplex>(reg);
}

void loo_solve(const Regularizer& reg, std::span<const double> c, std::span<double> out) {
  if (out.size() != c.size()) throw std::invalid_argument("loo_solve: output length mismatch");
  check_finite(c);
  std::fill(out.begin(), out.end(), 0.0);
  std::visit(overloaded{
                 [&](const L1Ball& r) {
                   std::size_t best = 0;
                   double best_abs = 0.0;
                   for (std::size_t k = 0; k < c.size(); ++k) {
                     if (std::abs(c[k]) > best_abs) {
                       best_abs = std::abs(c[k]);
                       best = k;
                     }
                   }
                   if (best_abs > 0.0) out[best] = c[best] > 0 ? -r.delta : r.delta;
                 },
                 [&](const L2Ball& r) {
                   const double nc = norm2(c);
                   if (nc > 0.0) {
                     for (std::size_t k = 0; k < c.size(); ++k) out[k] = -r.delta * c[k] / nc;
                   }
                 },
                 [&](const Simplex& r) {
                   std::size_t best = 0;
                   for (std::size_t k = 1; k < c.size(); ++k) {
                     if (c[k] < c[best]) best = k;
                   }
                   if (!c.empty()) out[best] = r.delta;
                 },
                 [&](const QuadBall& r) {
                   const double nc = norm2(c);
                   if (nc == 0.0) return;
                   const double scale = (nc / r.mu <= r.rho) ? -1.0 / r.mu : -r.rho / nc;
                   for (std::size_t k = 0; k < c.size(); ++k) out[k] = scale * c[k];
                 },
             },
             reg);
}

std::vector<double> loo_solve(const Regularizer& reg, std::span<const double> c) {
  std::vector<double> out(c.size());
  loo_solve(reg, c, out);
  return out;
}

double reg_value(const Regularizer& reg, std::span<const double> beta) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [&](const L1Ball& r) {
            double acc = 0.0;
            for (double b : beta) acc += std::abs(b);
            return acc <= r.delta + kFeasibilityTol ? 0.0 : inf;
          },
          [&](const L2Ball& r) { return norm2(beta) <= r.delta + kFeasibilityTol ? 0.0 : inf; },
          [&](const Simplex& r) {
            double acc = 0.0;
            for (double b : beta) {
              if (b < -kFeasibilityTol) return inf;
              acc += b;
            }
            return std::abs(acc - r.delta) <= kFeasibilityTol ? 0.0 : inf;
          },
          [&](const QuadBall& r) {
            const double nb = norm2(beta);
            return nb <= r.rho + kFeasibilityTol ? 0.5 * r.mu * nb * nb : inf;
          },
      },
      reg);
}

double conj_reg_value(const Regularizer& reg, std::span<const double> c) {
  std::vector<double> neg(c.begin(), c.end());
  for (double& v : neg) v = -v;
  const auto beta = loo_solve(reg, neg);
  double r_at = 0.0;
  if (const auto* q = std::get_if<QuadBall>(&reg)) {
    const double nb = norm2(beta);
    r_at = 0.5 * q->mu * nb * nb;
  }
  return dot(c, beta) - r_at;
}

double bound_M(const Regularizer& reg, const Dataset& ds) {
  if (ds.n() == 0) throw std::invalid_argument("bound_M: empty dataset");
  return std::visit(overloaded{
                        [&](const L1Ball& r) { return r.delta * ds.max_row_norm_inf(); },
                        [&](const L2Ball& r) { return r.delta * std::sqrt(ds.max_row_norm_sq()); },
                        [&](const Simplex& r) { return r.delta * ds.max_abs_entry(); },
                        [&](const QuadBall& r) { return r.rho * std::sqrt(ds.max_row_norm_sq()); },
                    },
                    reg);
}

double strong_modulus(const Regularizer& reg) {
  if (const auto* q = std::get_if<QuadBall>(&reg)) return q->mu;
  return 0.0;
}

}  // namespace gsfw
