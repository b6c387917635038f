#include "gsfw/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "gsfw/kernels.hpp"
#include "gsfw/metrics.hpp"

namespace gsfw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

// Euclidean projection onto {b >= 0, sum b = z}.
std::vector<double> project_simplex(std::span<const double> v, double z) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - z) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::max(v[k] - theta, 0.0);
  return out;
}

std::vector<double> project_l1(std::span<const double> v, double delta) {
  double l1 = 0.0;
  for (double x : v) l1 += std::abs(x);
  if (l1 <= delta) return {v.begin(), v.end()};
  std::vector<double> a(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) a[k] = std::abs(v[k]);
  auto out = project_simplex(a, delta);
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::copysign(out[k], v[k]);
  return out;
}

std::vector<double> scale_into_ball(std::span<const double> v, double radius) {
  std::vector<double> out(v.begin(), v.end());
  const double nv = norm2(v);
  if (nv > radius) {
    for (double& x : out) x *= radius / nv;
  }
  return out;
}

double smooth_part(const Problem& prob, std::span<const double> beta, std::vector<double>& s) {
  kernels::parallel::predict(*prob.ds, beta, s);
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) acc += prob.lf->value(j, s[j]);
  return acc / static_cast<double>(prob.n());
}

double quad_part(const Regularizer& reg, std::span<const double> beta) {
  if (const auto* q = std::get_if<QuadBall>(&reg)) {
    const double nb = norm2(beta);
    return 0.5 * q->mu * nb * nb;
  }
  return 0.0;
}

}  // namespace

std::vector<double> prox(const Regularizer& reg, std::span<const double> v, double step) {
  return std::visit(overloaded{
                        [&](const L1Ball& r) { return project_l1(v, r.delta); },
                        [&](const L2Ball& r) { return scale_into_ball(v, r.delta); },
                        [&](const Simplex& r) { return project_simplex(v, r.delta); },
                        [&](const QuadBall& r) {
                          std::vector<double> shrunk(v.begin(), v.end());
                          for (double& x : shrunk) x /= 1.0 + r.mu * step;
                          return scale_into_ball(shrunk, r.rho);
                        },
                    },
                    reg);
}

ReferenceResult reference_optimum(const Problem& prob, double gap_tol, std::size_t max_iters) {
  const std::size_t p = prob.p();
  const Regularizer& reg = *prob.reg;
  std::vector<double> s(prob.n()), w(prob.n()), grad(p), y(p), cand(p);

  std::vector<double> x = prox(reg, std::vector<double>(p, 0.0), 1.0);
  std::vector<double> x_prev = x;
  double fx = smooth_part(prob, x, s);
  double t = 1.0;
  double L = 1.0;

  ReferenceResult best;
  auto certify = [&](const std::vector<double>& beta) {
    const auto wr = dual_response(prob, beta);
    const GapReport rep = duality_gap(prob, beta, wr);
    if (best.beta.empty() || rep.gap < best.gap) {
      best.beta = beta;
      best.primal = rep.primal;
      best.gap = rep.gap;
    }
  };
  certify(x);

  for (std::size_t it = 1; it <= max_iters; ++it) {
    const double mom = (t - 1.0) / (0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)));
    for (std::size_t k = 0; k < p; ++k) y[k] = x[k] + mom * (x[k] - x_prev[k]);

    const double fy = smooth_part(prob, y, s);
    grad_weights(*prob.lf, s, w);
    kernels::parallel::weighted_columns(*prob.ds, w, grad);

    double fc = 0.0;
    for (;;) {
      std::vector<double> v(p);
      for (std::size_t k = 0; k < p; ++k) v[k] = y[k] - grad[k] / L;
      cand = prox(reg, v, 1.0 / L);
      fc = smooth_part(prob, cand, s);
      double lin = 0.0, sq = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        const double dk = cand[k] - y[k];
        lin += grad[k] * dk;
        sq += dk * dk;
      }
      if (fc <= fy + lin + 0.5 * L * sq + 1e-15 * std::abs(fy)) break;
      L *= 2.0;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (mom > 0.0 && fc + quad_part(reg, cand) > fx + quad_part(reg, x)) {
      // Objective went up: drop momentum and retry from x.
      t = 1.0;
      x_prev = x;
      continue;
    }
    x_prev = x;
    x = cand;
    fx = fc;
    t = t_next;
    L = std::max(L * 0.9, 1e-12);

    if (it % 25 == 0 || it == max_iters) {
      certify(x);
      best.iters = it;
      if (best.gap <= gap_tol) break;
    }
  }
  return best;
}

}  // namespace gsfw
