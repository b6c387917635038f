#ifndef GSFW_SOLVERS_HPP_
#define GSFW_SOLVERS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "gsfw/averaging.hpp"
#include "gsfw/dataset.hpp"
#include "gsfw/losses.hpp"
#include "gsfw/regularizer.hpp"
#include "gsfw/rng.hpp"
#include "gsfw/schedule.hpp"

namespace gsfw {

/// Work counters; all monotone non-decreasing.
struct CallCounters {
  /// Per-sample loss-derivative evaluations (one per sample per batch).
  std::uint64_t sg_calls = 0;
  /// Linear-optimization-oracle calls made by the algorithm itself.
  std::uint64_t loo_calls = 0;
  /// Full passes computing an exact gradient.
  std::uint64_t full_grad_calls = 0;
  /// Oracle calls spent on dual-value diagnostics; never part of loo_calls.
  std::uint64_t diag_loo_calls = 0;
};

/// Non-owning view of one problem instance. The referents must outlive it.
struct Problem {
  const Dataset* ds;
  const LossFamily* lf;
  const Regularizer* reg;

  Problem(const Dataset& d, const LossFamily& l, const Regularizer& r)
      : ds(&d), lf(&l), reg(&r) {}
  std::size_t n() const { return ds->n(); }
  std::size_t p() const { return ds->p(); }
};

/// Common driver surface used by `run`.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::string_view name() const = 0;
  virtual void step() = 0;
  /// Completed iterations (= oracle solves performed by the algorithm).
  virtual std::size_t iter() const = 0;
  virtual const CallCounters& counters() const = 0;
  virtual CallCounters& mutable_counters() = 0;
  /// Primal iterate reported at the current checkpoint.
  virtual std::vector<double> primal_point() const = 0;
  /// Dual iterate paired with primal_point() in the reported gap.
  virtual std::vector<double> dual_point() const = 0;
};

/**
 * Generalized stochastic Frank-Wolfe with a stochastic substitute gradient.
 *
 * State is the quadruple (beta_bar, s, d, w): running primal average,
 * predicted values, substitute gradient d = (1/n) X^T grad L(s), and dual
 * weights w = grad L(s). One step solves the oracle at d, moves the predicted
 * values of a batch B towards x_j^T beta_tilde with weight eta_i, patches d
 * in O(sum_{j in B} nnz(x_j)) and blends beta_bar with alpha_i.
 *
 * The dual average w_bar uses the schedule's weights gamma_i; in strong mode
 * the reported dual point is the current w instead.
 */
class GsfwSolver final : public Solver {
 public:
  GsfwSolver(Problem prob, Schedule schedule, std::size_t batch_size, Rng rng);

  std::string_view name() const override { return "gsfw"; }
  void step() override;
  /// One step with an explicit batch of distinct sample indices.
  void step_with(std::span<const std::size_t> batch);

  std::size_t iter() const override { return iter_; }
  const CallCounters& counters() const override { return counters_; }
  CallCounters& mutable_counters() override { return counters_; }
  std::vector<double> primal_point() const override { return beta_bar_; }
  std::vector<double> dual_point() const override;

  std::span<const double> beta_bar() const { return beta_bar_; }
  std::span<const double> predicted() const { return s_; }
  std::span<const double> substitute_gradient() const { return d_; }
  std::span<const double> dual_weights() const { return w_; }
  /// Oracle solution of the most recent step.
  std::span<const double> last_oracle() const { return beta_tilde_; }
  std::vector<double> averaged_dual() const { return dual_avg_.mean(); }
  const Schedule& schedule() const { return schedule_; }
  std::size_t batch_size() const { return batch_; }

  /// || d - (1/n) X^T grad L(s) ||_inf, recomputed from scratch.
  double substitute_gradient_residual() const;

 private:
  Problem prob_;
  Schedule schedule_;
  std::size_t batch_;
  BatchSampler sampler_;
  std::vector<double> beta_bar_, s_, d_, w_, beta_tilde_;
  LazyWeightedAverage dual_avg_;
  std::size_t iter_ = 0;
  CallCounters counters_;
};

/**
 * Randomized coordinate mirror descent on the dual with prox function
 * h(w) = (1/n) sum_j l_j^*(w_j), started at its minimizer w^0 = grad L(0).
 *
 * Each step recomputes (1/n) X^T w from scratch, solves the oracle, and
 * applies the closed-form coordinate update
 * w_j <- l_j'((1 - eta_i) l_j^*'(w_j) + eta_i x_j^T beta_tilde).
 */
class RcmdSolver final : public Solver {
 public:
  RcmdSolver(Problem prob, Schedule schedule, Rng rng);

  std::string_view name() const override { return "rcmd"; }
  void step() override;
  void step_with(std::size_t j);

  std::size_t iter() const override { return iter_; }
  const CallCounters& counters() const override { return counters_; }
  CallCounters& mutable_counters() override { return counters_; }
  std::vector<double> primal_point() const override { return beta_bar_; }
  std::vector<double> dual_point() const override;

  std::span<const double> dual_weights() const { return w_; }
  std::span<const double> beta_bar() const { return beta_bar_; }
  std::span<const double> last_oracle() const { return beta_tilde_; }
  /// (1/n)(x_j^T beta_tilde - l_j^*'(w_j)) of the most recent step.
  double last_subgradient_coordinate() const { return last_subgrad_; }
  std::vector<double> averaged_dual() const { return dual_avg_.mean(); }

 private:
  Problem prob_;
  Schedule schedule_;
  BatchSampler sampler_;
  std::vector<double> w_, beta_bar_, beta_tilde_, c_;
  LazyWeightedAverage dual_avg_;
  double last_subgrad_ = 0.0;
  std::size_t iter_ = 0;
  CallCounters counters_;
};

/// Deterministic Frank-Wolfe with alpha_i = 2/(i+2) from beta^0 = 0.
class FrankWolfeSolver final : public Solver {
 public:
  explicit FrankWolfeSolver(Problem prob);

  std::string_view name() const override { return "fw"; }
  void step() override;
  std::size_t iter() const override { return iter_; }
  const CallCounters& counters() const override { return counters_; }
  CallCounters& mutable_counters() override { return counters_; }
  std::vector<double> primal_point() const override { return beta_; }
  std::vector<double> dual_point() const override;

  /// Exact gradient used by the most recent step.
  std::span<const double> last_gradient() const { return grad_; }
  /// grad^T (beta - beta_tilde) + R(beta) - R(beta_tilde) at the last step's beta.
  double last_fw_gap() const { return last_gap_; }

 private:
  Problem prob_;
  std::vector<double> beta_, grad_, s_, w_, beta_tilde_;
  double last_gap_ = 0.0;
  std::size_t iter_ = 0;
  CallCounters counters_;
};

/// Batch schedules of the stochastic baselines (k is the 1-based iteration) and
/// the SCGM momentum weight (k is the 0-based iteration).
std::size_t sfw_batch(std::size_t k, std::size_t n);
std::size_t svrf_batch(std::size_t k, std::size_t n);
double scgm_rho(std::size_t k);

/// Stochastic Frank-Wolfe: fresh mini-batch gradient of size min{k^2, n/2}.
class SfwSolver final : public Solver {
 public:
  SfwSolver(Problem prob, Rng rng);

  std::string_view name() const override { return "sfw"; }
  void step() override;
  std::size_t iter() const override { return iter_; }
  const CallCounters& counters() const override { return counters_; }
  CallCounters& mutable_counters() override { return counters_; }
  std::vector<double> primal_point() const override { return beta_; }
  std::vector<double> dual_point() const override;
  std::size_t last_batch() const { return last_batch_; }

 private:
  Problem prob_;
  BatchSampler sampler_;
  std::vector<double> beta_, grad_, beta_tilde_;
  std::size_t last_batch_ = 0;
  std::size_t iter_ = 0;
  CallCounters counters_;
};

/**
 * Stochastic variance-reduced Frank-Wolfe. An epoch takes a snapshot with a
 * full gradient (per-sample derivatives kept) and then runs ceil(n/m) inner
 * steps, m = min{k, n/2} at the epoch start, each using
 * grad f(snapshot) + g_B(beta) - g_B(snapshot).
 */
class SvrfSolver final : public Solver {
 public:
  SvrfSolver(Problem prob, Rng rng);

  std::string_view name() const override { return "svrf"; }
  void step() override;
  std::size_t iter() const override { return iter_; }
  const CallCounters& counters() const override { return counters_; }
  CallCounters& mutable_counters() override { return counters_; }
  std::vector<double> primal_point() const override { return beta_; }
  std::vector<double> dual_point() const override;
  std::size_t last_batch() const { return last_batch_; }
  std::size_t epochs() const { return epochs_; }

 private:
  void take_snapshot();

  Problem prob_;
  BatchSampler sampler_;
  std::vector<double> beta_, snap_grad_, snap_w_, snap_s_, est_, beta_tilde_;
  std::size_t inner_left_ = 0;
  std::size_t epochs_ = 0;
  std::size_t last_batch_ = 0;
  std::size_t iter_ = 0;
  CallCounters counters_;
};

/// Stochastic conditional gradient with momentum d_k = (1-rho_k) d_{k-1} + rho_k g_k,
/// rho_k = (k+1)^(-2/3), alpha_k = 1/(k+1), fixed batch.
class ScgmSolver final : public Solver {
 public:
  ScgmSolver(Problem prob, std::size_t batch_size, Rng rng);

  std::string_view name() const override { return "scgm"; }
  void step() override;
  std::size_t iter() const override { return iter_; }
  const CallCounters& counters() const override { return counters_; }
  CallCounters& mutable_counters() override { return counters_; }
  std::vector<double> primal_point() const override { return beta_; }
  std::vector<double> dual_point() const override;
  std::span<const double> momentum() const { return d_; }
  std::span<const double> last_batch_gradient() const { return grad_; }

 private:
  Problem prob_;
  std::size_t batch_;
  BatchSampler sampler_;
  std::vector<double> beta_, d_, grad_, beta_tilde_;
  std::size_t iter_ = 0;
  CallCounters counters_;
};

/// grad L(X beta), the dual point paired with a primal iterate beta.
std::vector<double> dual_response(const Problem& prob, std::span<const double> beta);

/// Mini-batch gradient (1/|B|) sum_{j in B} l_j'(x_j^T beta) x_j into out.
void batch_gradient(const Problem& prob, std::span<const double> beta,
                    std::span<const std::size_t> batch, std::span<double> out);

}  // namespace gsfw

#endif  // GSFW_SOLVERS_HPP_
