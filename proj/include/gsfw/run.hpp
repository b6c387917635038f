#ifndef GSFW_RUN_HPP_
#define GSFW_RUN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsfw/dataset.hpp"
#include "gsfw/losses.hpp"
#include "gsfw/regularizer.hpp"
#include "gsfw/schedule.hpp"
#include "gsfw/solvers.hpp"

namespace gsfw {

enum class Algo { kGsfw, kRcmd, kFw, kSfw, kSvrf, kScgm };

std::string_view algo_name(Algo a);
Algo parse_algo(std::string_view s);
std::string_view loss_name(LossKind k);
LossKind parse_loss(std::string_view s);
std::string_view schedule_name(ScheduleMode m);
ScheduleMode parse_schedule(std::string_view s);

struct RegSpec {
  std::string kind = "l1ball";
  double delta = 1.0;
  double mu = 1.0;
  double rho = 1.0;
};

Regularizer make_regularizer(const RegSpec& spec);

struct SynthSpec {
  std::size_t n = 50;
  std::size_t p = 10;
  double density = 1.0;
  std::uint64_t seed = 7;
};

struct RunConfig {
  Algo algo = Algo::kGsfw;
  LossKind loss = LossKind::kLogistic;
  RegSpec reg;
  ScheduleMode schedule = ScheduleMode::kNonStrong;
  /// Batch as a fraction of n (floored); overridden by batch_size.
  std::optional<double> batch_fraction;
  std::optional<std::size_t> batch_size;
  /// Budgets; 0 means unset. With neither set the run is capped at 1000 n
  /// sample gradients.
  std::size_t max_iters = 0;
  std::uint64_t max_sg_calls = 0;
  /// Stop once the evaluated gap (or P - reference_primal, when given) is at
  /// or below this value; 0 disables.
  double gap_target = 0.0;
  std::optional<double> reference_primal;
  /// Evaluate every eval_stride iterations; 0 picks max(1, budget/200).
  std::size_t eval_stride = 0;
  /// Extra report indices k (mapped to iterations by the algorithm's
  /// checkpoint convention).
  std::vector<std::size_t> eval_k;
  std::uint64_t seed = 1;
  /// Dataset path or name resolved under $GSFW_DATA_DIR and ./data.
  std::string data;
  std::optional<SynthSpec> synth;
  std::size_t min_p = 0;
};

struct TraceRecord {
  std::string algo;
  std::uint64_t seed = 0;
  std::size_t iter = 0;
  std::uint64_t sg_calls = 0;
  std::uint64_t loo_calls = 0;
  std::uint64_t full_grad_calls = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::int64_t wall_ns = 0;
};

/// Constants and choices describing how a trace was produced.
struct TraceMeta {
  std::string algo;
  std::string loss;
  std::string reg;
  std::string schedule;
  std::string data;
  std::string rng;
  std::string step_rule;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t batch = 1;
  double n_eff = 0.0;
  double gamma = 0.0;
  double M = 0.0;
  double dmax = 0.0;
  double sigma = 0.0;
  /// Report index k of a row is iter - k_offset.
  std::int64_t k_offset = 0;
  std::uint64_t seed = 0;
  std::uint64_t diag_loo_calls = 0;
  std::optional<double> reference_primal;
  std::string stop_reason;
};

struct Trace {
  std::vector<TraceRecord> records;
  TraceMeta meta;
};

using TraceSink = std::function<void(const TraceRecord&)>;

/// Loads or synthesizes the dataset named by the config. Throws IoError.
Dataset resolve_dataset(const RunConfig& cfg);

/// Throws ConfigError on invalid combinations for this dataset.
void validate_config(const RunConfig& cfg, const Dataset& ds);

std::size_t resolve_batch(const RunConfig& cfg, std::size_t n);

/// Builds the solver a config asks for; `prob` must outlive it.
std::unique_ptr<Solver> make_solver(const RunConfig& cfg, const Problem& prob,
                                    TraceMeta* meta = nullptr);

Trace run(const RunConfig& cfg, const Dataset& ds, const TraceSink& sink = {});

}  // namespace gsfw

#endif  // GSFW_RUN_HPP_
