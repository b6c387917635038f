#include "gsfw/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "gsfw/error.hpp"
#include "gsfw/metrics.hpp"

namespace gsfw {

namespace {

constexpr std::uint64_t kSamplerStream = 1;

struct NamedAlgo {
  Algo algo;
  std::string_view name;
};
constexpr NamedAlgo kAlgos[] = {{Algo::kGsfw, "gsfw"}, {Algo::kRcmd, "rcmd"},
                                {Algo::kFw, "fw"},     {Algo::kSfw, "sfw"},
                                {Algo::kSvrf, "svrf"}, {Algo::kScgm, "scgm"}};

bool is_dual_family(Algo a) { return a == Algo::kGsfw || a == Algo::kRcmd; }

}  // namespace

std::string_view algo_name(Algo a) {
  for (const auto& e : kAlgos) {
    if (e.algo == a) return e.name;
  }
  throw InternalError("unknown algorithm enum");
}

Algo parse_algo(std::string_view s) {
  for (const auto& e : kAlgos) {
    if (e.name == s) return e.algo;
  }
  throw ConfigError("unknown algo '" + std::string(s) + "' (gsfw|rcmd|fw|sfw|svrf|scgm)");
}

std::string_view loss_name(LossKind k) {
  return k == LossKind::kLogistic ? "logistic" : "squared";
}

LossKind parse_loss(std::string_view s) {
  if (s == "logistic") return LossKind::kLogistic;
  if (s == "squared") return LossKind::kSquared;
  throw ConfigError("unknown loss '" + std::string(s) + "' (logistic|squared)");
}

std::string_view schedule_name(ScheduleMode m) {
  return m == ScheduleMode::kNonStrong ? "nonstrong" : "strong";
}

ScheduleMode parse_schedule(std::string_view s) {
  if (s == "nonstrong") return ScheduleMode::kNonStrong;
  if (s == "strong") return ScheduleMode::kStrong;
  throw ConfigError("unknown schedule '" + std::string(s) + "' (nonstrong|strong)");
}

Regularizer make_regularizer(const RegSpec& spec) {
  Regularizer reg;
  if (spec.kind == "l1ball") {
    reg = L1Ball{spec.delta};
  } else if (spec.kind == "l2ball") {
    reg = L2Ball{spec.delta};
  } else if (spec.kind == "simplex") {
    reg = Simplex{spec.delta};
  } else if (spec.kind == "quadball") {
    reg = QuadBall{spec.mu, spec.rho};
  } else {
    throw ConfigError("unknown reg '" + spec.kind + "' (l1ball|l2ball|simplex|quadball)");
  }
  try {
    validate(reg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return reg;
}

Dataset resolve_dataset(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const bool binary = cfg.loss == LossKind::kLogistic;
  if (cfg.synth) {
    const auto& s = *cfg.synth;
    try {
      return synth_dataset(s.n, s.p, s.density, cfg.loss, s.seed);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (cfg.data.empty()) throw ConfigError("no dataset: give a data path/name or a synth spec");
  std::vector<fs::path> candidates{cfg.data};
  if (const char* dir = std::getenv("GSFW_DATA_DIR")) candidates.emplace_back(fs::path(dir) / cfg.data);
  candidates.emplace_back(fs::path("data") / cfg.data);
  for (const auto& c : candidates) {
    std::error_code ec;
    if (fs::is_regular_file(c, ec)) return load_libsvm(c.string(), binary, cfg.min_p);
  }
  throw IoError("dataset '" + cfg.data + "' not found (also searched $GSFW_DATA_DIR and ./data)");
}

std::size_t resolve_batch(const RunConfig& cfg, std::size_t n) {
  if (cfg.batch_size) {
    if (*cfg.batch_size < 1 || *cfg.batch_size > n) {
      throw ConfigError("batch size must lie in [1, n]");
    }
    return *cfg.batch_size;
  }
  if (cfg.batch_fraction) {
    const double f = *cfg.batch_fraction;
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("batch fraction must lie in (0, 1]");
    const auto b = static_cast<std::size_t>(std::floor(f * static_cast<double>(n)));
    if (b < 1) throw ConfigError("batch fraction times n must be at least 1");
    return b;
  }
  if (cfg.algo == Algo::kScgm) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(0.01 * static_cast<double>(n)));
  }
  return 1;
}

void validate_config(const RunConfig& cfg, const Dataset& ds) {
  const Regularizer reg = make_regularizer(cfg.reg);
  if (cfg.schedule == ScheduleMode::kStrong) {
    if (strong_modulus(reg) <= 0.0) {
      throw ConfigError("strong schedule needs a strongly convex regularizer (quadball)");
    }
    if (!is_dual_family(cfg.algo)) {
      throw ConfigError("strong schedule applies to gsfw and rcmd only");
    }
  }
  if (is_dual_family(cfg.algo) && !contains_origin(reg)) {
    throw ConfigError(std::string(algo_name(cfg.algo)) +
                      " needs 0 in the regularizer's domain; simplex is not admitted");
  }
  const std::size_t b = resolve_batch(cfg, ds.n());
  if (cfg.algo == Algo::kRcmd && b != 1) throw ConfigError("rcmd runs with batch size 1");
  if (cfg.loss == LossKind::kLogistic) {
    for (double y : ds.y()) {
      if (y != 1.0 && y != -1.0) throw ConfigError("logistic loss needs labels in {-1,+1}");
    }
  }
  if (cfg.gap_target < 0.0) throw ConfigError("gap target must be non-negative");
}

std::unique_ptr<Solver> make_solver(const RunConfig& cfg, const Problem& prob, TraceMeta* meta) {
  const std::size_t n = prob.n();
  const std::size_t b = resolve_batch(cfg, n);
  const double n_eff = static_cast<double>(effective_samples(n, b));
  const double gamma = prob.lf->gamma();
  Schedule sched = Schedule::nonstrong(n_eff);
  if (cfg.schedule == ScheduleMode::kStrong) {
    const double sigma =
        sigma_strong(gamma, prob.ds->max_row_norm_sq(), n_eff, strong_modulus(*prob.reg));
    sched = Schedule::strong(n_eff, sigma);
  }
  if (meta != nullptr) {
    meta->batch = b;
    meta->n_eff = n_eff;
    meta->sigma = sched.sigma;
    meta->k_offset = 0;
    if (is_dual_family(cfg.algo) && sched.mode == ScheduleMode::kNonStrong) meta->k_offset = 1;
  }
  Rng rng(cfg.seed, kSamplerStream);
  std::string rule;
  std::unique_ptr<Solver> out;
  switch (cfg.algo) {
    case Algo::kGsfw:
      out = std::make_unique<GsfwSolver>(prob, sched, b, rng);
      rule = sched.mode == ScheduleMode::kNonStrong
                 ? "alpha_i=2(2n+i)/((i+1)(4n+i)), eta_i=2n/(2n+i+1), n=n_eff"
                 : "eta=1/sigma, alpha_i=(1/(n sigma))/(1-((sigma-1/n)/sigma)^(i+1)), n=n_eff";
      break;
    case Algo::kRcmd:
      out = std::make_unique<RcmdSolver>(prob, sched, rng);
      rule = sched.mode == ScheduleMode::kNonStrong ? "alpha_i=2(2n+i)/((i+1)(4n+i)), eta_i=2n/(2n+i+1)"
                                                    : "eta=1/sigma, alpha_i strong";
      break;
    case Algo::kFw:
      out = std::make_unique<FrankWolfeSolver>(prob);
      rule = "alpha_i=2/(i+2), exact gradient";
      break;
    case Algo::kSfw:
      out = std::make_unique<SfwSolver>(prob, rng);
      rule = "alpha_i=2/(i+2), batch min(k^2, n/2)";
      break;
    case Algo::kSvrf:
      out = std::make_unique<SvrfSolver>(prob, rng);
      rule = "alpha_i=2/(i+2), batch min(k, n/2), epoch ceil(n/m) inner steps";
      break;
    case Algo::kScgm:
      out = std::make_unique<ScgmSolver>(prob, b, rng);
      rule = "rho_k=(k+1)^(-2/3), alpha_k=1/(k+1), fixed batch";
      break;
  }
  if (meta != nullptr) meta->step_rule = rule;
  return out;
}

Trace run(const RunConfig& cfg, const Dataset& ds, const TraceSink& sink) {
  validate_config(cfg, ds);
  const Regularizer reg = make_regularizer(cfg.reg);
  const LossFamily lf = LossFamily::for_dataset(cfg.loss, ds);
  const Problem prob(ds, lf, reg);

  Trace trace;
  TraceMeta& meta = trace.meta;
  meta.algo = std::string(algo_name(cfg.algo));
  meta.loss = std::string(loss_name(cfg.loss));
  meta.reg = describe(reg);
  meta.schedule = std::string(schedule_name(cfg.schedule));
  meta.data = cfg.synth ? "synth(n=" + std::to_string(cfg.synth->n) + ",p=" +
                              std::to_string(cfg.synth->p) + ",density=" +
                              std::to_string(cfg.synth->density) + ",seed=" +
                              std::to_string(cfg.synth->seed) + ")"
                        : cfg.data;
  meta.rng = Rng::kVersion;
  meta.n = ds.n();
  meta.p = ds.p();
  meta.gamma = lf.gamma();
  meta.M = bound_M(reg, ds);
  meta.dmax = cfg.loss == LossKind::kLogistic ? dmax_logistic() : dmax_bound(meta.gamma, meta.M);
  meta.seed = cfg.seed;
  meta.reference_primal = cfg.reference_primal;

  auto solver = make_solver(cfg, prob, &meta);

  std::uint64_t max_sg = cfg.max_sg_calls;
  if (cfg.max_iters == 0 && max_sg == 0) max_sg = 1000 * static_cast<std::uint64_t>(ds.n());

  // Evaluation plan: iteration stride, or sample-gradient stride when only an
  // sg budget is known.
  std::size_t iter_stride = cfg.eval_stride;
  std::uint64_t sg_stride = 0;
  if (iter_stride == 0) {
    if (cfg.max_iters > 0) {
      iter_stride = std::max<std::size_t>(1, cfg.max_iters / 200);
    } else {
      sg_stride = std::max<std::uint64_t>(1, max_sg / 200);
    }
  }
  std::uint64_t next_sg = solver->counters().sg_calls + sg_stride;
  std::set<std::size_t> extra;
  for (std::size_t k : cfg.eval_k) extra.insert(k + static_cast<std::size_t>(meta.k_offset));

  std::int64_t wall = 0;
  std::size_t last_eval = static_cast<std::size_t>(-1);
  bool reached = false;
  auto evaluate = [&] {
    const CallCounters& c = solver->counters();
    const GapReport rep = duality_gap(prob, solver->primal_point(), solver->dual_point(),
                                      &solver->mutable_counters());
    TraceRecord rec{meta.algo,   cfg.seed, solver->iter(), c.sg_calls, c.loo_calls,
                    c.full_grad_calls, rep.primal, rep.dual, rep.gap, wall};
    trace.records.push_back(rec);
    if (sink) sink(rec);
    last_eval = solver->iter();
    if (cfg.gap_target > 0.0) {
      const double measure = cfg.reference_primal ? rep.primal - *cfg.reference_primal : rep.gap;
      reached = measure <= cfg.gap_target;
    }
  };

  evaluate();
  meta.stop_reason = "target";
  while (!reached) {
    if (cfg.max_iters > 0 && solver->iter() >= cfg.max_iters) {
      meta.stop_reason = "max_iters";
      break;
    }
    if (max_sg > 0 && solver->counters().sg_calls >= max_sg) {
      meta.stop_reason = "max_sg_calls";
      break;
    }
    const auto t0 = std::chrono::steady_clock::now();
    solver->step();
    wall += std::chrono::duration_cast<std::chrono::nanoseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
    const std::size_t it = solver->iter();
    bool due = extra.count(it) > 0;
    if (iter_stride > 0 && it % iter_stride == 0) due = true;
    if (sg_stride > 0 && solver->counters().sg_calls >= next_sg) {
      due = true;
      while (next_sg <= solver->counters().sg_calls) next_sg += sg_stride;
    }
    if (due) evaluate();
  }
  if (last_eval != solver->iter()) evaluate();
  meta.diag_loo_calls = solver->counters().diag_loo_calls;
  return trace;
}

}  // namespace gsfw
