// Acceptance checks, one line per criterion:
//   1 primal/dual equivalence      2 sublinear bound, b = 1
//   3 linear bound + monotone D    4 invariant suite
//   5 Dmax for logistic            6 mushrooms reproduction
//   7 sublinear bound, b = 5
// Exit: 0 all selected pass, 1 any failure, 77 when every selected check skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsfw/commands.hpp"
#include "gsfw/error.hpp"
#include "gsfw/metrics.hpp"
#include "gsfw/reference.hpp"
#include "gsfw/run.hpp"
#include "gsfw/solvers.hpp"
#include "oracles.hpp"

using namespace gsfw;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome fail_if(bool bad, std::string detail) {
  return {bad ? Status::kFail : Status::kPass, std::move(detail)};
}

// Seed-mean bound check over runs of `base` for seeds 1..30; `n_eff` and the
// bound function are recomputed here and compared with the checker's.
Outcome bound_check(RunConfig base, const std::vector<std::size_t>& ks, std::size_t expect_n_eff,
                    const std::function<double(const TraceMeta&, std::size_t)>& bound) {
  const Dataset ds = resolve_dataset(base);
  std::vector<std::vector<TraceRecord>> traces;
  std::vector<TraceMeta> metas;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RunConfig cfg = base;
    cfg.seed = seed;
    Trace t = run(cfg, ds);
    traces.push_back(std::move(t.records));
    metas.push_back(t.meta);
  }
  if (metas[0].n_eff != static_cast<double>(expect_n_eff)) {
    return {Status::kFail, "n_eff=" + fmt(metas[0].n_eff) + " expected " + std::to_string(expect_n_eff)};
  }
  BoundCheckOptions opt;
  opt.ks = ks;
  const BoundCheckReport rep = check_bounds(traces, metas, opt);
  std::ostringstream d;
  bool ok = rep.pass && rep.lines.size() == ks.size();
  for (const auto& l : rep.lines) {
    const double mine = bound(metas[0], l.k);
    ok = ok && std::abs(mine - l.bound) <= 1e-12 * mine && l.mean_gap <= mine && l.traces == 30;
    d << " k=" << l.k << " gap=" << fmt(l.mean_gap) << "<=" << fmt(mine);
  }
  return fail_if(!ok, "n_eff=" + fmt(metas[0].n_eff) + d.str());
}

RunConfig synth_config(LossKind loss) {
  RunConfig cfg;
  cfg.loss = loss;
  cfg.synth = SynthSpec{50, 10, 1.0, 7};
  return cfg;
}

Outcome criterion_equivalence() {
  double worst = 0.0;
  std::size_t mismatches = 0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rep = equivalence_check(20, 5, 500, seed, 1e-10);
    worst = std::max(worst, rep.max_deviation);
    mismatches += rep.oracle_mismatches;
    ok = ok && rep.pass && rep.iters == 500;
  }
  return fail_if(!ok || worst > 1e-10 || mismatches > 0,
                 "max_deviation=" + fmt(worst) + " oracle_mismatches=" + std::to_string(mismatches));
}

Outcome criterion_sublinear(std::size_t batch) {
  RunConfig cfg = synth_config(LossKind::kLogistic);
  cfg.reg = RegSpec{"l1ball", 1.0};
  cfg.batch_size = batch;
  cfg.max_iters = 10001;
  cfg.eval_stride = 1000000;
  cfg.eval_k = {100, 1000, 10000};
  const Dataset ds = resolve_dataset(cfg);
  const double M = bound_M(L1Ball{1.0}, ds);
  const std::size_t n_eff = (50 + batch - 1) / batch;
  return bound_check(cfg, cfg.eval_k, n_eff, [&](const TraceMeta& m, std::size_t k) {
    if (m.M != M || m.dmax != std::numbers::ln2) return 0.0;
    const double n = static_cast<double>(n_eff), kk = static_cast<double>(k);
    return 8 * n * 0.25 * M * M / (4 * n + kk) + 2 * n * (2 * n - 1) * std::numbers::ln2 / ((4 * n + kk) * (kk + 1));
  });
}

Outcome criterion_linear() {
  RunConfig cfg = synth_config(LossKind::kSquared);
  cfg.reg = RegSpec{"quadball", 1.0, 1.0, 1.0};
  cfg.schedule = ScheduleMode::kStrong;
  cfg.max_iters = 1000;
  cfg.eval_stride = 1000000;
  cfg.eval_k = {50, 200, 1000};
  const Dataset ds = resolve_dataset(cfg);
  const Regularizer reg = QuadBall{1.0, 1.0};
  const LossFamily lf = LossFamily::for_dataset(LossKind::kSquared, ds);
  const double M = bound_M(reg, ds);
  const double sigma = sigma_strong(1.0, ds.max_row_norm_sq(), 50, 1.0);
  Outcome out = bound_check(cfg, cfg.eval_k, 50, [&](const TraceMeta& m, std::size_t k) {
    if (m.sigma != sigma || m.dmax != M * M) return 0.0;
    // Dmax / ((1 + 1/(n sigma - 1))^k - 1)
    const double ns = 50 * sigma;
    return M * M / std::expm1(static_cast<double>(k) * std::log1p(1 / (ns - 1)));
  });

  const Problem prob(ds, lf, reg);
  double worst_drop = 0.0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RunConfig c = cfg;
    c.seed = seed;
    auto solver = make_solver(c, prob);
    auto* g = dynamic_cast<GsfwSolver*>(solver.get());
    double prev = dual_value(prob, g->dual_weights());
    for (std::size_t i = 0; i < 1000; ++i) {
      g->step();
      const double cur = dual_value(prob, g->dual_weights());
      worst_drop = std::max(worst_drop, prev - cur);
      prev = cur;
    }
  }
  out.detail += " max_dual_drop=" + fmt(worst_drop);
  if (worst_drop > 1e-9) out.status = Status::kFail;
  return out;
}

Outcome criterion_invariants() {
  std::mt19937_64 gen(2024);
  std::map<std::string, double> worst;
  auto note = [&](const std::string& name, double v) { worst[name] = std::max(worst[name], v); };
  std::size_t gap_rows = 0;

  for (std::uint64_t inst = 1; inst <= 3; ++inst) {
    const Dataset ds = synth_dataset(40, 8, 0.5, LossKind::kLogistic, inst);
    const LossFamily lf = LossFamily::for_dataset(LossKind::kLogistic, ds);
    const Regularizer reg = L1Ball{2.0};
    const Problem prob(ds, lf, reg);
    const double M = bound_M(reg, ds);
    GsfwSolver g(prob, Schedule::nonstrong(40), 1, Rng(inst, 1));
    const std::vector<double> w0(g.dual_weights().begin(), g.dual_weights().end());
    std::vector<std::vector<double>> oracle_hist;
    for (std::size_t i = 0; i < 2000; ++i) {
      g.step();
      double dn = 0.0;
      for (double v : g.substitute_gradient()) dn = std::max(dn, std::abs(v));
      note("subgrad_identity", g.substitute_gradient_residual() / (1 + dn) / 1e-9);
      for (double s : g.predicted()) note("s_bound", (std::abs(s) - M) / 1e-9);
      for (std::size_t j = 0; j < 40; ++j) note("dual_box", (std::abs(g.dual_weights()[j] - w0[j]) - 0.25 * M) / 1e-9);
      if (i <= 200) {
        oracle_hist.emplace_back(g.last_oracle().begin(), g.last_oracle().end());
        std::vector<double> ref(8, 0.0);
        double tot = 0.0;
        for (std::size_t t = 0; t <= i; ++t) {
          for (std::size_t k = 0; k < 8; ++k) ref[k] += (80.0 + t) * oracle_hist[t][k];
          tot += 80.0 + t;
        }
        for (std::size_t k = 0; k < 8; ++k) note("averaging", std::abs(ref[k] / tot - g.beta_bar()[k]) / 1e-8);
      }
    }
    // strong schedule averaging
    const Dataset sq = synth_dataset(30, 6, 1.0, LossKind::kSquared, inst);
    const LossFamily sl = LossFamily::for_dataset(LossKind::kSquared, sq);
    const Regularizer qb = QuadBall{1.0, 1.0};
    const double sigma = sigma_strong(1.0, sq.max_row_norm_sq(), 30, 1.0);
    GsfwSolver gs(Problem(sq, sl, qb), Schedule::strong(30, sigma), 1, Rng(inst, 1));
    std::vector<std::vector<double>> hist;
    const double ratio = 30 * sigma / (30 * sigma - 1);
    for (std::size_t i = 0; i <= 200; ++i) {
      gs.step();
      hist.emplace_back(gs.last_oracle().begin(), gs.last_oracle().end());
      std::vector<double> ref(6, 0.0);
      double tot = 0.0;
      for (std::size_t t = 0; t <= i; ++t) {
        const double wt = std::pow(ratio, static_cast<double>(t));
        for (std::size_t k = 0; k < 6; ++k) ref[k] += wt * hist[t][k];
        tot += wt;
      }
      for (std::size_t k = 0; k < 6; ++k) note("averaging", std::abs(ref[k] / tot - gs.beta_bar()[k]) / 1e-8);
    }
    // conjugacy
    std::uniform_real_distribution<double> us(-20.0, 20.0);
    for (int t = 0; t < 2000; ++t) {
      const std::size_t j = static_cast<std::size_t>(t) % 40;
      const double s = us(gen);
      const double w = lf.deriv(j, s);
      const double err = std::abs(lf.conj_deriv(j, w) - s);
      const double rel = 1e-9 * std::max(1.0, std::abs(s));
      // past |s| = 18 neighbouring doubles w no longer resolve s to 1e-9
      if (std::abs(s) <= 18.0) note("conj_roundtrip", err / rel);
      const double a = std::abs(w);
      const double floor = 4 * (std::nextafter(a, 2.0) - a) / (a * (1 - a));
      note("conj_roundtrip_floor", err / std::max(rel, floor));
      note("fenchel_young", std::abs(s * w - lf.value(j, s) - lf.conj(j, w)) / std::max(1.0, std::abs(s)) / 1e-9);
    }
    // oracle optimality
    for (const Regularizer& r : {Regularizer{L1Ball{1.5}}, Regularizer{L2Ball{1.0}}, Regularizer{Simplex{2.0}},
                                 Regularizer{QuadBall{0.5, 2.0}}}) {
      std::normal_distribution<double> gn;
      std::vector<double> c(8);
      for (double& x : c) x = gn(gen);
      const auto sol = loo_solve(r, c);
      double best = reg_value(r, sol);
      for (std::size_t k = 0; k < 8; ++k) best += c[k] * sol[k];
      for (int t = 0; t < 1000; ++t) {
        const auto beta = oracle::random_feasible(r, 8, gen);
        double v = reg_value(r, beta);
        for (std::size_t k = 0; k < 8; ++k) v += c[k] * beta[k];
        note("oracle_optimality", (best - v) / 1e-12);
      }
    }
  }
  // weak duality on every trace row of every algorithm
  for (Algo a : {Algo::kGsfw, Algo::kRcmd, Algo::kFw, Algo::kSfw, Algo::kSvrf, Algo::kScgm}) {
    RunConfig cfg = synth_config(LossKind::kLogistic);
    cfg.algo = a;
    cfg.max_sg_calls = 20000;
    const Trace t = run(cfg, resolve_dataset(cfg));
    for (const auto& r : t.records) {
      note("weak_duality", -r.gap / 1e-9);
      ++gap_rows;
    }
  }
  std::ostringstream d;
  bool ok = true;
  for (const auto& [name, v] : worst) {
    ok = ok && v <= 1.0;
    d << name << "=" << fmt(v) << " ";
  }
  d << "(ratio to tolerance) gap_rows=" << gap_rows;
  return fail_if(!ok, d.str());
}

Outcome criterion_dmax() {
  double worst = -INFINITY;
  const std::tuple<std::size_t, std::size_t, double, std::uint64_t> insts[] = {
      {50, 10, 1.0, 7}, {100, 20, 0.3, 8}, {30, 5, 0.8, 9}};
  std::mt19937_64 gen(5);
  for (const auto& [n, p, dens, seed] : insts) {
    const Dataset ds = synth_dataset(n, p, dens, LossKind::kLogistic, seed);
    const LossFamily lf = LossFamily::for_dataset(LossKind::kLogistic, ds);
    const Problem base(ds, lf, L1Ball{1});
    const auto w0 = grad_weights(lf, std::vector<double>(n, 0.0));
    for (const Regularizer& reg : {Regularizer{L1Ball{5.0}}, Regularizer{L2Ball{20.0}}}) {
      const Problem prob(ds, lf, reg);
      for (int t = 0; t < 5000; ++t) {
        const auto beta = oracle::random_feasible(reg, p, gen);
        const auto w = dual_response(prob, beta);
        worst = std::max(worst, bregman_distance(lf, w, w0));
      }
    }
  }
  return fail_if(!(worst <= std::numbers::ln2 + 1e-9),
                 "max_bregman=" + fmt(worst) + " ln2=" + fmt(std::numbers::ln2) + " draws=30000");
}

// Value of the last record at or below each sg budget.
double at_budget(const std::vector<TraceRecord>& t, std::uint64_t budget, double pstar) {
  double v = INFINITY;
  for (const auto& r : t) {
    if (r.sg_calls > budget) break;
    v = r.primal - pstar;
  }
  return v;
}

Outcome criterion_reproduction() {
  RunConfig base;
  base.data = "mushrooms";
  base.min_p = 112;
  base.reg = RegSpec{"l1ball", 5.0};
  std::optional<Dataset> loaded;
  try {
    loaded.emplace(resolve_dataset(base));
  } catch (const IoError& e) {
    return {Status::kSkip, std::string("dataset unavailable: ") + e.what()};
  }
  const Dataset& ds = *loaded;
  if (ds.n() != 8124 || ds.p() != 112) {
    return {Status::kFail, "mushrooms shape " + std::to_string(ds.n()) + "x" + std::to_string(ds.p())};
  }
  const LossFamily lf = LossFamily::for_dataset(LossKind::kLogistic, ds);
  const Regularizer reg = L1Ball{5.0};
  const auto ref = reference_optimum(Problem(ds, lf, reg));
  const double pstar = ref.primal;
  base.reference_primal = pstar;
  base.batch_fraction = 0.01;
  base.max_sg_calls = 40000000;

  auto run_algo = [&](Algo a, std::uint64_t seed, double target) {
    RunConfig cfg = base;
    cfg.algo = a;
    cfg.seed = seed;
    cfg.gap_target = target;
    if (a != Algo::kGsfw && a != Algo::kScgm) cfg.batch_fraction.reset();
    return run(cfg, ds).records;
  };

  double gsfw_sg = 0.0;
  bool all_reached = true;
  std::map<Algo, std::vector<std::vector<TraceRecord>>> curves;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto t = run_algo(Algo::kGsfw, seed, 1e-5);
    all_reached = all_reached && t.back().primal - pstar <= 1e-5;
    gsfw_sg += static_cast<double>(t.back().sg_calls) / 3;
    curves[Algo::kGsfw].push_back(std::move(t));
  }
  const auto fw = run_algo(Algo::kFw, 1, 1e-5);
  const double fw_sg = static_cast<double>(fw.back().sg_calls);
  const bool a_ok = all_reached && gsfw_sg < fw_sg;
  const bool b_ok = gsfw_sg >= 1.27e6 / 4 && gsfw_sg <= 1.27e6 * 4;

  const std::uint64_t budget = static_cast<std::uint64_t>(gsfw_sg);
  for (Algo a : {Algo::kSfw, Algo::kSvrf, Algo::kScgm}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      RunConfig cfg = base;
      cfg.algo = a;
      cfg.seed = seed;
      cfg.max_sg_calls = budget;
      if (a != Algo::kScgm) cfg.batch_fraction.reset();
      curves[a].push_back(run(cfg, ds).records);
    }
  }
  auto mean_at = [&](Algo a, std::uint64_t b) {
    double s = 0.0;
    for (const auto& t : curves[a]) s += at_budget(t, b, pstar);
    return s / static_cast<double>(curves[a].size());
  };
  bool early_lead = false, late_best = true, late_seen = false;
  for (double e = 3.0; e <= std::log10(static_cast<double>(budget)); e += 0.1) {
    const auto b = static_cast<std::uint64_t>(std::pow(10.0, e));
    const double g = mean_at(Algo::kGsfw, b);
    const double lead = std::min(mean_at(Algo::kSfw, b), mean_at(Algo::kScgm, b));
    if (lead < g) early_lead = true;
    if (g <= 1e-4) {
      late_seen = true;
      late_best = late_best && g < lead && g < mean_at(Algo::kSvrf, b);
    }
  }
  const bool c_ok = early_lead && late_seen && late_best;
  return fail_if(!(a_ok && b_ok && c_ok),
                 "pstar=" + fmt(pstar) + " gsfw_sg=" + fmt(gsfw_sg) + " fw_sg=" + fmt(fw_sg) +
                     " (a)=" + (a_ok ? "ok" : "no") + " (b)=" + (b_ok ? "ok" : "no") +
                     " (c)=" + (c_ok ? "ok" : "no"));
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> selected{1, 2, 3, 4, 5, 6, 7};
  app.add_option("--criteria", selected, "comma-separated criterion ids")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "equivalence n=20 p=5 500 iters 5 seeds", 5, criterion_equivalence},
      {2, "sublinear bound b=1, 30 seeds, k in {100,1000,10000}", 120, [] { return criterion_sublinear(1); }},
      {3, "linear bound + monotone dual, 30 seeds, k in {50,200,1000}", 120, criterion_linear},
      {4, "invariant suite", 600, criterion_invariants},
      {5, "Dmax <= ln 2 for logistic", 600, criterion_dmax},
      {6, "mushrooms reproduction", 900, criterion_reproduction},
      {7, "sublinear bound b=5 (n_eff=10)", 120, [] { return criterion_sublinear(5); }},
  };

  int pass = 0, fail = 0, skip = 0;
  for (const auto& c : all) {
    if (std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.status != Status::kSkip && secs > c.time_limit_s) {
      o.status = Status::kFail;
      o.detail += " time limit " + fmt(c.time_limit_s) + "s exceeded";
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    std::printf("[%d] %s %s: %s (%.2fs)\n", c.id, tag, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    (o.status == Status::kPass ? pass : o.status == Status::kFail ? fail : skip) += 1;
  }
  std::printf("acceptance: %d pass, %d fail, %d skip\n", pass, fail, skip);
  if (fail > 0) return 1;
  if (pass == 0 && skip > 0) return 77;
  return 0;
}
