#include "gsfw/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "gsfw/error.hpp"
#include "gsfw/metrics.hpp"
#include "gsfw/trace_io.hpp"

namespace gsfw {

namespace {

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
}

bool same_constant(double a, double b) {
  return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string default_trace_path(const std::string& dir, Algo algo, std::uint64_t seed) {
  return (std::filesystem::path(dir) /
          (std::string(algo_name(algo)) + "_seed" + std::to_string(seed) + ".csv"))
      .string();
}

Trace run_to_file(const RunConfig& cfg, const Dataset& ds, const std::string& csv_path) {
  ensure_parent(csv_path);
  std::ofstream out(csv_path);
  if (!out) throw IoError("cannot write '" + csv_path + "'");
  write_trace_header(out);
  Trace trace = run(cfg, ds, [&](const TraceRecord& r) { write_trace_row(out, r); });
  out.close();
  if (!out) throw IoError("write failed for '" + csv_path + "'");
  write_meta_json(meta_path_for(csv_path), trace.meta);
  return trace;
}

int cmd_run(const RunConfig& cfg, const std::string& csv_path, std::ostream& log) {
  const Dataset ds = resolve_dataset(cfg);
  const Trace trace = run_to_file(cfg, ds, csv_path);
  const TraceRecord& last = trace.records.back();
  log << trace.meta.algo << " seed=" << cfg.seed << " iter=" << last.iter
      << " sg_calls=" << last.sg_calls << " loo_calls=" << last.loo_calls
      << " primal=" << format_double(last.primal) << " gap=" << format_double(last.gap);
  if (cfg.reference_primal) {
    log << " subopt=" << format_double(last.primal - *cfg.reference_primal);
  }
  log << " stop=" << trace.meta.stop_reason << " -> " << csv_path << '\n';
  return exit_code::kOk;
}

std::vector<AggregateRow> aggregate_traces(const std::vector<std::vector<TraceRecord>>& traces) {
  std::map<std::string, std::vector<const std::vector<TraceRecord>*>> by_algo;
  for (const auto& t : traces) {
    if (!t.empty()) by_algo[t.front().algo].push_back(&t);
  }
  std::vector<AggregateRow> out;
  for (const auto& [algo, group] : by_algo) {
    std::map<std::uint64_t, AggregateRow> acc;
    for (const auto* t : group) {
      for (const auto& r : *t) {
        auto& row = acc[r.sg_calls];
        row.algo = algo;
        row.sg_calls = r.sg_calls;
        row.seeds += 1;
        row.mean_gap += r.gap;
        row.mean_primal += r.primal;
      }
    }
    for (auto& [sg, row] : acc) {
      if (row.seeds != group.size()) continue;
      row.mean_gap /= static_cast<double>(row.seeds);
      row.mean_primal /= static_cast<double>(row.seeds);
      out.push_back(row);
    }
  }
  return out;
}

int cmd_sweep(const SweepConfig& cfg, const std::string& out_dir, std::ostream& log,
              std::vector<SweepCell>* cells_out) {
  if (cfg.algos.empty() || cfg.seeds.empty()) throw ConfigError("sweep needs algos and seeds");
  const Dataset ds = resolve_dataset(cfg.base);
  std::vector<SweepCell> cells;
  for (Algo a : cfg.algos) {
    for (std::uint64_t s : cfg.seeds) cells.push_back({a, s, default_trace_path(out_dir, a, s), false, {}});
  }
  std::vector<std::vector<TraceRecord>> traces(cells.size());
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    auto& cell = cells[static_cast<std::size_t>(c)];
    RunConfig rc = cfg.base;
    rc.algo = cell.algo;
    rc.seed = cell.seed;
    try {
      traces[static_cast<std::size_t>(c)] = run_to_file(rc, ds, cell.path).records;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  }

  std::vector<std::vector<TraceRecord>> finished;
  std::size_t failed = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].ok) {
      finished.push_back(std::move(traces[c]));
    } else {
      ++failed;
      log << "FAILED " << algo_name(cells[c].algo) << " seed=" << cells[c].seed << ": "
          << cells[c].error << '\n';
    }
  }

  const std::string agg_path = (std::filesystem::path(out_dir) / "aggregate.csv").string();
  ensure_parent(agg_path);
  std::ofstream agg(agg_path);
  if (!agg) throw IoError("cannot write '" + agg_path + "'");
  agg << "algo,sg_calls,seeds,mean_gap,mean_primal\n";
  for (const auto& r : aggregate_traces(finished)) {
    agg << r.algo << ',' << r.sg_calls << ',' << r.seeds << ',' << format_double(r.mean_gap)
        << ',' << format_double(r.mean_primal) << '\n';
  }
  log << "sweep: " << cells.size() - failed << "/" << cells.size() << " cells finished -> "
      << out_dir << '\n';
  if (cells_out != nullptr) *cells_out = cells;
  return failed == 0 ? exit_code::kOk : exit_code::kPartialFailure;
}

BoundCheckReport check_bounds(const std::vector<std::vector<TraceRecord>>& traces,
                              const std::vector<TraceMeta>& metas,
                              const BoundCheckOptions& opt) {
  if (traces.empty() || traces.size() != metas.size()) {
    throw ConfigError("check-bounds needs at least one trace with metadata");
  }
  const TraceMeta& m0 = metas.front();
  for (const auto& m : metas) {
    if (m.algo != "gsfw" && m.algo != "rcmd") {
      throw ConfigError("check-bounds applies to gsfw/rcmd traces, got '" + m.algo + "'");
    }
    const bool same = m.schedule == m0.schedule && m.k_offset == m0.k_offset &&
                      same_constant(m.n_eff, m0.n_eff) && same_constant(m.gamma, m0.gamma) &&
                      same_constant(m.M, m0.M) && same_constant(m.dmax, m0.dmax) &&
                      same_constant(m.sigma, m0.sigma);
    if (!same) throw ConfigError("traces disagree on instance constants (seed " +
                                 std::to_string(m.seed) + ")");
  }
  const double n_eff = opt.n_eff.value_or(m0.n_eff);
  const double gamma = opt.gamma.value_or(m0.gamma);
  const double M = opt.M.value_or(m0.M);
  const double dmax = opt.dmax.value_or(m0.dmax);
  const double sigma = opt.sigma.value_or(m0.sigma);
  const bool strong = m0.schedule == "strong";

  BoundCheckReport rep;
  rep.schedule = m0.schedule;
  std::map<std::int64_t, std::pair<double, std::size_t>> by_k;
  for (const auto& t : traces) {
    for (const auto& r : t) {
      const std::int64_t k = static_cast<std::int64_t>(r.iter) - m0.k_offset;
      auto& slot = by_k[k];
      slot.first += r.gap;
      slot.second += 1;
    }
  }

  std::vector<std::int64_t> wanted;
  if (opt.ks.empty()) {
    for (const auto& [k, v] : by_k) {
      if (v.second == traces.size()) wanted.push_back(k);
    }
  } else {
    for (std::size_t k : opt.ks) {
      const auto key = static_cast<std::int64_t>(k);
      const auto it = by_k.find(key);
      const bool undefined = key < 0 || (strong && key == 0);
      if (!undefined && (it == by_k.end() || it->second.second != traces.size())) {
        throw ConfigError("checkpoint k=" + std::to_string(k) + " missing from some trace");
      }
      wanted.push_back(key);
    }
  }

  for (std::int64_t k : wanted) {
    if (k < 0 || (strong && k == 0)) {
      ++rep.skipped;
      continue;
    }
    const auto& [sum, cnt] = by_k.at(k);
    BoundCheckLine line;
    line.k = static_cast<std::size_t>(k);
    line.traces = cnt;
    line.mean_gap = sum / static_cast<double>(cnt);
    line.bound = strong ? bound_thm2(n_eff, sigma, dmax, line.k)
                        : bound_thm1(n_eff, gamma, M, dmax, line.k);
    line.pass = line.mean_gap <= line.bound;
    rep.lines.push_back(line);
  }
  rep.pass = (!rep.lines.empty() || rep.skipped > 0) &&
             std::all_of(rep.lines.begin(), rep.lines.end(), [](const auto& l) { return l.pass; });
  return rep;
}

int cmd_check_bounds(const std::vector<std::string>& csv_paths, const BoundCheckOptions& opt,
                     std::ostream& log) {
  std::vector<std::vector<TraceRecord>> traces;
  std::vector<TraceMeta> metas;
  for (const auto& p : csv_paths) {
    try {
      traces.push_back(load_trace_csv(p));
    } catch (const ParseError& e) {
      throw IoError("trace '" + p + "': " + e.what());
    }
    metas.push_back(read_meta_json(meta_path_for(p)));
  }
  const BoundCheckReport rep = check_bounds(traces, metas, opt);
  log << "schedule=" << rep.schedule << " traces=" << traces.size() << '\n';
  for (const auto& l : rep.lines) {
    log << (l.pass ? "PASS" : "FAIL") << " k=" << l.k << " mean_gap=" << format_double(l.mean_gap)
        << " bound=" << format_double(l.bound) << " margin=" << format_double(l.bound - l.mean_gap)
        << '\n';
  }
  if (rep.skipped > 0) log << "skipped " << rep.skipped << " checkpoint(s) without a defined bound\n";
  log << (rep.pass ? "bounds: PASS" : "bounds: FAIL") << '\n';
  return rep.pass ? exit_code::kOk : exit_code::kCheckFailed;
}

EquivalenceReport equivalence_check(std::size_t n, std::size_t p, std::size_t iters,
                                    std::uint64_t seed, double tol) {
  const Dataset ds = synth_dataset(n, p, 1.0, LossKind::kLogistic, seed);
  const LossFamily lf = LossFamily::for_dataset(LossKind::kLogistic, ds);
  const Regularizer reg = L1Ball{1.0};
  const Problem prob(ds, lf, reg);
  const Schedule sched = Schedule::nonstrong(static_cast<double>(n));
  GsfwSolver primal(prob, sched, 1, Rng(seed, 1));
  RcmdSolver dual(prob, sched, Rng(seed, 1));
  BatchSampler indices(n, Rng(seed, 2));

  EquivalenceReport rep;
  auto compare = [&] {
    const auto s = primal.predicted();
    const auto w = dual.dual_weights();
    for (std::size_t j = 0; j < n; ++j) {
      rep.max_deviation = std::max(rep.max_deviation, std::abs(s[j] - lf.conj_deriv(j, w[j])));
    }
  };
  compare();
  for (std::size_t i = 0; i < iters; ++i) {
    const std::size_t j = indices.draw(1)[0];
    primal.step_with(std::span<const std::size_t>(&j, 1));
    dual.step_with(j);
    const auto a = primal.last_oracle();
    const auto b = dual.last_oracle();
    if (!std::equal(a.begin(), a.end(), b.begin())) ++rep.oracle_mismatches;
    compare();
  }
  rep.iters = iters;
  rep.pass = rep.max_deviation <= tol && rep.oracle_mismatches == 0;
  return rep;
}

int cmd_equivalence(std::size_t n, std::size_t p, std::size_t iters,
                    const std::vector<std::uint64_t>& seeds, std::ostream& log) {
  if (n == 0 || p == 0) throw ConfigError("equivalence needs n, p >= 1");
  bool all = true;
  for (std::uint64_t seed : seeds) {
    const auto rep = equivalence_check(n, p, iters, seed);
    all = all && rep.pass;
    log << (rep.pass ? "PASS" : "FAIL") << " seed=" << seed << " iters=" << rep.iters
        << " max_deviation=" << format_double(rep.max_deviation)
        << " oracle_mismatches=" << rep.oracle_mismatches << '\n';
  }
  return all ? exit_code::kOk : exit_code::kCheckFailed;
}

}  // namespace gsfw
