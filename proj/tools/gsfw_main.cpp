// gsfw: run solvers, sweep seeds, check convergence bounds, verify the
// primal/dual equivalence.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsfw/commands.hpp"
#include "gsfw/config.hpp"
#include "gsfw/error.hpp"
#include "gsfw/metrics.hpp"
#include "gsfw/reference.hpp"
#include "gsfw/trace_io.hpp"

namespace {

using nlohmann::json;

// Flags shared by run and sweep; each maps onto the flat config key with
// dashes replaced by underscores.
struct RunFlags {
  std::map<std::string, std::string> scalars;
  std::vector<std::string> eval_k;
  std::string config;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "flat JSON config; flags override it");
    static const std::pair<const char*, const char*> kFlags[] = {
        {"algo", "gsfw|rcmd|fw|sfw|svrf|scgm"},
        {"loss", "logistic|squared"},
        {"reg", "l1ball|l2ball|simplex|quadball"},
        {"delta", "ball radius"},
        {"mu", "quadball modulus"},
        {"rho", "quadball radius"},
        {"schedule", "nonstrong|strong"},
        {"batch", "batch size as a fraction of n"},
        {"batch-size", "absolute batch size"},
        {"max-iters", "iteration budget"},
        {"max-sg-calls", "sample-gradient budget"},
        {"gap-target", "stop when the gap (or P - pstar) reaches this"},
        {"pstar", "reference optimal value"},
        {"eval-stride", "evaluate every this many iterations"},
        {"seed", "random seed"},
        {"data", "LIBSVM file or name under $GSFW_DATA_DIR"},
        {"min-p", "minimum feature count"},
        {"synth-n", "synthetic samples"},
        {"synth-p", "synthetic features"},
        {"synth-density", "synthetic density"},
        {"synth-seed", "synthetic data seed"},
    };
    for (const auto& [name, help] : kFlags) {
      app->add_option(std::string("--") + name, scalars[name], help);
    }
    app->add_option("--eval-k", eval_k, "extra report indices k to evaluate");
  }

  json to_json(CLI::App* app) const {
    static const char* kStrings[] = {"algo", "loss", "reg", "schedule", "data"};
    json j = json::object();
    for (const auto& [name, value] : scalars) {
      if (app->get_option("--" + name)->count() == 0) continue;
      std::string key = name;
      for (char& c : key) c = c == '-' ? '_' : c;
      bool is_string = false;
      for (const char* s : kStrings) is_string = is_string || key == s;
      if (is_string) {
        j[key] = value;
        continue;
      }
      json v = json::parse(value, nullptr, false);
      if (v.is_discarded() || !v.is_number()) {
        throw gsfw::ConfigError("--" + name + " expects a number, got '" + value + "'");
      }
      j[key] = v;
    }
    if (!eval_k.empty()) {
      json arr = json::array();
      for (const auto& k : eval_k) arr.push_back(std::stoull(k));
      j["eval_k"] = arr;
    }
    return j;
  }

  json merged(CLI::App* app) const {
    json base = config.empty() ? json::object() : gsfw::load_json_object(config);
    return gsfw::merge_flat(base, to_json(app));
  }
};

std::string output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("GSFW_OUTPUT_DIR")) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized stochastic Frank-Wolfe benchmark harness"};
  app.require_subcommand(1);

  RunFlags run_flags;
  std::string run_out, run_out_dir;
  auto* run_cmd = app.add_subcommand("run", "run one solver and write a CSV trace");
  run_flags.attach(run_cmd);
  run_cmd->add_option("--out", run_out, "trace file name (default <algo>_seed<seed>.csv)");
  run_cmd->add_option("--out-dir", run_out_dir, "output directory (default $GSFW_OUTPUT_DIR or .)");

  RunFlags sweep_flags;
  std::vector<std::string> sweep_algos;
  std::vector<std::uint64_t> sweep_seeds;
  std::string sweep_out_dir;
  auto* sweep_cmd = app.add_subcommand("sweep", "run every (algo, seed) pair and aggregate");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--algos", sweep_algos, "algorithms to run");
  sweep_cmd->add_option("--seeds", sweep_seeds, "seeds to run");
  sweep_cmd->add_option("--out-dir", sweep_out_dir, "output directory (default $GSFW_OUTPUT_DIR or .)");

  std::vector<std::string> bound_traces;
  std::vector<std::size_t> bound_ks;
  std::map<std::string, double> bound_over;
  auto* bounds_cmd = app.add_subcommand("check-bounds", "compare seed-mean gaps with the convergence bound");
  bounds_cmd->add_option("traces", bound_traces, "trace CSVs with .meta.json sidecars")->required();
  bounds_cmd->add_option("--k", bound_ks, "report indices to check (default: all shared)");
  for (const char* c : {"M", "dmax", "gamma", "n-eff", "sigma"}) {
    bounds_cmd->add_option(std::string("--") + c, bound_over[c], std::string("override ") + c);
  }

  std::size_t eq_n = 20, eq_p = 5, eq_iters = 500;
  std::vector<std::uint64_t> eq_seeds{1, 2, 3, 4, 5};
  auto* eq_cmd = app.add_subcommand("equivalence", "check the primal and dual iterations agree");
  eq_cmd->add_option("--n", eq_n, "samples")->capture_default_str();
  eq_cmd->add_option("--p", eq_p, "features")->capture_default_str();
  eq_cmd->add_option("--iters", eq_iters, "iterations")->capture_default_str();
  eq_cmd->add_option("--seeds,--seed", eq_seeds, "seeds")->capture_default_str();

  RunFlags opt_flags;
  double opt_tol = 1e-11;
  auto* opt_cmd = app.add_subcommand("optimum", "certified reference optimum of the primal problem");
  opt_flags.attach(opt_cmd);
  opt_cmd->add_option("--tol", opt_tol, "certified gap tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gsfw::exit_code::kConfig;
  }

  try {
    if (run_cmd->parsed()) {
      const gsfw::RunConfig cfg = gsfw::run_config_from_json(run_flags.merged(run_cmd));
      const std::string dir = output_dir(run_out_dir);
      std::string path = gsfw::default_trace_path(dir, cfg.algo, cfg.seed);
      if (!run_out.empty()) {
        path = std::filesystem::path(run_out).is_absolute()
                   ? run_out
                   : (std::filesystem::path(dir) / run_out).string();
      }
      return gsfw::cmd_run(cfg, path, std::cout);
    }
    if (sweep_cmd->parsed()) {
      json j = sweep_flags.merged(sweep_cmd);
      if (!sweep_algos.empty()) j["algos"] = sweep_algos;
      if (!sweep_seeds.empty()) j["seeds"] = sweep_seeds;
      std::string dir = sweep_out_dir;
      if (dir.empty() && j.contains("out_dir")) dir = j["out_dir"].get<std::string>();
      const gsfw::SweepConfig cfg = gsfw::sweep_config_from_json(j);
      return gsfw::cmd_sweep(cfg, output_dir(dir), std::cout);
    }
    if (bounds_cmd->parsed()) {
      gsfw::BoundCheckOptions opt;
      opt.ks = bound_ks;
      auto given = [&](const char* name) { return bounds_cmd->get_option(std::string("--") + name)->count() > 0; };
      if (given("M")) opt.M = bound_over["M"];
      if (given("dmax")) opt.dmax = bound_over["dmax"];
      if (given("gamma")) opt.gamma = bound_over["gamma"];
      if (given("n-eff")) opt.n_eff = bound_over["n-eff"];
      if (given("sigma")) opt.sigma = bound_over["sigma"];
      return gsfw::cmd_check_bounds(bound_traces, opt, std::cout);
    }
    if (eq_cmd->parsed()) return gsfw::cmd_equivalence(eq_n, eq_p, eq_iters, eq_seeds, std::cout);
    if (opt_cmd->parsed()) {
      const gsfw::RunConfig cfg = gsfw::run_config_from_json(opt_flags.merged(opt_cmd));
      const gsfw::Dataset ds = gsfw::resolve_dataset(cfg);
      const gsfw::Regularizer reg = gsfw::make_regularizer(cfg.reg);
      const gsfw::LossFamily lf = gsfw::LossFamily::for_dataset(cfg.loss, ds);
      const auto res = gsfw::reference_optimum(gsfw::Problem(ds, lf, reg), opt_tol);
      std::cout << "pstar=" << gsfw::format_double(res.primal)
                << " certified_gap=" << gsfw::format_double(res.gap) << " iters=" << res.iters << '\n';
      return gsfw::exit_code::kOk;
    }
  } catch (const gsfw::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return gsfw::exit_code::kIo;
  } catch (const gsfw::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return gsfw::exit_code::kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return gsfw::exit_code::kConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return gsfw::exit_code::kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
