#include "gsfw/config.hpp"

#include <fstream>
#include <set>

#include "gsfw/error.hpp"

namespace gsfw {

namespace {

const std::set<std::string>& run_keys() {
  static const std::set<std::string> keys{
      "algo",       "loss",        "reg",     "delta",      "mu",         "rho",
      "schedule",   "batch",       "batch_size", "max_iters", "max_sg_calls", "gap_target",
      "pstar",      "eval_stride", "eval_k",  "seed",       "data",       "min_p",
      "synth_n",    "synth_p",     "synth_density", "synth_seed"};
  return keys;
}

template <class T>
T get_as(const nlohmann::json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

RunConfig parse_run_keys(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("algo")) c.algo = parse_algo(get_as<std::string>(j, "algo"));
  if (j.contains("loss")) c.loss = parse_loss(get_as<std::string>(j, "loss"));
  if (j.contains("reg")) c.reg.kind = get_as<std::string>(j, "reg");
  if (j.contains("delta")) c.reg.delta = get_as<double>(j, "delta");
  if (j.contains("mu")) c.reg.mu = get_as<double>(j, "mu");
  if (j.contains("rho")) c.reg.rho = get_as<double>(j, "rho");
  if (j.contains("schedule")) c.schedule = parse_schedule(get_as<std::string>(j, "schedule"));
  if (j.contains("batch")) c.batch_fraction = get_as<double>(j, "batch");
  if (j.contains("batch_size")) c.batch_size = get_as<std::size_t>(j, "batch_size");
  if (j.contains("max_iters")) c.max_iters = get_as<std::size_t>(j, "max_iters");
  if (j.contains("max_sg_calls")) c.max_sg_calls = get_as<std::uint64_t>(j, "max_sg_calls");
  if (j.contains("gap_target")) c.gap_target = get_as<double>(j, "gap_target");
  if (j.contains("pstar")) c.reference_primal = get_as<double>(j, "pstar");
  if (j.contains("eval_stride")) c.eval_stride = get_as<std::size_t>(j, "eval_stride");
  if (j.contains("eval_k")) c.eval_k = get_as<std::vector<std::size_t>>(j, "eval_k");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("data")) c.data = get_as<std::string>(j, "data");
  if (j.contains("min_p")) c.min_p = get_as<std::size_t>(j, "min_p");
  const bool synth = j.contains("synth_n") || j.contains("synth_p") ||
                     j.contains("synth_density") || j.contains("synth_seed");
  if (synth) {
    SynthSpec s;
    if (j.contains("synth_n")) s.n = get_as<std::size_t>(j, "synth_n");
    if (j.contains("synth_p")) s.p = get_as<std::size_t>(j, "synth_p");
    if (j.contains("synth_density")) s.density = get_as<double>(j, "synth_density");
    if (j.contains("synth_seed")) s.seed = get_as<std::uint64_t>(j, "synth_seed");
    c.synth = s;
  }
  return c;
}

void check_keys(const nlohmann::json& j, bool sweep) {
  if (!j.is_object()) throw ConfigError("config must be a flat JSON object");
  for (const auto& [key, value] : j.items()) {
    const bool known = run_keys().count(key) > 0 ||
                       (sweep && (key == "algos" || key == "seeds" || key == "out_dir"));
    if (!known) throw ConfigError("unknown config key '" + key + "'");
    if (value.is_object()) throw ConfigError("config key '" + key + "' must not be nested");
  }
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
  check_keys(j, false);
  return parse_run_keys(j);
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  check_keys(j, true);
  SweepConfig s;
  auto run_part = j;
  run_part.erase("algos");
  run_part.erase("seeds");
  run_part.erase("out_dir");
  s.base = parse_run_keys(run_part);
  if (j.contains("algos")) {
    for (const auto& a : get_as<std::vector<std::string>>(j, "algos")) s.algos.push_back(parse_algo(a));
  }
  if (j.contains("seeds")) s.seeds = get_as<std::vector<std::uint64_t>>(j, "seeds");
  return s;
}

nlohmann::json run_config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["algo"] = std::string(algo_name(c.algo));
  j["loss"] = std::string(loss_name(c.loss));
  j["reg"] = c.reg.kind;
  j["delta"] = c.reg.delta;
  j["mu"] = c.reg.mu;
  j["rho"] = c.reg.rho;
  j["schedule"] = std::string(schedule_name(c.schedule));
  if (c.batch_fraction) j["batch"] = *c.batch_fraction;
  if (c.batch_size) j["batch_size"] = *c.batch_size;
  j["max_iters"] = c.max_iters;
  j["max_sg_calls"] = c.max_sg_calls;
  j["gap_target"] = c.gap_target;
  if (c.reference_primal) j["pstar"] = *c.reference_primal;
  j["eval_stride"] = c.eval_stride;
  if (!c.eval_k.empty()) j["eval_k"] = c.eval_k;
  j["seed"] = c.seed;
  if (!c.data.empty()) j["data"] = c.data;
  j["min_p"] = c.min_p;
  if (c.synth) {
    j["synth_n"] = c.synth->n;
    j["synth_p"] = c.synth->p;
    j["synth_density"] = c.synth->density;
    j["synth_seed"] = c.synth->seed;
  }
  return j;
}

nlohmann::json load_json_object(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config '" + path + "' must be a JSON object");
  return j;
}

nlohmann::json merge_flat(nlohmann::json base, const nlohmann::json& override_with) {
  for (const auto& [key, value] : override_with.items()) base[key] = value;
  return base;
}

}  // namespace gsfw
