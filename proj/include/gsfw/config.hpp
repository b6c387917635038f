#ifndef GSFW_CONFIG_HPP_
#define GSFW_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gsfw/run.hpp"
#include "json.hpp"

namespace gsfw {

/**
 * Flat JSON configuration. Keys mirror the long CLI flags with dashes turned
 * into underscores:
 *
 *   algo, loss, reg, delta, mu, rho, schedule, batch, batch_size, max_iters,
 *   max_sg_calls, gap_target, pstar, eval_stride, eval_k, seed, data, min_p,
 *   synth_n, synth_p, synth_density, synth_seed
 *
 * and for sweeps additionally `algos`, `seeds`, `out_dir`. Unknown keys are
 * rejected with ConfigError.
 */
struct SweepConfig {
  RunConfig base;
  std::vector<Algo> algos;
  std::vector<std::uint64_t> seeds;
};

RunConfig run_config_from_json(const nlohmann::json& j);
SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);

/// Reads a JSON object from disk; IoError if unreadable, ConfigError if malformed.
nlohmann::json load_json_object(const std::string& path);

/// `base` updated with every key of `override_with`.
nlohmann::json merge_flat(nlohmann::json base, const nlohmann::json& override_with);

}  // namespace gsfw

#endif  // GSFW_CONFIG_HPP_
