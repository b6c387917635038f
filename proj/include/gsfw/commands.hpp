#ifndef GSFW_COMMANDS_HPP_
#define GSFW_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsfw/config.hpp"
#include "gsfw/run.hpp"

namespace gsfw {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kPartialFailure = 1;
inline constexpr int kConfig = 2;
inline constexpr int kIo = 3;
inline constexpr int kCheckFailed = 4;
}  // namespace exit_code

/// `<dir>/<algo>_seed<seed>.csv`.
std::string default_trace_path(const std::string& dir, Algo algo, std::uint64_t seed);

/// Runs one configuration, writing the CSV and its metadata sidecar.
Trace run_to_file(const RunConfig& cfg, const Dataset& ds, const std::string& csv_path);

int cmd_run(const RunConfig& cfg, const std::string& csv_path, std::ostream& log);

struct SweepCell {
  Algo algo;
  std::uint64_t seed;
  std::string path;
  bool ok = false;
  std::string error;
};

struct AggregateRow {
  std::string algo;
  std::uint64_t sg_calls = 0;
  std::size_t seeds = 0;
  double mean_gap = 0.0;
  double mean_primal = 0.0;
};

/// Per-algorithm arithmetic means over seeds at every sg_calls checkpoint
/// that all traces of that algorithm share.
std::vector<AggregateRow> aggregate_traces(const std::vector<std::vector<TraceRecord>>& traces);

/// Runs every (algo, seed) cell, in parallel across cells, then writes
/// `aggregate.csv` from the cells that finished. Failed cells are listed and
/// make the exit code kPartialFailure.
int cmd_sweep(const SweepConfig& cfg, const std::string& out_dir, std::ostream& log,
              std::vector<SweepCell>* cells = nullptr);

struct BoundCheckOptions {
  /// Overrides of the constants recorded in the trace metadata.
  std::optional<double> M, dmax, gamma, n_eff, sigma;
  /// Report indices to check; empty checks every shared checkpoint.
  std::vector<std::size_t> ks;
};

struct BoundCheckLine {
  std::size_t k = 0;
  double mean_gap = 0.0;
  double bound = 0.0;
  std::size_t traces = 0;
  bool pass = false;
};

struct BoundCheckReport {
  std::string schedule;
  std::vector<BoundCheckLine> lines;
  std::size_t skipped = 0;
  bool pass = false;
};

/// Compares the seed-mean gap at each report index k with the bound of the
/// recorded schedule. Throws ConfigError when the traces disagree on the
/// instance constants or a requested k is missing.
BoundCheckReport check_bounds(const std::vector<std::vector<TraceRecord>>& traces,
                              const std::vector<TraceMeta>& metas,
                              const BoundCheckOptions& opt);

int cmd_check_bounds(const std::vector<std::string>& csv_paths, const BoundCheckOptions& opt,
                     std::ostream& log);

struct EquivalenceReport {
  std::size_t iters = 0;
  /// max_i max_j |s_j^i - l_j^*'(w_j^i)|.
  double max_deviation = 0.0;
  /// Iterations whose oracle solutions differ in any coordinate.
  std::size_t oracle_mismatches = 0;
  bool pass = false;
};

EquivalenceReport equivalence_check(std::size_t n, std::size_t p, std::size_t iters,
                                    std::uint64_t seed, double tol = 1e-10);

int cmd_equivalence(std::size_t n, std::size_t p, std::size_t iters,
                    const std::vector<std::uint64_t>& seeds, std::ostream& log);

}  // namespace gsfw

#endif  // GSFW_COMMANDS_HPP_
