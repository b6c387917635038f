#ifndef GSFW_TRACE_IO_HPP_
#define GSFW_TRACE_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "gsfw/run.hpp"

namespace gsfw {

inline constexpr const char* kTraceHeader =
    "algo,seed,iter,sg_calls,loo_calls,full_grad_calls,primal,dual,gap,wall_ns";

/// 17 significant digits, independent of locale.
std::string format_double(double v);

void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const TraceRecord& rec);
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records);

/// Parses a trace CSV; throws ParseError on a wrong header or malformed row.
std::vector<TraceRecord> read_trace_csv(std::istream& in);
std::vector<TraceRecord> load_trace_csv(const std::string& path);

/// Sidecar `<csv>.meta.json`.
std::string meta_path_for(const std::string& csv_path);
void write_meta_json(const std::string& path, const TraceMeta& meta);
TraceMeta read_meta_json(const std::string& path);

}  // namespace gsfw

#endif  // GSFW_TRACE_IO_HPP_
