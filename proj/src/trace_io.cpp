#include "gsfw/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gsfw/error.hpp"
#include "json.hpp"

namespace gsfw {

namespace {

template <class T>
T parse_field(std::string_view tok, std::size_t line, const char* name) {
  T v{};
  const auto* end = tok.data() + tok.size();
  const auto r = std::from_chars(tok.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    throw ParseError(line, std::string("bad ") + name + " field '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(',', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, r.ptr};
}

void write_trace_header(std::ostream& out) { out << kTraceHeader << '\n'; }

void write_trace_row(std::ostream& out, const TraceRecord& r) {
  out << r.algo << ',' << r.seed << ',' << r.iter << ',' << r.sg_calls << ',' << r.loo_calls << ','
      << r.full_grad_calls << ',' << format_double(r.primal) << ',' << format_double(r.dual) << ','
      << format_double(r.gap) << ',' << r.wall_ns << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records) {
  write_trace_header(out);
  for (const auto& r : records) write_trace_row(out, r);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(1, "empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw ParseError(1, "unexpected trace header '" + line + "'");
  std::vector<TraceRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 10) throw ParseError(lineno, "expected 10 fields");
    TraceRecord r;
    r.algo = std::string(f[0]);
    r.seed = parse_field<std::uint64_t>(f[1], lineno, "seed");
    r.iter = parse_field<std::size_t>(f[2], lineno, "iter");
    r.sg_calls = parse_field<std::uint64_t>(f[3], lineno, "sg_calls");
    r.loo_calls = parse_field<std::uint64_t>(f[4], lineno, "loo_calls");
    r.full_grad_calls = parse_field<std::uint64_t>(f[5], lineno, "full_grad_calls");
    r.primal = parse_field<double>(f[6], lineno, "primal");
    r.dual = parse_field<double>(f[7], lineno, "dual");
    r.gap = parse_field<double>(f[8], lineno, "gap");
    r.wall_ns = parse_field<std::int64_t>(f[9], lineno, "wall_ns");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TraceRecord> load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace '" + path + "'");
  return read_trace_csv(in);
}

std::string meta_path_for(const std::string& csv_path) { return csv_path + ".meta.json"; }

void write_meta_json(const std::string& path, const TraceMeta& m) {
  nlohmann::ordered_json j;
  j["algo"] = m.algo;
  j["loss"] = m.loss;
  j["reg"] = m.reg;
  j["schedule"] = m.schedule;
  j["data"] = m.data;
  j["rng"] = m.rng;
  j["step_rule"] = m.step_rule;
  j["n"] = m.n;
  j["p"] = m.p;
  j["batch"] = m.batch;
  j["n_eff"] = m.n_eff;
  j["gamma"] = m.gamma;
  j["M"] = m.M;
  j["dmax"] = m.dmax;
  j["sigma"] = m.sigma;
  j["k_offset"] = m.k_offset;
  j["seed"] = m.seed;
  j["diag_loo_calls"] = m.diag_loo_calls;
  j["reference_primal"] = m.reference_primal ? nlohmann::ordered_json(*m.reference_primal)
                                             : nlohmann::ordered_json(nullptr);
  j["stop_reason"] = m.stop_reason;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

TraceMeta read_meta_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metadata '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
    TraceMeta m;
    m.algo = j.at("algo").get<std::string>();
    m.loss = j.at("loss").get<std::string>();
    m.reg = j.at("reg").get<std::string>();
    m.schedule = j.at("schedule").get<std::string>();
    m.data = j.value("data", "");
    m.rng = j.value("rng", "");
    m.step_rule = j.value("step_rule", "");
    m.n = j.at("n").get<std::size_t>();
    m.p = j.at("p").get<std::size_t>();
    m.batch = j.at("batch").get<std::size_t>();
    m.n_eff = j.at("n_eff").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.M = j.at("M").get<double>();
    m.dmax = j.at("dmax").get<double>();
    m.sigma = j.at("sigma").get<double>();
    m.k_offset = j.at("k_offset").get<std::int64_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.diag_loo_calls = j.value("diag_loo_calls", std::uint64_t{0});
    if (j.contains("reference_primal") && !j["reference_primal"].is_null()) {
      m.reference_primal = j["reference_primal"].get<double>();
    }
    m.stop_reason = j.value("stop_reason", "");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed metadata '" + path + "': " + e.what());
  }
}

}  // namespace gsfw
