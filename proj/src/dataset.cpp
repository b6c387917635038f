#include "gsfw/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string_view>

#include "gsfw/error.hpp"
#include "gsfw/kernels.hpp"
#include "gsfw/rng.hpp"

namespace gsfw {

Dataset Dataset::from_csr(std::size_t p, std::vector<double> y,
                          std::vector<std::size_t> row_ptr,
                          std::vector<std::uint32_t> cols,
                          std::vector<double> vals) {
  if (y.empty()) throw std::invalid_argument("dataset needs at least one sample");
  if (p == 0) throw std::invalid_argument("dataset needs at least one feature");
  if (row_ptr.size() != y.size() + 1 || row_ptr.front() != 0 ||
      row_ptr.back() != cols.size() || cols.size() != vals.size()) {
    throw std::invalid_argument("inconsistent CSR arrays");
  }
  for (std::size_t j = 0; j + 1 < row_ptr.size(); ++j) {
    if (row_ptr[j] > row_ptr[j + 1]) throw std::invalid_argument("row_ptr not monotone");
    for (std::size_t t = row_ptr[j]; t < row_ptr[j + 1]; ++t) {
      if (cols[t] >= p) throw std::invalid_argument("column index out of range");
      if (t > row_ptr[j] && cols[t] <= cols[t - 1]) {
        throw std::invalid_argument("column indices not strictly ascending");
      }
    }
  }
  Dataset ds;
  ds.p_ = p;
  ds.y_ = std::move(y);
  ds.row_ptr_ = std::move(row_ptr);
  ds.cols_ = std::move(cols);
  ds.vals_ = std::move(vals);
  return ds;
}

Dataset Dataset::from_dense(std::size_t p, std::span<const double> values,
                            std::vector<double> y) {
  if (p == 0 || values.size() != y.size() * p) {
    throw std::invalid_argument("dense matrix shape mismatch");
  }
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  for (std::size_t j = 0; j < y.size(); ++j) {
    for (std::size_t k = 0; k < p; ++k) {
      const double v = values[j * p + k];
      if (v != 0.0) {
        cols.push_back(static_cast<std::uint32_t>(k));
        vals.push_back(v);
      }
    }
    row_ptr.push_back(cols.size());
  }
  return from_csr(p, std::move(y), std::move(row_ptr), std::move(cols),
                  std::move(vals));
}

double Dataset::max_row_norm_inf() const {
  double m = 0.0;
  for (double v : vals_) m = std::max(m, std::abs(v));
  return m;
}

double Dataset::max_row_norm_sq() const {
  double m = 0.0;
  for (std::size_t j = 0; j < n(); ++j) {
    double acc = 0.0;
    for (double v : row(j).vals) acc += v * v;
    m = std::max(m, acc);
  }
  return m;
}

double Dataset::max_abs_entry() const { return max_row_norm_inf(); }

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits on blanks without allocating.
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view line) : rest_(line) {}
  bool next(std::string_view& tok) {
    std::size_t i = 0;
    while (i < rest_.size() && is_space(rest_[i])) ++i;
    if (i == rest_.size()) return false;
    std::size_t e = i;
    while (e < rest_.size() && !is_space(rest_[e])) ++e;
    tok = rest_.substr(i, e - i);
    rest_ = rest_.substr(e);
    return true;
  }

 private:
  std::string_view rest_;
};

double parse_double(std::string_view s, std::size_t line, const char* what) {
  // from_chars rejects a leading '+', which LIBSVM labels use.
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, bool expect_binary_labels,
                     std::size_t min_p) {
  std::vector<double> y;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  std::size_t max_index = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    Tokenizer tk(line);
    std::string_view tok;
    if (!tk.next(tok)) continue;
    y.push_back(parse_double(tok, lineno, "label"));

    std::size_t prev = 0;
    while (tk.next(tok)) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0) {
        throw ParseError(lineno, "malformed feature token '" + std::string(tok) + "'");
      }
      std::size_t idx = 0;
      const auto idx_str = tok.substr(0, colon);
      auto [ptr, ec] = std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), idx);
      if (ec != std::errc() || ptr != idx_str.data() + idx_str.size() || idx == 0 ||
          idx > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(lineno, "malformed feature index '" + std::string(idx_str) + "'");
      }
      if (idx <= prev) {
        throw ParseError(lineno, idx == prev ? "duplicate feature index " + std::to_string(idx)
                                             : "feature indices not ascending");
      }
      prev = idx;
      cols.push_back(static_cast<std::uint32_t>(idx - 1));
      vals.push_back(parse_double(tok.substr(colon + 1), lineno, "feature value"));
      max_index = std::max(max_index, idx);
    }
    row_ptr.push_back(cols.size());
  }
  if (in.bad()) throw IoError("read failure while parsing LIBSVM data");
  if (y.empty()) throw ParseError(lineno, "empty file");

  if (expect_binary_labels) {
    std::set<double> distinct(y.begin(), y.end());
    if (distinct.size() > 2) {
      throw ParseError(lineno, "more than two distinct labels for a binary problem");
    }
    const bool already_signed =
        std::all_of(distinct.begin(), distinct.end(), [](double v) { return v == 1.0 || v == -1.0; });
    if (!already_signed) {
      if (distinct.size() < 2) {
        throw ParseError(lineno, "cannot map a single label value other than +-1 to {-1,+1}");
      }
      const double low = *distinct.begin();
      for (double& v : y) v = (v == low) ? -1.0 : 1.0;
    }
  }
  const std::size_t p = std::max({max_index, min_p, std::size_t{1}});
  return Dataset::from_csr(p, std::move(y), std::move(row_ptr), std::move(cols),
                           std::move(vals));
}

Dataset load_libsvm(const std::string& path, bool expect_binary_labels,
                    std::size_t min_p) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  return parse_libsvm(in, expect_binary_labels, min_p);
}

namespace {
void put_double(std::ostream& out, double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.write(buf, r.ptr - buf);
}
}  // namespace

void write_libsvm(const Dataset& ds, std::ostream& out) {
  for (std::size_t j = 0; j < ds.n(); ++j) {
    put_double(out, ds.y()[j]);
    const auto r = ds.row(j);
    for (std::size_t t = 0; t < r.nnz(); ++t) {
      out << ' ' << (r.cols[t] + 1) << ':';
      put_double(out, r.vals[t]);
    }
    out << '\n';
  }
}

Dataset synth_dataset(std::size_t n, std::size_t p, double density,
                      LossKind loss, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("density must lie in (0, 1]");
  }
  if (n == 0 || p == 0) throw std::invalid_argument("n and p must be positive");
  Rng rng(seed, 0x5e7);
  Rng model_rng = rng.split(1);
  std::vector<double> planted(p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (double& b : planted) b = scale * model_rng.normal();

  std::vector<double> y(n);
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  for (std::size_t j = 0; j < n; ++j) {
    double margin = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      if (density < 1.0 && rng.uniform() >= density) continue;
      const double v = rng.normal();
      cols.push_back(static_cast<std::uint32_t>(k));
      vals.push_back(v);
      margin += v * planted[k];
    }
    row_ptr.push_back(cols.size());
    const double noisy = margin + 0.1 * rng.normal();
    y[j] = loss == LossKind::kLogistic ? (noisy >= 0.0 ? 1.0 : -1.0) : noisy;
  }
  return Dataset::from_csr(p, std::move(y), std::move(row_ptr), std::move(cols),
                           std::move(vals));
}

double row_dot(const Dataset& ds, std::size_t j, std::span<const double> beta) {
  if (j >= ds.n()) throw std::out_of_range("sample index out of range");
  const auto r = ds.row(j);
  double acc = 0.0;
  for (std::size_t t = 0; t < r.nnz(); ++t) acc += r.vals[t] * beta[r.cols[t]];
  return acc;
}

void axpy_row(std::span<double> d, const Dataset& ds, std::size_t j,
              double coeff) {
  if (j >= ds.n()) throw std::out_of_range("sample index out of range");
  const auto r = ds.row(j);
  for (std::size_t t = 0; t < r.nnz(); ++t) d[r.cols[t]] += coeff * r.vals[t];
}

std::vector<double> weighted_columns(const Dataset& ds,
                                     std::span<const double> w) {
  if (w.size() != ds.n()) throw std::invalid_argument("weight vector length must equal n");
  std::vector<double> out(ds.p());
  kernels::serial::weighted_columns(ds, w, out);
  return out;
}

}  // namespace gsfw
