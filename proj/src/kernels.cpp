#include "gsfw/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace gsfw {
namespace kernels {

namespace {
void check_sizes(const Dataset& ds, std::size_t in, std::size_t in_expected,
                 std::size_t out, std::size_t out_expected) {
  if (in != in_expected || out != out_expected) {
    throw std::invalid_argument("kernel dimension mismatch");
  }
  (void)ds;
}

std::size_t block_count(std::size_t rows) {
  return (rows + kBlockRows - 1) / kBlockRows;
}
}  // namespace

namespace serial {

void predict(const Dataset& ds, std::span<const double> beta, std::span<double> out) {
  check_sizes(ds, beta.size(), ds.p(), out.size(), ds.n());
  const auto rp = ds.row_ptr();
  const auto cols = ds.cols();
  const auto vals = ds.vals();
  for (std::size_t j = 0; j < ds.n(); ++j) {
    double acc = 0.0;
    for (std::size_t t = rp[j]; t < rp[j + 1]; ++t) acc += vals[t] * beta[cols[t]];
    out[j] = acc;
  }
}

void weighted_columns(const Dataset& ds, std::span<const double> w, std::span<double> out) {
  check_sizes(ds, w.size(), ds.n(), out.size(), ds.p());
  std::fill(out.begin(), out.end(), 0.0);
  const auto rp = ds.row_ptr();
  const auto cols = ds.cols();
  const auto vals = ds.vals();
  for (std::size_t j = 0; j < ds.n(); ++j) {
    const double wj = w[j];
    if (wj == 0.0) continue;
    for (std::size_t t = rp[j]; t < rp[j + 1]; ++t) out[cols[t]] += wj * vals[t];
  }
  const double inv_n = 1.0 / static_cast<double>(ds.n());
  for (double& v : out) v *= inv_n;
}

}  // namespace serial

namespace parallel {

void predict(const Dataset& ds, std::span<const double> beta, std::span<double> out) {
  check_sizes(ds, beta.size(), ds.p(), out.size(), ds.n());
  const auto rp = ds.row_ptr();
  const auto cols = ds.cols();
  const auto vals = ds.vals();
  const auto n = static_cast<std::ptrdiff_t>(ds.n());
  // Rows are independent, so any schedule gives bitwise-serial results.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t t = rp[j]; t < rp[j + 1]; ++t) acc += vals[t] * beta[cols[t]];
    out[j] = acc;
  }
}

void weighted_columns(const Dataset& ds, std::span<const double> w, std::span<double> out) {
  check_sizes(ds, w.size(), ds.n(), out.size(), ds.p());
  const std::size_t p = ds.p();
  const std::size_t blocks = block_count(ds.n());
  std::vector<double> partial(blocks * p, 0.0);
  const auto rp = ds.row_ptr();
  const auto cols = ds.cols();
  const auto vals = ds.vals();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    double* acc = partial.data() + static_cast<std::size_t>(b) * p;
    const std::size_t lo = static_cast<std::size_t>(b) * kBlockRows;
    const std::size_t hi = std::min(ds.n(), lo + kBlockRows);
    for (std::size_t j = lo; j < hi; ++j) {
      const double wj = w[j];
      if (wj == 0.0) continue;
      for (std::size_t t = rp[j]; t < rp[j + 1]; ++t) acc[cols[t]] += wj * vals[t];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(ds.n());
  for (std::size_t k = 0; k < p; ++k) {
    double s = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) s += partial[b * p + k];
    out[k] = s * inv_n;
  }
}

double blocked_sum(std::span<const double> values) {
  const std::size_t blocks = block_count(values.size());
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlockRows;
    const std::size_t hi = std::min(values.size(), lo + kBlockRows);
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) s += values[j];
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace parallel

}  // namespace kernels
}  // namespace gsfw
