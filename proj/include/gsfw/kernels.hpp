#ifndef GSFW_KERNELS_HPP_
#define GSFW_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "gsfw/dataset.hpp"

namespace gsfw {
namespace kernels {

// Full-pass kernels over the design matrix. `serial` is the reference;
// `parallel` splits rows into fixed blocks of kBlockRows and combines block
// partials in block order, so its output does not depend on the number of
// OpenMP threads (it can differ from `serial` by rounding only).

inline constexpr std::size_t kBlockRows = 1024;

namespace serial {

/// out = X beta.
void predict(const Dataset& ds, std::span<const double> beta, std::span<double> out);

/// out = (1/n) X^T w.
void weighted_columns(const Dataset& ds, std::span<const double> w, std::span<double> out);

}  // namespace serial

namespace parallel {

void predict(const Dataset& ds, std::span<const double> beta, std::span<double> out);

void weighted_columns(const Dataset& ds, std::span<const double> w, std::span<double> out);

/// Sum of values[j] in fixed blocks; deterministic for any thread count.
double blocked_sum(std::span<const double> values);

}  // namespace parallel

}  // namespace kernels
}  // namespace gsfw

#endif  // GSFW_KERNELS_HPP_
