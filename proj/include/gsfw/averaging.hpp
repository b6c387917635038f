#ifndef GSFW_AVERAGING_HPP_
#define GSFW_AVERAGING_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace gsfw {

/**
 * Running weighted average sum_i gamma_i v^i / sum_i gamma_i of a vector
 * sequence in which each step changes only a few coordinates.
 *
 * Each coordinate remembers the cumulative weight at which its current value
 * started; its contribution is folded into `acc` only when it changes, so a
 * step costs O(changed coordinates) and `mean()` costs O(n).
 */
class LazyWeightedAverage {
 public:
  LazyWeightedAverage() = default;
  explicit LazyWeightedAverage(std::span<const double> initial)
      : value_(initial.begin(), initial.end()),
        acc_(initial.size(), 0.0),
        start_(initial.size(), 0.0) {}

  /// Opens step i: the current values receive weight gamma_i.
  void begin_step(double weight) { total_ += weight; }

  /// Replaces coordinate j after the current step's weight was assigned.
  void update(std::size_t j, double new_value) {
    acc_[j] += value_[j] * (total_ - start_[j]);
    start_[j] = total_;
    value_[j] = new_value;
  }

  double total_weight() const { return total_; }

  /// Weighted mean over all opened steps; the current values if none.
  std::vector<double> mean() const {
    std::vector<double> out(value_);
    if (total_ <= 0.0) return out;
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = (acc_[j] + value_[j] * (total_ - start_[j])) / total_;
    }
    return out;
  }

 private:
  std::vector<double> value_;
  std::vector<double> acc_;
  std::vector<double> start_;
  double total_ = 0.0;
};

}  // namespace gsfw

#endif  // GSFW_AVERAGING_HPP_
