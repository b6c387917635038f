#ifndef GSFW_DATASET_HPP_
#define GSFW_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gsfw {

enum class LossKind { kLogistic, kSquared };

/// One stored nonzero view of a sparse row.
struct SparseRow {
  std::span<const std::uint32_t> cols;
  std::span<const double> vals;
  std::size_t nnz() const { return cols.size(); }
};

/**
 * Labels plus a compressed sparse-row design matrix.
 *
 * Column indices are 0-based and strictly ascending within each row. The
 * object is immutable once built; `from_csr` validates every invariant.
 */
class Dataset {
 public:
  static Dataset from_csr(std::size_t p, std::vector<double> y,
                          std::vector<std::size_t> row_ptr,
                          std::vector<std::uint32_t> cols,
                          std::vector<double> vals);

  /// Dense row-major input, zeros dropped. Convenient for tests.
  static Dataset from_dense(std::size_t p, std::span<const double> values,
                            std::vector<double> y);

  std::size_t n() const { return y_.size(); }
  std::size_t p() const { return p_; }
  std::size_t nnz() const { return cols_.size(); }
  std::span<const double> y() const { return y_; }

  SparseRow row(std::size_t j) const {
    const std::size_t b = row_ptr_[j], e = row_ptr_[j + 1];
    return {{cols_.data() + b, e - b}, {vals_.data() + b, e - b}};
  }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::uint32_t> cols() const { return cols_; }
  std::span<const double> vals() const { return vals_; }

  double max_row_norm_inf() const;
  double max_row_norm_sq() const;
  double max_abs_entry() const;

 private:
  Dataset() = default;

  std::size_t p_ = 0;
  std::vector<double> y_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

/**
 * Reads LIBSVM text: `<label> <idx>:<val> ...` per line, 1-based ascending
 * indices, blank lines skipped, `\n` or `\r\n` endings. The feature count is
 * the largest index seen, or `min_p` when that is larger. With
 * `expect_binary_labels`, labels already in {-1,+1} are kept and any other
 * pair of distinct values is mapped smaller -> -1, larger -> +1.
 */
Dataset parse_libsvm(std::istream& in, bool expect_binary_labels,
                     std::size_t min_p = 0);

Dataset load_libsvm(const std::string& path, bool expect_binary_labels,
                    std::size_t min_p = 0);

/// Writes LIBSVM text with 17 significant digits, so parsing restores the
/// stored doubles exactly.
void write_libsvm(const Dataset& ds, std::ostream& out);

/**
 * Seeded synthetic instance: each entry of X is present with probability
 * `density` and drawn N(0,1). Labels come from a planted model beta* ~ N(0, 1/p)
 * through sign(x^T beta* + 0.1 eps) for logistic loss and x^T beta* + 0.1 eps
 * for squared loss.
 */
Dataset synth_dataset(std::size_t n, std::size_t p, double density,
                      LossKind loss, std::uint64_t seed);

/// x_j^T beta over the stored nonzeros of row j.
double row_dot(const Dataset& ds, std::size_t j, std::span<const double> beta);

/// d += coeff * x_j, touching only the nonzero columns of row j.
void axpy_row(std::span<double> d, const Dataset& ds, std::size_t j,
              double coeff);

/// (1/n) X^T w.
std::vector<double> weighted_columns(const Dataset& ds,
                                     std::span<const double> w);

}  // namespace gsfw

#endif  // GSFW_DATASET_HPP_
