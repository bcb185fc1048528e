#ifndef DPPSUM_TYPES_HPP
#define DPPSUM_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace dppsum {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Zero-based item indices into a ground set, strictly increasing.
using Selection = std::vector<int>;

/// Numerical failure (factorization breakdown, singular conditioning, ...).
/// Distinct from input validation errors, which are std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument unless `s` is sorted ascending, duplicate-free
/// and every index lies in [0, ground_size).
void validate_selection(const Selection& s, int ground_size);

/// Checks the kernel contract: square, entrywise symmetric within
/// 1e-9 * max(1, |L_ij|), and smallest eigenvalue >= -1e-8 * (trace/N).
void validate_kernel(const Matrix& kernel);

/// Frame descriptors, one row per frame. Must be non-empty and finite.
void validate_features(const Matrix& frames);

/// True when every row of `frames` has Euclidean norm within `tol` of 1.
bool is_unit_norm(const Matrix& frames, double tol);

/// Elementwise Kahan accumulator for order-robust matrix sums.
class KahanMatrixSum {
 public:
  KahanMatrixSum(Eigen::Index rows, Eigen::Index cols)
      : sum_(Matrix::Zero(rows, cols)), comp_(Matrix::Zero(rows, cols)) {}

  void add(const Matrix& term);
  const Matrix& value() const { return sum_; }

 private:
  Matrix sum_;
  Matrix comp_;
};

}  // namespace dppsum

#endif  // DPPSUM_TYPES_HPP
