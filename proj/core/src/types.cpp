#include "dppsum/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace dppsum {

void validate_selection(const Selection& s, int ground_size) {
  int prev = -1;
  for (int idx : s) {
    if (idx < 0 || idx >= ground_size) {
      std::ostringstream msg;
      msg << "selection index " << idx << " outside ground set of size " << ground_size;
      throw std::invalid_argument(msg.str());
    }
    if (idx <= prev) {
      throw std::invalid_argument("selection indices must be strictly increasing");
    }
    prev = idx;
  }
}

void validate_kernel(const Matrix& kernel) {
  if (kernel.rows() != kernel.cols()) {
    throw std::invalid_argument("kernel matrix must be square");
  }
  const Eigen::Index n = kernel.rows();
  if (n == 0) return;
  if (!kernel.allFinite()) {
    throw std::invalid_argument("kernel matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double tol = 1e-9 * std::max(1.0, std::abs(kernel(i, j)));
      if (std::abs(kernel(i, j) - kernel(j, i)) > tol) {
        throw std::invalid_argument("kernel matrix is not symmetric");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel, Eigen::EigenvaluesOnly);
  const double scale = kernel.trace() / static_cast<double>(n);
  if (eig.eigenvalues().minCoeff() < -1e-8 * scale) {
    throw std::invalid_argument("kernel matrix is not PSD within tolerance");
  }
}

void validate_features(const Matrix& frames) {
  if (frames.rows() < 1 || frames.cols() < 1) {
    throw std::invalid_argument("feature matrix must be non-empty");
  }
  if (!frames.allFinite()) {
    throw std::invalid_argument("feature matrix has non-finite values");
  }
}

bool is_unit_norm(const Matrix& frames, double tol) {
  for (Eigen::Index i = 0; i < frames.rows(); ++i) {
    if (std::abs(frames.row(i).norm() - 1.0) > tol) return false;
  }
  return true;
}

void KahanMatrixSum::add(const Matrix& term) {
  // Elementwise Kahan update keeps the sum stable under reassociation.
  for (Eigen::Index j = 0; j < sum_.cols(); ++j) {
    for (Eigen::Index i = 0; i < sum_.rows(); ++i) {
      const double y = term(i, j) - comp_(i, j);
      const double t = sum_(i, j) + y;
      comp_(i, j) = (t - sum_(i, j)) - y;
      sum_(i, j) = t;
    }
  }
}

}  // namespace dppsum
