#include "dppsum/dpp.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dppsum {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Matrix principal_minor(const Matrix& m, const Selection& idx) {
  Matrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out(i, j) = m(idx[i], idx[j]);
    }
  }
  return out;
}

void require_square_symmetric(const Matrix& kernel) {
  if (kernel.rows() != kernel.cols()) {
    throw std::invalid_argument("kernel matrix must be square");
  }
  // Entrywise check is O(N^2); the eigenvalue PSD check stays opt-in.
  const Eigen::Index n = kernel.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double tol = 1e-9 * std::max(1.0, std::abs(kernel(i, j)));
      if (std::abs(kernel(i, j) - kernel(j, i)) > tol) {
        throw std::invalid_argument("kernel matrix is not symmetric");
      }
    }
  }
}

}  // namespace

double log_det_psd(const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;  // det of an empty matrix is 1 by convention
  Eigen::LDLT<Matrix> ldlt(a);
  const Vector d = ldlt.vectorD();
  const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
  const double zero_tol = 1e-12 * scale;
  const double indef_tol = 1e-8 * scale;
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d(i) < -indef_tol) {
      throw NumericalError("matrix is indefinite beyond tolerance");
    }
    if (d(i) <= zero_tol) return kNegInf;
    log_det += std::log(d(i));
  }
  return log_det;
}

double log_partition(const Matrix& kernel) {
  require_square_symmetric(kernel);
  const Eigen::Index n = kernel.rows();
  Matrix shifted = kernel + Matrix::Identity(n, n);
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-10 * kernel.trace() / static_cast<double>(n);
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("log_partition: factorization of L + I failed");
    }
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double subset_log_prob(const Matrix& kernel, const Selection& subset) {
  require_square_symmetric(kernel);
  validate_selection(subset, static_cast<int>(kernel.rows()));
  const double log_norm = log_partition(kernel);
  if (subset.empty()) return -log_norm;
  return log_det_psd(principal_minor(kernel, subset)) - log_norm;
}

Selection map_exact(const Matrix& kernel) {
  require_square_symmetric(kernel);
  const int n = static_cast<int>(kernel.rows());
  if (n > 20) {
    throw std::invalid_argument("map_exact: dimension exceeds the 2^20 enumeration guard");
  }

  // Empty set: det = 1, log det = 0.
  Selection best;
  double best_log_det = 0.0;
  const double tie_tol = 1e-12;

  Selection candidate;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    candidate.clear();
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) candidate.push_back(i);
    }
    double log_det;
    try {
      log_det = log_det_psd(principal_minor(kernel, candidate));
    } catch (const NumericalError&) {
      continue;  // indefinite minor: cannot beat the PSD-feasible optimum
    }
    if (log_det == kNegInf) continue;
    if (log_det > best_log_det + tie_tol) {
      best = candidate;
      best_log_det = log_det;
    } else if (std::abs(log_det - best_log_det) <= tie_tol &&
               (candidate.size() < best.size() ||
                (candidate.size() == best.size() &&
                 std::lexicographical_compare(candidate.begin(), candidate.end(),
                                              best.begin(), best.end())))) {
      best = candidate;
    }
  }
  return best;
}

Selection map_greedy(const Matrix& kernel) {
  require_square_symmetric(kernel);
  const int n = static_cast<int>(kernel.rows());
  const double gain_tol = 1e-9;

  // Incremental Cholesky of L_y: d holds each candidate's remaining Schur
  // complement, rows holds the factor coefficients of selected items.
  Vector d = kernel.diagonal();
  std::vector<Vector> rows;
  std::vector<bool> taken(n, false);
  Selection selected;

  for (int round = 0; round < n; ++round) {
    int best = -1;
    double best_gain = 1.0 + gain_tol;
    for (int j = 0; j < n; ++j) {
      if (!taken[j] && d(j) > best_gain) {
        best = j;
        best_gain = d(j);
      }
    }
    if (best < 0) break;

    const double pivot = std::sqrt(d(best));
    Vector coeff(n);
    for (int j = 0; j < n; ++j) {
      if (taken[j]) {
        coeff(j) = 0.0;
        continue;
      }
      double dot = 0.0;
      for (const Vector& r : rows) dot += r(best) * r(j);
      coeff(j) = (kernel(best, j) - dot) / pivot;
    }
    for (int j = 0; j < n; ++j) {
      if (!taken[j]) d(j) -= coeff(j) * coeff(j);
    }
    rows.push_back(std::move(coeff));
    taken[best] = true;
    selected.push_back(best);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

Matrix condition_on(const Matrix& kernel, const Selection& forced) {
  require_square_symmetric(kernel);
  const int n = static_cast<int>(kernel.rows());
  validate_selection(forced, n);
  if (forced.empty()) return kernel;

  std::vector<bool> is_forced(n, false);
  for (int idx : forced) is_forced[idx] = true;
  Selection rest;
  for (int i = 0; i < n; ++i) {
    if (!is_forced[i]) rest.push_back(i);
  }

  Matrix shifted = kernel;
  for (int i : rest) shifted(i, i) += 1.0;

  Eigen::LDLT<Matrix> ldlt(shifted);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "condition_on: forced set of size " << forced.size() << " has zero probability";
    throw NumericalError(msg.str());
  }
  const Matrix inv = ldlt.solve(Matrix::Identity(n, n));

  const Eigen::Index m = static_cast<Eigen::Index>(rest.size());
  if (m == 0) return Matrix(0, 0);
  Matrix sub = principal_minor(inv, rest);
  Eigen::LDLT<Matrix> sub_ldlt(sub);
  if (sub_ldlt.info() != Eigen::Success || sub_ldlt.vectorD().minCoeff() <= 0.0) {
    throw NumericalError("condition_on: conditional kernel is singular");
  }
  Matrix conditional = sub_ldlt.solve(Matrix::Identity(m, m)) - Matrix::Identity(m, m);
  conditional = 0.5 * (conditional + conditional.transpose()).eval();
  return conditional;
}

}  // namespace dppsum
