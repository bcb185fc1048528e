#include "dppsum/similarity.hpp"

#include "dppsum/segments.hpp"

#include <cmath>
#include <sstream>

namespace dppsum {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    std::ostringstream msg;
    msg << "feature dimension mismatch: " << a << " vs " << b;
    throw std::invalid_argument(msg.str());
  }
}

// Pairwise squared quadratic-form distances (u-v)' Omega (u-v) for all rows,
// expanded as u'Ou + v'Ov - 2 u'Ov.
Matrix quadratic_distances(const Matrix& a, const Matrix& b, const SimilarityConfig& cfg) {
  Matrix a_w, b_w;
  if (cfg.metric_full.size() > 0) {
    a_w = a * cfg.metric_full;
  } else if (cfg.metric_diag.size() > 0) {
    a_w = a * cfg.metric_diag.asDiagonal();
  } else {
    a_w = a;  // identity metric
  }
  const Vector a_sq = (a_w.array() * a.array()).rowwise().sum();
  if (cfg.metric_full.size() > 0) {
    b_w = b * cfg.metric_full;
  } else if (cfg.metric_diag.size() > 0) {
    b_w = b * cfg.metric_diag.asDiagonal();
  } else {
    b_w = b;
  }
  const Vector b_sq = (b_w.array() * b.array()).rowwise().sum();
  Matrix d = -2.0 * (a_w * b.transpose());
  d.colwise() += a_sq;
  d.rowwise() += b_sq.transpose();
  return d.cwiseMax(0.0);
}

}  // namespace

SimilarityKind similarity_kind_from_string(const std::string& name) {
  if (name == "dot") return SimilarityKind::dot;
  if (name == "rbf") return SimilarityKind::rbf;
  if (name == "mahalanobis") return SimilarityKind::mahalanobis;
  throw std::invalid_argument("unknown similarity kind: " + name);
}

std::string to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::dot: return "dot";
    case SimilarityKind::rbf: return "rbf";
    case SimilarityKind::mahalanobis: return "mahalanobis";
  }
  throw std::invalid_argument("invalid similarity kind");
}

void validate_similarity_config(const SimilarityConfig& cfg, int dim) {
  if (cfg.kind == SimilarityKind::rbf && !(cfg.sigma > 0.0)) {
    throw std::invalid_argument("rbf similarity requires sigma > 0");
  }
  if (cfg.kind != SimilarityKind::mahalanobis) return;
  if (cfg.metric_full.size() > 0) {
    if (cfg.metric_full.rows() != dim || cfg.metric_full.cols() != dim) {
      throw std::invalid_argument("full metric dimension does not match features");
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = i + 1; j < dim; ++j) {
        if (std::abs(cfg.metric_full(i, j) - cfg.metric_full(j, i)) > 1e-8) {
          throw std::invalid_argument("full metric must be symmetric");
        }
      }
    }
    Eigen::LLT<Matrix> llt(cfg.metric_full);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("full metric must be positive definite");
    }
  } else if (cfg.metric_diag.size() > 0) {
    if (cfg.metric_diag.size() != dim) {
      throw std::invalid_argument("diagonal metric dimension does not match features");
    }
    if (cfg.metric_diag.minCoeff() <= 0.0) {
      throw std::invalid_argument("diagonal metric entries must be positive");
    }
  }
}

double frame_sim(const Vector& u, const Vector& v, const SimilarityConfig& cfg) {
  require_same_dim(u.size(), v.size());
  if (!u.allFinite() || !v.allFinite()) {
    throw std::invalid_argument("frame_sim: non-finite input");
  }
  switch (cfg.kind) {
    case SimilarityKind::dot:
      return u.dot(v);
    case SimilarityKind::rbf:
      return std::exp(-(u - v).norm() / cfg.sigma);
    case SimilarityKind::mahalanobis: {
      const Vector diff = u - v;
      double q;
      if (cfg.metric_full.size() > 0) {
        q = diff.dot(cfg.metric_full * diff);
      } else if (cfg.metric_diag.size() > 0) {
        require_same_dim(cfg.metric_diag.size(), u.size());
        q = (cfg.metric_diag.array() * diff.array().square()).sum();
      } else {
        q = diff.squaredNorm();
      }
      return std::exp(-q);
    }
  }
  throw std::invalid_argument("invalid similarity kind");
}

Matrix similarity_matrix(const Matrix& test, const Matrix& exemplar,
                         const SimilarityConfig& cfg) {
  validate_features(test);
  validate_features(exemplar);
  require_same_dim(test.cols(), exemplar.cols());
  validate_similarity_config(cfg, static_cast<int>(test.cols()));

  switch (cfg.kind) {
    case SimilarityKind::dot:
      return test * exemplar.transpose();
    case SimilarityKind::rbf: {
      SimilarityConfig identity_metric;  // plain Euclidean distances
      identity_metric.kind = SimilarityKind::mahalanobis;
      Matrix d = quadratic_distances(test, exemplar, identity_metric);
      return (-d.array().sqrt() / cfg.sigma).exp();
    }
    case SimilarityKind::mahalanobis: {
      Matrix d = quadratic_distances(test, exemplar, cfg);
      return (-d.array()).exp();
    }
  }
  throw std::invalid_argument("invalid similarity kind");
}

Matrix shot_mean_features(const Matrix& frames, const std::vector<int>& boundaries) {
  validate_features(frames);
  validate_boundaries(boundaries, static_cast<int>(frames.rows()));
  const int n_segments = segment_count(boundaries);
  Matrix out(n_segments, frames.cols());
  for (int s = 0; s < n_segments; ++s) {
    const int start = segment_start(boundaries, s);
    const int len = segment_length(boundaries, s);
    Vector mean = frames.middleRows(start, len).colwise().mean();
    const double norm = mean.norm();
    if (norm <= 0.0) {
      std::ostringstream msg;
      msg << "segment " << s << " has a zero mean descriptor";
      throw std::invalid_argument(msg.str());
    }
    out.row(s) = mean / norm;
  }
  return out;
}

Matrix shot_max_similarity_matrix(const Matrix& test, const Matrix& exemplar,
                                  const std::vector<int>& test_bounds,
                                  const std::vector<int>& ex_bounds,
                                  const SimilarityConfig& cfg) {
  validate_boundaries(test_bounds, static_cast<int>(test.rows()));
  validate_boundaries(ex_bounds, static_cast<int>(exemplar.rows()));
  const Matrix frame_level = similarity_matrix(test, exemplar, cfg);
  Matrix out(segment_count(test_bounds), segment_count(ex_bounds));
  for (int a = 0; a < out.rows(); ++a) {
    const int ta = segment_start(test_bounds, a);
    const int la = segment_length(test_bounds, a);
    for (int b = 0; b < out.cols(); ++b) {
      const int tb = segment_start(ex_bounds, b);
      const int lb = segment_length(ex_bounds, b);
      out(a, b) = frame_level.block(ta, tb, la, lb).maxCoeff();
    }
  }
  return out;
}

}  // namespace dppsum
