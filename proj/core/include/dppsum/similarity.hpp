#ifndef DPPSUM_SIMILARITY_HPP
#define DPPSUM_SIMILARITY_HPP

#include "dppsum/types.hpp"

namespace dppsum {

enum class SimilarityKind { dot, rbf, mahalanobis };

/// Pairwise frame similarity configuration.
///
///   dot          u . v
///   rbf          exp(-|u - v| / sigma)          (unsquared distance)
///   mahalanobis  exp(-(u - v)' Omega (u - v))   (quadratic form)
///
/// Omega is diagonal by default (metric_diag); a full SPD matrix in
/// metric_full takes precedence when non-empty. Empty metric means identity.
struct SimilarityConfig {
  SimilarityKind kind = SimilarityKind::rbf;
  double sigma = 1.0;
  Vector metric_diag;
  Matrix metric_full;
};

SimilarityKind similarity_kind_from_string(const std::string& name);
std::string to_string(SimilarityKind kind);

void validate_similarity_config(const SimilarityConfig& cfg, int dim);

double frame_sim(const Vector& u, const Vector& v, const SimilarityConfig& cfg);

/// S(i, k) = frame_sim(test row i, exemplar row k); shape N x N_r.
Matrix similarity_matrix(const Matrix& test, const Matrix& exemplar,
                         const SimilarityConfig& cfg);

/// One descriptor per segment: arithmetic mean of member frames,
/// re-normalized to unit norm. Throws on an all-zero segment mean.
Matrix shot_mean_features(const Matrix& frames, const std::vector<int>& boundaries);

/// S(a, b) = max over frame pairs (i in test segment a, k in exemplar
/// segment b) of frame_sim(i, k).
Matrix shot_max_similarity_matrix(const Matrix& test, const Matrix& exemplar,
                                  const std::vector<int>& test_bounds,
                                  const std::vector<int>& ex_bounds,
                                  const SimilarityConfig& cfg);

}  // namespace dppsum

#endif  // DPPSUM_SIMILARITY_HPP
