#ifndef DPPSUM_EVALUATION_HPP
#define DPPSUM_EVALUATION_HPP

#include "dppsum/types.hpp"

namespace dppsum {

/// Two summary items match when their feature distance is <= threshold.
struct MatchConfig {
  double threshold = 0.5;
};

/// Percent metrics; f_score is the harmonic mean of precision and recall.
struct ScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

enum class AggregationMode { mean, max };
AggregationMode aggregation_mode_from_string(const std::string& name);

/// Maximum-cardinality bipartite matching (augmenting paths) between the two
/// summaries, with an edge wherever the Euclidean feature distance is within
/// the threshold. Each item matches at most one item of the other summary.
int match_pairs(const Selection& a, const Selection& b,
                const Matrix& features_a, const Matrix& features_b,
                const MatchConfig& cfg);

/// P = matches/|a| * 100, R = matches/|b| * 100, F = P*R / (0.5*(P+R)).
/// An empty side yields the all-zero triple.
ScoreTriple score(const Selection& a, const Selection& b,
                  const Matrix& features_a, const Matrix& features_b,
                  const MatchConfig& cfg);

/// Per-user scores combined componentwise (mean) or by the user with the
/// highest F-score (max; first such user on ties).
ScoreTriple aggregate(const Selection& predicted, const std::vector<Selection>& users,
                      const Matrix& features, const MatchConfig& cfg,
                      AggregationMode mode);

/// Enforces a length budget on selected segments: when the selected duration
/// exceeds budget_fraction of the video, keeps segments in decreasing order
/// of their kernel diagonal (earlier segment on ties) while the running
/// total stays within budget, stopping at the first segment that would
/// exceed it.
Selection budgeted_truncate(const Selection& selected_segments, const Matrix& kernel,
                            const std::vector<int>& boundaries, double budget_fraction);

/// Single training target from several frame-level user summaries: score
/// each frame by the number of summaries containing it, average the votes
/// per segment, then take segments in decreasing vote order (earlier on
/// ties) until the selected length first reaches budget_fraction of the
/// video; the crossing segment is included.
Selection oracle_subshot_summary(const std::vector<Selection>& user_summaries,
                                 const std::vector<int>& boundaries,
                                 double budget_fraction);

}  // namespace dppsum

#endif  // DPPSUM_EVALUATION_HPP
