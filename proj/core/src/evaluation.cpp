#include "dppsum/evaluation.hpp"

#include "dppsum/segments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dppsum {

AggregationMode aggregation_mode_from_string(const std::string& name) {
  if (name == "mean") return AggregationMode::mean;
  if (name == "max") return AggregationMode::max;
  throw std::invalid_argument("unknown aggregation mode: " + name);
}

namespace {

// Augmenting-path search for maximum bipartite matching.
bool augment(int a, const std::vector<std::vector<int>>& adj, std::vector<bool>& visited,
             std::vector<int>& match_b) {
  for (int b : adj[a]) {
    if (visited[b]) continue;
    visited[b] = true;
    if (match_b[b] < 0 || augment(match_b[b], adj, visited, match_b)) {
      match_b[b] = a;
      return true;
    }
  }
  return false;
}

}  // namespace

int match_pairs(const Selection& a, const Selection& b,
                const Matrix& features_a, const Matrix& features_b,
                const MatchConfig& cfg) {
  if (cfg.threshold < 0.0) throw std::invalid_argument("match threshold must be >= 0");
  if (features_a.cols() != features_b.cols()) {
    throw std::invalid_argument("match_pairs: feature dimension mismatch");
  }
  validate_selection(a, static_cast<int>(features_a.rows()));
  validate_selection(b, static_cast<int>(features_b.rows()));

  std::vector<std::vector<int>> adj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double dist = (features_a.row(a[i]) - features_b.row(b[j])).norm();
      if (dist <= cfg.threshold) adj[i].push_back(static_cast<int>(j));
    }
  }
  std::vector<int> match_b(b.size(), -1);
  int matched = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<bool> visited(b.size(), false);
    if (augment(static_cast<int>(i), adj, visited, match_b)) ++matched;
  }
  return matched;
}

ScoreTriple score(const Selection& a, const Selection& b,
                  const Matrix& features_a, const Matrix& features_b,
                  const MatchConfig& cfg) {
  ScoreTriple out;
  if (a.empty() || b.empty()) return out;
  const int matches = match_pairs(a, b, features_a, features_b, cfg);
  out.precision = 100.0 * matches / static_cast<double>(a.size());
  out.recall = 100.0 * matches / static_cast<double>(b.size());
  if (out.precision + out.recall > 0.0) {
    out.f_score = out.precision * out.recall / (0.5 * (out.precision + out.recall));
  }
  return out;
}

ScoreTriple aggregate(const Selection& predicted, const std::vector<Selection>& users,
                      const Matrix& features, const MatchConfig& cfg,
                      AggregationMode mode) {
  if (users.empty()) throw std::invalid_argument("aggregate: no user summaries");
  ScoreTriple out;
  ScoreTriple best;
  bool first = true;
  for (const Selection& user : users) {
    const ScoreTriple s = score(predicted, user, features, features, cfg);
    out.precision += s.precision / users.size();
    out.recall += s.recall / users.size();
    out.f_score += s.f_score / users.size();
    if (first || s.f_score > best.f_score) {
      best = s;
      first = false;
    }
  }
  return mode == AggregationMode::mean ? out : best;
}

Selection budgeted_truncate(const Selection& selected_segments, const Matrix& kernel,
                            const std::vector<int>& boundaries, double budget_fraction) {
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) {
    throw std::invalid_argument("budget fraction must be in (0, 1]");
  }
  validate_selection(selected_segments, segment_count(boundaries));
  if (kernel.rows() != segment_count(boundaries)) {
    throw std::invalid_argument("kernel dimension does not match segment count");
  }
  const int total = boundaries.back();
  int selected_len = 0;
  for (int s : selected_segments) selected_len += segment_length(boundaries, s);
  const double budget = budget_fraction * total;
  if (selected_len <= budget) return selected_segments;

  Selection order = selected_segments;
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return kernel(lhs, lhs) > kernel(rhs, rhs);   // stable: earlier wins ties
  });
  Selection kept;
  int running = 0;
  for (int s : order) {
    const int len = segment_length(boundaries, s);
    if (running + len > budget) break;
    running += len;
    kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

Selection oracle_subshot_summary(const std::vector<Selection>& user_summaries,
                                 const std::vector<int>& boundaries,
                                 double budget_fraction) {
  if (user_summaries.empty()) {
    throw std::invalid_argument("oracle summary needs at least one user summary");
  }
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) {
    throw std::invalid_argument("budget fraction must be in (0, 1]");
  }
  const int n_frames = boundaries.back();
  validate_boundaries(boundaries, n_frames);

  std::vector<double> votes(n_frames, 0.0);
  for (const Selection& user : user_summaries) {
    validate_selection(user, n_frames);
    for (int f : user) votes[f] += 1.0;
  }
  const int n_segments = segment_count(boundaries);
  std::vector<double> segment_score(n_segments, 0.0);
  for (int s = 0; s < n_segments; ++s) {
    const int start = segment_start(boundaries, s);
    const int len = segment_length(boundaries, s);
    segment_score[s] =
        std::accumulate(votes.begin() + start, votes.begin() + start + len, 0.0) / len;
  }

  std::vector<int> order(n_segments);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return segment_score[lhs] > segment_score[rhs];
  });

  const double budget = budget_fraction * n_frames;
  Selection chosen;
  int running = 0;
  for (int s : order) {
    chosen.push_back(s);
    running += segment_length(boundaries, s);
    if (running >= budget) break;  // the crossing segment stays
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace dppsum
