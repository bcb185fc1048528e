#ifndef DPPSUM_LEARNING_HPP
#define DPPSUM_LEARNING_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "dppsum/transfer.hpp"

namespace dppsum {

struct FitOptions {
  CategoryMode category_mode = CategoryMode::none;
  bool learn_metric = false;
  bool include_self = true;   // likelihood kernels sum over all exemplars,
                              // including the video itself; off for ablation
  int max_iters = 200;
  double init_step = 1.0;
  double init_alpha = 2.0;
  double rel_tol = 1e-9;      // stop when the objective gain falls below this
  std::uint64_t seed = 0;     // reserved; the optimization is deterministic
};

/// Optimization variables. Scales are reparameterized as alpha = exp(beta)
/// and diagonal metric entries as exp(omega_log), so positivity holds at
/// every iterate. Parameters are organized in groups: one group in none
/// mode, one per category in hard/soft modes. mask(g, r) = 0 pins alpha to
/// exactly zero (off-category exemplars in hard mode).
struct LearnState {
  std::vector<std::string> groups;   // {""} in none mode, else category names
  Matrix beta;                       // groups x R
  Matrix mask;                       // groups x R, entries 0 or 1
  Vector omega_log;                  // d; used when learn_metric
  SimilarityConfig sim;
  Granularity granularity = Granularity::frame;
  bool learn_metric = false;
  bool include_self = true;

  double alpha(Eigen::Index g, Eigen::Index r) const {
    return mask(g, r) * std::exp(beta(g, r));
  }
  Vector alpha_row(Eigen::Index g) const;
  /// Similarity config with the learned metric substituted in.
  SimilarityConfig sim_with_metric() const;
};

LearnState init_state(const std::vector<Exemplar>& corpus, const SimilarityConfig& sim,
                      Granularity granularity, const FitOptions& opts);

/// Group index for a video's category (0 in none mode).
Eigen::Index group_of(const LearnState& state, const std::optional<std::string>& category);

/// -sum_q log P(y_q; L_q) with L_q synthesized from the whole corpus (self
/// included unless configured off). Zero-probability ground truths
/// contribute a large finite penalty (1e6) instead of infinity.
double leave_self_in_nll(const LearnState& state, const std::vector<Exemplar>& corpus);

/// d log-likelihood / d beta, groups x R. Masked entries are zero. Throws
/// NumericalError naming the offending video when its ground-truth minor is
/// singular.
Matrix grad_alpha(const LearnState& state, const std::vector<Exemplar>& corpus);

/// d log-likelihood / d omega_log for the diagonal metric (mahalanobis kind
/// only). Finite differences are the correctness authority for this path.
Vector grad_metric(const LearnState& state, const std::vector<Exemplar>& corpus);

/// Full-matrix d log-likelihood / d Omega (entrywise, identity
/// parameterization), for the optional non-diagonal metric.
Matrix grad_metric_matrix(const LearnState& state, const std::vector<Exemplar>& corpus);

/// Gradient under the factored parameterization Omega = W'W, evaluated at
/// W = Omega: equals 2 * Omega * grad_metric_matrix.
Matrix grad_metric_factored(const LearnState& state, const std::vector<Exemplar>& corpus);

/// Central finite differences of a scalar function, one coordinate at a time.
Vector central_differences(const std::function<double(const Vector&)>& f,
                           const Vector& x, double h);

struct FdGradients {
  Matrix beta;       // d NLL / d beta
  Vector omega_log;  // d NLL / d omega_log (empty unless metric learned)
};

/// Central differences of leave_self_in_nll in every parameter coordinate.
/// Note the sign: this differentiates the NLL, grad_alpha/grad_metric the
/// log-likelihood.
FdGradients finite_difference_oracle(const LearnState& state,
                                     const std::vector<Exemplar>& corpus, double h);

struct FitResult {
  TransferModel model;
  /// Accepted log-likelihood values per parameter group, non-decreasing.
  std::map<std::string, std::vector<double>> objective_trace;
  /// False when max_iters ran out while the objective was still improving.
  bool converged = true;
};

/// Full-batch gradient ascent with backtracking line search (step halved on
/// objective decrease, at most 20 halvings per iteration). Hard and soft
/// modes fit each category's parameter group independently. Deterministic.
FitResult fit(const std::vector<Exemplar>& corpus, const SimilarityConfig& sim,
              Granularity granularity, const FitOptions& opts);

}  // namespace dppsum

#endif  // DPPSUM_LEARNING_HPP
