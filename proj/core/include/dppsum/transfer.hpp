#ifndef DPPSUM_TRANSFER_HPP
#define DPPSUM_TRANSFER_HPP

#include <map>
#include <optional>

#include "dppsum/similarity.hpp"
#include "dppsum/types.hpp"

namespace dppsum {

/// An annotated training video: unit-norm frame descriptors plus its
/// ground-truth summary. Boundaries are required for subshot granularities.
struct Exemplar {
  std::string id;
  Matrix frames;                        // N_r x d
  Selection summary;                    // frame-level, non-empty
  std::optional<std::string> category;
  std::vector<int> boundaries;          // empty when unsegmented
};

void validate_exemplar(const Exemplar& ex);

enum class CategoryMode { none, hard, soft };
enum class Granularity { frame, shot_mean, shot_max };

CategoryMode category_mode_from_string(const std::string& name);
std::string to_string(CategoryMode mode);
Granularity granularity_from_string(const std::string& name);
std::string to_string(Granularity g);

/// Everything needed to synthesize a kernel for a new video: the exemplar
/// corpus, per-exemplar scales (per category in hard/soft modes), the
/// similarity configuration and the working granularity.
struct TransferModel {
  std::vector<Exemplar> exemplars;
  SimilarityConfig sim;
  CategoryMode category_mode = CategoryMode::none;
  Granularity granularity = Granularity::frame;
  int sequential_len = 0;                          // 0 = sequential mode off
  double oracle_budget = 0.15;                     // subshot training-target budget
  Vector alphas;                                   // size R, category_mode none
  std::map<std::string, Vector> category_alphas;   // per category otherwise
  std::string corpus_hash;
  bool fit_converged = true;
};

/// Diagonal ground-set kernel with `alpha` at summary indices, 0 elsewhere.
Matrix idealized_kernel(const Selection& summary, int ground_size, double alpha);
Matrix idealized_kernel(const Exemplar& ex, double alpha);

/// Scale vector actually applied for a test video of the given category:
/// the shared vector in none mode, the category-specific vector otherwise
/// (zero off-category entries in hard mode). Throws when the mode needs a
/// category that is missing or untrained.
Vector effective_alphas(const TransferModel& model,
                        const std::optional<std::string>& test_category);

/// Exemplar ground-set size at a granularity (frames or segments).
int ground_size(const Exemplar& ex, Granularity g);

/// Exemplar ground-truth summary at a granularity.
Selection ground_summary(const Exemplar& ex, Granularity g);

/// Cross-video similarity matrix between a test video's ground set and an
/// exemplar's, honoring the granularity (frame-level, segment means, or
/// segment max-pairing).
Matrix exemplar_similarity(const Matrix& test_frames,
                           const std::vector<int>& test_boundaries,
                           const Exemplar& ex, Granularity g,
                           const SimilarityConfig& cfg);

/// L = sum_r S_r L_r S_r', accumulated in corpus order with compensated
/// summation. Output dimension = test ground-set size (frames, or segments
/// under subshot granularity, in which case test_boundaries are required).
Matrix synthesize_kernel(const TransferModel& model, const Matrix& test_frames,
                         const std::optional<std::string>& test_category = {},
                         const std::vector<int>& test_boundaries = {});

/// Greedy MAP summary of the synthesized kernel. Under subshot granularity
/// the returned indices are segment indices.
Selection summarize(const TransferModel& model, const Matrix& test_frames,
                    const std::optional<std::string>& test_category = {},
                    const std::vector<int>& test_boundaries = {});

/// Segment-by-segment extraction: at step t the ground set is segment t's
/// frames plus the subset selected at step t-1, which is forced into the
/// selection through exact DPP conditioning. Returns the union of all
/// per-segment selections, sorted. Frame granularity only.
Selection summarize_sequential(const TransferModel& model, const Matrix& test_frames,
                               const std::vector<int>& segment_bounds,
                               const std::optional<std::string>& test_category = {});

}  // namespace dppsum

#endif  // DPPSUM_TRANSFER_HPP
