#include "dppsum/transfer.hpp"

#include "dppsum/dpp.hpp"
#include "dppsum/segments.hpp"

#include <algorithm>
#include <sstream>

namespace dppsum {

void validate_exemplar(const Exemplar& ex) {
  validate_features(ex.frames);
  validate_selection(ex.summary, static_cast<int>(ex.frames.rows()));
  if (ex.summary.empty()) {
    throw std::invalid_argument("exemplar '" + ex.id + "' has an empty summary");
  }
  if (!ex.boundaries.empty()) {
    validate_boundaries(ex.boundaries, static_cast<int>(ex.frames.rows()));
  }
}

CategoryMode category_mode_from_string(const std::string& name) {
  if (name == "none") return CategoryMode::none;
  if (name == "hard") return CategoryMode::hard;
  if (name == "soft") return CategoryMode::soft;
  throw std::invalid_argument("unknown category mode: " + name);
}

std::string to_string(CategoryMode mode) {
  switch (mode) {
    case CategoryMode::none: return "none";
    case CategoryMode::hard: return "hard";
    case CategoryMode::soft: return "soft";
  }
  throw std::invalid_argument("invalid category mode");
}

Granularity granularity_from_string(const std::string& name) {
  if (name == "frame") return Granularity::frame;
  if (name == "shot-mean" || name == "shot_mean") return Granularity::shot_mean;
  if (name == "shot-max" || name == "shot_max") return Granularity::shot_max;
  throw std::invalid_argument("unknown granularity: " + name);
}

std::string to_string(Granularity g) {
  switch (g) {
    case Granularity::frame: return "frame";
    case Granularity::shot_mean: return "shot-mean";
    case Granularity::shot_max: return "shot-max";
  }
  throw std::invalid_argument("invalid granularity");
}

Matrix idealized_kernel(const Selection& summary, int ground_size, double alpha) {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("idealized kernel scale must be nonnegative");
  }
  validate_selection(summary, ground_size);
  Matrix kernel = Matrix::Zero(ground_size, ground_size);
  for (int idx : summary) kernel(idx, idx) = alpha;
  return kernel;
}

Matrix idealized_kernel(const Exemplar& ex, double alpha) {
  validate_exemplar(ex);
  return idealized_kernel(ex.summary, static_cast<int>(ex.frames.rows()), alpha);
}

Vector effective_alphas(const TransferModel& model,
                        const std::optional<std::string>& test_category) {
  const auto r = static_cast<Eigen::Index>(model.exemplars.size());
  if (model.category_mode == CategoryMode::none) {
    if (model.alphas.size() != r) {
      throw std::invalid_argument("model alpha vector does not match exemplar count");
    }
    return model.alphas;
  }
  if (!test_category) {
    throw std::invalid_argument("category mode '" + to_string(model.category_mode) +
                                "' requires a test category");
  }
  auto it = model.category_alphas.find(*test_category);
  if (it == model.category_alphas.end()) {
    throw std::invalid_argument("no trained scales for category '" + *test_category + "'");
  }
  if (it->second.size() != r) {
    throw std::invalid_argument("category alpha vector does not match exemplar count");
  }
  return it->second;
}

int ground_size(const Exemplar& ex, Granularity g) {
  if (g == Granularity::frame) return static_cast<int>(ex.frames.rows());
  if (ex.boundaries.empty()) {
    throw std::invalid_argument("exemplar '" + ex.id + "' has no boundaries for subshot granularity");
  }
  return segment_count(ex.boundaries);
}

Selection ground_summary(const Exemplar& ex, Granularity g) {
  if (g == Granularity::frame) return ex.summary;
  if (ex.boundaries.empty()) {
    throw std::invalid_argument("exemplar '" + ex.id + "' has no boundaries for subshot granularity");
  }
  return frames_to_segments(ex.summary, ex.boundaries);
}

Matrix exemplar_similarity(const Matrix& test_frames,
                           const std::vector<int>& test_boundaries,
                           const Exemplar& ex, Granularity g,
                           const SimilarityConfig& cfg) {
  if (g != Granularity::frame && ex.boundaries.empty()) {
    throw std::invalid_argument("exemplar '" + ex.id + "' has no boundaries for subshot granularity");
  }
  switch (g) {
    case Granularity::frame:
      return similarity_matrix(test_frames, ex.frames, cfg);
    case Granularity::shot_mean:
      return similarity_matrix(shot_mean_features(test_frames, test_boundaries),
                               shot_mean_features(ex.frames, ex.boundaries), cfg);
    case Granularity::shot_max:
      return shot_max_similarity_matrix(test_frames, ex.frames, test_boundaries,
                                        ex.boundaries, cfg);
  }
  throw std::invalid_argument("invalid granularity");
}

namespace {

int test_ground_size(const Matrix& test_frames, const std::vector<int>& test_boundaries,
                     Granularity g) {
  if (g == Granularity::frame) return static_cast<int>(test_frames.rows());
  if (test_boundaries.empty()) {
    throw std::invalid_argument("subshot granularity requires test boundaries");
  }
  validate_boundaries(test_boundaries, static_cast<int>(test_frames.rows()));
  return segment_count(test_boundaries);
}

}  // namespace

Matrix synthesize_kernel(const TransferModel& model, const Matrix& test_frames,
                         const std::optional<std::string>& test_category,
                         const std::vector<int>& test_boundaries) {
  validate_features(test_frames);
  if (model.exemplars.empty()) {
    throw std::invalid_argument("transfer model has no exemplars");
  }
  const Vector alphas = effective_alphas(model, test_category);
  if (model.category_mode == CategoryMode::hard && alphas.maxCoeff() <= 0.0) {
    throw std::invalid_argument("hard transfer: no exemplar matches category '" +
                                test_category.value_or("") + "'");
  }
  const int n = test_ground_size(test_frames, test_boundaries, model.granularity);

  KahanMatrixSum acc(n, n);
  for (std::size_t r = 0; r < model.exemplars.size(); ++r) {
    const double alpha = alphas(static_cast<Eigen::Index>(r));
    if (alpha == 0.0) continue;
    const Exemplar& ex = model.exemplars[r];
    const Matrix sim = exemplar_similarity(test_frames, test_boundaries, ex,
                                           model.granularity, model.sim);
    const Selection summary = ground_summary(ex, model.granularity);
    // S_r L_r S_r' with diagonal L_r collapses to alpha * B B' over the
    // summary columns of S_r.
    Matrix b(n, summary.size());
    for (std::size_t k = 0; k < summary.size(); ++k) {
      b.col(static_cast<Eigen::Index>(k)) = sim.col(summary[k]);
    }
    acc.add(alpha * (b * b.transpose()));
  }
  Matrix kernel = acc.value();
  kernel = 0.5 * (kernel + kernel.transpose()).eval();
  return kernel;
}

Selection summarize(const TransferModel& model, const Matrix& test_frames,
                    const std::optional<std::string>& test_category,
                    const std::vector<int>& test_boundaries) {
  return map_greedy(synthesize_kernel(model, test_frames, test_category, test_boundaries));
}

Selection summarize_sequential(const TransferModel& model, const Matrix& test_frames,
                               const std::vector<int>& segment_bounds,
                               const std::optional<std::string>& test_category) {
  if (model.granularity != Granularity::frame) {
    throw std::invalid_argument("sequential extraction runs at frame granularity");
  }
  validate_features(test_frames);
  validate_boundaries(segment_bounds, static_cast<int>(test_frames.rows()));

  Selection output;
  Selection previous;  // selection of the immediately preceding segment
  for (int t = 0; t < segment_count(segment_bounds); ++t) {
    const int start = segment_start(segment_bounds, t);
    const int len = segment_length(segment_bounds, t);

    // Ground set: previous selection followed by this segment's frames
    // (previous indices are strictly smaller, so this is ascending order).
    std::vector<int> ground(previous);
    for (int f = start; f < start + len; ++f) ground.push_back(f);

    Matrix ground_features(ground.size(), test_frames.cols());
    for (std::size_t i = 0; i < ground.size(); ++i) {
      ground_features.row(static_cast<Eigen::Index>(i)) = test_frames.row(ground[i]);
    }

    const Matrix kernel = synthesize_kernel(model, ground_features, test_category);

    Selection forced(previous.size());
    for (std::size_t i = 0; i < previous.size(); ++i) forced[i] = static_cast<int>(i);
    const Matrix conditional = condition_on(kernel, forced);

    // Remaining items of the conditional kernel are exactly this segment's
    // frames, in order.
    const Selection picked = map_greedy(conditional);
    Selection current;
    for (int p : picked) current.push_back(start + p);
    output.insert(output.end(), current.begin(), current.end());
    previous = std::move(current);
  }
  std::sort(output.begin(), output.end());
  return output;
}

}  // namespace dppsum
