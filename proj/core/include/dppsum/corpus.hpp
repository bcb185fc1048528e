#ifndef DPPSUM_CORPUS_HPP
#define DPPSUM_CORPUS_HPP

#include <cstdint>
#include <optional>

#include "dppsum/transfer.hpp"
#include "dppsum/types.hpp"

namespace dppsum {

/// One corpus video as loaded from a manifest: unit-norm frame features,
/// optional category and segmentation, and zero or more human summaries.
struct Video {
  std::string id;
  Matrix frames;
  std::optional<std::string> category;
  std::vector<int> boundaries;
  std::vector<Selection> summaries;
};

/// Binary frame-feature file ("VSTF"): magic, u32 version=1, u32 n_frames,
/// u32 dim, then n_frames*dim IEEE-754 binary32 little-endian values,
/// frame-major. Values pass through unmodified (no normalization here).
void write_features(const std::string& path, const Matrix& frames);
Matrix read_features(const std::string& path);

/// Summary files: one zero-based decimal index per line, sorted ascending.
void write_summary(const std::string& path, const Selection& summary);
Selection read_summary(const std::string& path);

/// Loads and validates a JSON manifest; referenced paths resolve relative to
/// the manifest's directory. A relative manifest path itself resolves
/// against $DPPSUM_DATA_DIR when set. With feature_norm set, rows whose norm
/// deviates from 1 by <= 1e-3 are re-normalized; larger deviations are
/// rejected. Without the flag, rows must be unit-norm within 1e-6.
std::vector<Video> load_corpus(const std::string& manifest_path);

/// FNV-1a 64-bit hash of the manifest bytes, as 16 hex digits.
std::string corpus_hash(const std::string& manifest_path);

/// Resolves `path` against $DPPSUM_DATA_DIR when relative and the variable
/// is set; otherwise returns it unchanged.
std::string resolve_data_path(const std::string& path);

struct SynthConfig {
  int n_videos = 10;
  int n_frames = 40;
  int dim = 24;
  int n_categories = 1;
  int keyframes_per_video = 4;
  int segment_len = 0;          // 0 = no boundaries in the manifest
  double noise_level = 0.0;
  std::uint64_t seed = 0;
};

void validate_synth_config(const SynthConfig& cfg);

/// Writes a synthetic corpus (manifest + feature + summary files) under
/// out_dir. Each category plants keyframes_per_video orthonormal "event"
/// directions shared by its videos; every video places one frame per event
/// at random positions (those positions are the ground-truth summary) and
/// fills the rest from a pool of filler directions, then perturbs all
/// frames with Gaussian noise of scale noise_level and re-normalizes.
/// Byte-identical output for identical configs.
void gen_synthetic(const SynthConfig& cfg, const std::string& out_dir);

/// In-memory variant used by tests; same construction, no files.
std::vector<Video> gen_synthetic_videos(const SynthConfig& cfg);

/// Training target for one video: its first summary at frame granularity;
/// under subshot granularity, the frame-vote oracle over all user summaries
/// when there are several, else the segment conversion of the first.
Selection training_target(const Video& video, Granularity granularity,
                          double oracle_budget);

/// Corpus videos -> exemplars with the given training targets. Videos
/// without summaries are skipped. Order follows the input.
std::vector<Exemplar> make_exemplars(const std::vector<Video>& videos,
                                     Granularity granularity,
                                     double oracle_budget = 0.15);

}  // namespace dppsum

#endif  // DPPSUM_CORPUS_HPP
