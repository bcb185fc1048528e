#include "dppsum/corpus.hpp"

#include "dppsum/evaluation.hpp"
#include "dppsum/rng.hpp"
#include "dppsum/segments.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace dppsum {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'V', 'S', 'T', 'F'};
constexpr std::uint32_t kFeatureVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                            static_cast<unsigned char>((v >> 8) & 0xff),
                            static_cast<unsigned char>((v >> 16) & 0xff),
                            static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw std::invalid_argument("feature file truncated");
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void put_f32(std::ostream& out, float v) {
  static_assert(sizeof(float) == 4);
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

float get_f32(std::istream& in) {
  const std::uint32_t bits = get_u32(in);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

[[noreturn]] void manifest_error(const std::string& video_id, const std::string& what) {
  throw std::invalid_argument("corpus video '" + video_id + "': " + what);
}

}  // namespace

void write_features(const std::string& path, const Matrix& frames) {
  validate_features(frames);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open feature file for writing: " + path);
  out.write(kMagic, 4);
  put_u32(out, kFeatureVersion);
  put_u32(out, static_cast<std::uint32_t>(frames.rows()));
  put_u32(out, static_cast<std::uint32_t>(frames.cols()));
  for (Eigen::Index i = 0; i < frames.rows(); ++i) {
    for (Eigen::Index j = 0; j < frames.cols(); ++j) {
      put_f32(out, static_cast<float>(frames(i, j)));
    }
  }
  if (!out) throw std::invalid_argument("write failed: " + path);
}

Matrix read_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open feature file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::invalid_argument("not a VSTF feature file: " + path);
  }
  const std::uint32_t version = get_u32(in);
  if (version != kFeatureVersion) {
    throw std::invalid_argument("unsupported VSTF version in " + path);
  }
  const std::uint32_t n = get_u32(in);
  const std::uint32_t d = get_u32(in);
  if (n == 0 || d == 0) throw std::invalid_argument("empty feature matrix in " + path);
  Matrix frames(n, d);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) {
      frames(i, j) = static_cast<double>(get_f32(in));
    }
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw std::invalid_argument("trailing bytes in feature file: " + path);
  }
  if (!frames.allFinite()) {
    throw std::invalid_argument("non-finite feature values in " + path);
  }
  return frames;
}

void write_summary(const std::string& path, const Selection& summary) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open summary file for writing: " + path);
  for (int idx : summary) out << idx << "\n";
  if (!out) throw std::invalid_argument("write failed: " + path);
}

Selection read_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open summary file: " + path);
  Selection summary;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    const int value = std::stoi(line, &pos);
    if (pos != line.size()) {
      throw std::invalid_argument("malformed summary line '" + line + "' in " + path);
    }
    summary.push_back(value);
  }
  return summary;
}

std::string resolve_data_path(const std::string& path) {
  if (fs::path(path).is_absolute()) return path;
  if (const char* base = std::getenv("DPPSUM_DATA_DIR"); base && *base) {
    return (fs::path(base) / path).string();
  }
  return path;
}

std::string corpus_hash(const std::string& manifest_path) {
  std::ifstream in(resolve_data_path(manifest_path), std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open manifest: " + manifest_path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

std::vector<Video> load_corpus(const std::string& manifest_path) {
  const std::string resolved = resolve_data_path(manifest_path);
  std::ifstream in(resolved);
  if (!in) throw std::invalid_argument("cannot open manifest: " + manifest_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("manifest parse error in " + manifest_path + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "dppsum-corpus") {
    throw std::invalid_argument("manifest missing format tag 'dppsum-corpus': " + manifest_path);
  }
  const bool feature_norm = doc.value("feature_norm", false);
  if (!doc.contains("videos") || !doc["videos"].is_array() || doc["videos"].empty()) {
    throw std::invalid_argument("manifest has no videos: " + manifest_path);
  }

  const fs::path base = fs::path(resolved).parent_path();
  std::vector<Video> videos;
  std::set<std::string> seen_ids;
  for (const json& entry : doc["videos"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      throw std::invalid_argument("manifest entry without string id in " + manifest_path);
    }
    Video video;
    video.id = entry["id"].get<std::string>();
    if (!seen_ids.insert(video.id).second) manifest_error(video.id, "duplicate id");
    if (!entry.contains("features") || !entry["features"].is_string()) {
      manifest_error(video.id, "missing feature file path");
    }
    const fs::path feature_path = base / entry["features"].get<std::string>();
    if (!fs::exists(feature_path)) {
      manifest_error(video.id, "feature file not found: " + feature_path.string());
    }
    video.frames = read_features(feature_path.string());

    if (entry.contains("n_frames") &&
        entry["n_frames"].get<Eigen::Index>() != video.frames.rows()) {
      manifest_error(video.id, "declared n_frames does not match the feature file");
    }
    if (entry.contains("dim") && entry["dim"].get<Eigen::Index>() != video.frames.cols()) {
      manifest_error(video.id, "declared dim does not match the feature file");
    }

    if (feature_norm) {
      for (Eigen::Index i = 0; i < video.frames.rows(); ++i) {
        const double norm = video.frames.row(i).norm();
        if (std::abs(norm - 1.0) > 1e-3) {
          std::ostringstream msg;
          msg << "frame " << i << " norm " << norm << " deviates from 1 by more than 1e-3";
          manifest_error(video.id, msg.str());
        }
        video.frames.row(i) /= norm;
      }
    } else if (!is_unit_norm(video.frames, 1e-6)) {
      manifest_error(video.id, "features are not unit-norm and feature_norm is not set");
    }

    if (entry.contains("category")) {
      if (!entry["category"].is_string()) manifest_error(video.id, "category must be a string");
      video.category = entry["category"].get<std::string>();
    }
    if (entry.contains("boundaries")) {
      if (!entry["boundaries"].is_array()) {
        manifest_error(video.id, "boundaries must be an array of segment end indices");
      }
      for (const json& b : entry["boundaries"]) video.boundaries.push_back(b.get<int>());
      try {
        validate_boundaries(video.boundaries, static_cast<int>(video.frames.rows()));
      } catch (const std::invalid_argument& e) {
        manifest_error(video.id, e.what());
      }
    }
    if (entry.contains("summaries")) {
      if (!entry["summaries"].is_array()) {
        manifest_error(video.id, "summaries must be an array of file paths");
      }
      for (const json& s : entry["summaries"]) {
        const fs::path summary_path = base / s.get<std::string>();
        if (!fs::exists(summary_path)) {
          manifest_error(video.id, "summary file not found: " + summary_path.string());
        }
        Selection summary = read_summary(summary_path.string());
        try {
          validate_selection(summary, static_cast<int>(video.frames.rows()));
        } catch (const std::invalid_argument& e) {
          manifest_error(video.id, std::string(e.what()) + " in " + summary_path.string());
        }
        video.summaries.push_back(std::move(summary));
      }
    }
    videos.push_back(std::move(video));
  }
  return videos;
}

void validate_synth_config(const SynthConfig& cfg) {
  if (cfg.n_videos < 1) throw std::invalid_argument("synth: n_videos must be >= 1");
  if (cfg.n_frames < 1) throw std::invalid_argument("synth: n_frames must be >= 1");
  if (cfg.dim < 1) throw std::invalid_argument("synth: dim must be >= 1");
  if (cfg.n_categories < 1) throw std::invalid_argument("synth: n_categories must be >= 1");
  if (cfg.keyframes_per_video < 1) {
    throw std::invalid_argument("synth: keyframes_per_video must be >= 1");
  }
  if (cfg.keyframes_per_video >= cfg.n_frames) {
    throw std::invalid_argument("synth: keyframes_per_video must be < n_frames");
  }
  if (cfg.dim < cfg.keyframes_per_video) {
    throw std::invalid_argument("synth: dim must be >= keyframes_per_video");
  }
  if (cfg.noise_level < 0.0) throw std::invalid_argument("synth: noise_level must be >= 0");
  if (cfg.segment_len < 0) throw std::invalid_argument("synth: segment_len must be >= 0");
}

std::vector<Video> gen_synthetic_videos(const SynthConfig& cfg) {
  validate_synth_config(cfg);
  Rng rng(cfg.seed);

  // Coordinate axes as directions: categories claim disjoint event blocks of
  // a seeded permutation when the dimension allows, the rest is a shared
  // filler pool, so events of different categories stay orthogonal.
  std::vector<int> axes(cfg.dim);
  for (int i = 0; i < cfg.dim; ++i) axes[i] = i;
  rng.shuffle(axes);

  const int k = cfg.keyframes_per_video;
  const bool disjoint = cfg.dim >= cfg.n_categories * k;
  std::vector<std::vector<int>> event_axes(cfg.n_categories);
  std::vector<int> filler_pool;
  if (disjoint) {
    for (int c = 0; c < cfg.n_categories; ++c) {
      event_axes[c].assign(axes.begin() + c * k, axes.begin() + (c + 1) * k);
    }
    filler_pool.assign(axes.begin() + cfg.n_categories * k, axes.end());
  } else {
    for (int c = 0; c < cfg.n_categories; ++c) {
      std::vector<int> pick = axes;
      rng.shuffle(pick);
      event_axes[c].assign(pick.begin(), pick.begin() + k);
    }
    filler_pool = axes;
  }
  if (filler_pool.empty()) filler_pool = axes;  // dim == n_categories * k

  std::vector<Video> videos;
  for (int v = 0; v < cfg.n_videos; ++v) {
    const int cat = v % cfg.n_categories;
    Video video;
    {
      std::ostringstream id;
      id << "vid_" << std::setw(3) << std::setfill('0') << v;
      video.id = id.str();
    }
    if (cfg.n_categories > 1) {
      std::ostringstream cat_name;
      cat_name << "cat_" << cat;
      video.category = cat_name.str();
    }

    // Event positions double as the ground-truth summary.
    std::vector<int> positions(cfg.n_frames);
    for (int i = 0; i < cfg.n_frames; ++i) positions[i] = i;
    rng.shuffle(positions);
    Selection summary(positions.begin(), positions.begin() + k);
    std::sort(summary.begin(), summary.end());

    video.frames = Matrix::Zero(cfg.n_frames, cfg.dim);
    std::vector<int> axis_of(cfg.n_frames, -1);
    for (int e = 0; e < k; ++e) axis_of[positions[e]] = event_axes[cat][e];
    for (int f = 0; f < cfg.n_frames; ++f) {
      if (axis_of[f] < 0) axis_of[f] = filler_pool[rng.below(static_cast<int>(filler_pool.size()))];
      video.frames(f, axis_of[f]) = 1.0;
      if (cfg.noise_level > 0.0) {
        for (int j = 0; j < cfg.dim; ++j) {
          video.frames(f, j) += cfg.noise_level * rng.normal();
        }
        video.frames.row(f).normalize();
      }
    }
    video.summaries.push_back(summary);
    if (cfg.segment_len > 0) {
      video.boundaries = uniform_segments(cfg.n_frames, cfg.segment_len);
    }
    videos.push_back(std::move(video));
  }
  return videos;
}

void gen_synthetic(const SynthConfig& cfg, const std::string& out_dir) {
  const std::vector<Video> videos = gen_synthetic_videos(cfg);
  const fs::path base(out_dir);
  fs::create_directories(base / "features");
  fs::create_directories(base / "summaries");

  json manifest;
  manifest["format"] = "dppsum-corpus";
  manifest["version"] = 1;
  manifest["feature_norm"] = true;
  manifest["videos"] = json::array();
  for (const Video& video : videos) {
    const std::string feature_rel = "features/" + video.id + ".vstf";
    const std::string summary_rel = "summaries/" + video.id + ".txt";
    write_features((base / feature_rel).string(), video.frames);
    write_summary((base / summary_rel).string(), video.summaries.front());
    json entry;
    entry["id"] = video.id;
    entry["features"] = feature_rel;
    entry["n_frames"] = video.frames.rows();
    entry["dim"] = video.frames.cols();
    if (video.category) entry["category"] = *video.category;
    if (!video.boundaries.empty()) entry["boundaries"] = video.boundaries;
    entry["summaries"] = json::array({summary_rel});
    manifest["videos"].push_back(entry);
  }
  std::ofstream out(base / "manifest.json");
  if (!out) throw std::invalid_argument("cannot write manifest under " + out_dir);
  out << manifest.dump(2) << "\n";
}

Selection training_target(const Video& video, Granularity granularity,
                          double oracle_budget) {
  if (video.summaries.empty()) {
    throw std::invalid_argument("video '" + video.id + "' has no summaries to train on");
  }
  if (granularity == Granularity::frame) return video.summaries.front();
  if (video.boundaries.empty()) {
    throw std::invalid_argument("video '" + video.id +
                                "' has no boundaries for subshot granularity");
  }
  if (video.summaries.size() > 1) {
    return oracle_subshot_summary(video.summaries, video.boundaries, oracle_budget);
  }
  return frames_to_segments(video.summaries.front(), video.boundaries);
}

std::vector<Exemplar> make_exemplars(const std::vector<Video>& videos,
                                     Granularity granularity, double oracle_budget) {
  std::vector<Exemplar> out;
  for (const Video& video : videos) {
    if (video.summaries.empty()) continue;
    Exemplar ex;
    ex.id = video.id;
    ex.frames = video.frames;
    ex.category = video.category;
    ex.boundaries = video.boundaries;
    if (granularity == Granularity::frame) {
      ex.summary = training_target(video, granularity, oracle_budget);
    } else {
      // Exemplars keep frame-level summaries; ground_summary converts on
      // demand. Derive a frame-level stand-in from the segment-level target
      // so both agree.
      const Selection segments = training_target(video, granularity, oracle_budget);
      ex.summary = middle_frames(segments, video.boundaries);
    }
    validate_exemplar(ex);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace dppsum
