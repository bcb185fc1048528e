// dppsum: batch pipeline around the summary-transfer engine.
//
// Subcommands: synth, train, summarize, eval, gradcheck, splits.
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "dppsum/corpus.hpp"
#include "dppsum/dpp.hpp"
#include "dppsum/evaluation.hpp"
#include "dppsum/learning.hpp"
#include "dppsum/model_io.hpp"
#include "dppsum/rng.hpp"
#include "dppsum/segments.hpp"
#include "dppsum/transfer.hpp"

namespace fs = std::filesystem;
using namespace dppsum;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::set<std::string> parse_id_list(const std::string& csv) {
  std::set<std::string> ids;
  std::stringstream ss(csv);
  std::string id;
  while (std::getline(ss, id, ',')) {
    if (!id.empty()) ids.insert(id);
  }
  return ids;
}

// Split files are CSV: round,video_id,role with role in {train, test}.
std::set<std::string> read_split_ids(const std::string& path, int round,
                                     const std::string& role) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open split file: " + path);
  std::set<std::string> ids;
  std::string line;
  bool saw_round = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("round,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string round_str, id, line_role;
    if (!std::getline(ss, round_str, ',') || !std::getline(ss, id, ',') ||
        !std::getline(ss, line_role)) {
      throw std::invalid_argument("malformed split line: " + line);
    }
    if (std::stoi(round_str) != round) continue;
    saw_round = true;
    if (line_role == role) ids.insert(id);
  }
  if (!saw_round) {
    throw std::invalid_argument("split file has no rows for round " + std::to_string(round));
  }
  return ids;
}

std::vector<Video> filter_videos(const std::vector<Video>& videos,
                                 const std::set<std::string>& keep) {
  std::vector<Video> out;
  for (const Video& v : videos) {
    if (keep.count(v.id)) out.push_back(v);
  }
  if (out.size() != keep.size()) {
    std::set<std::string> missing = keep;
    for (const Video& v : out) missing.erase(v.id);
    throw std::invalid_argument("video id '" + *missing.begin() + "' not in the corpus");
  }
  return out;
}

struct CommonSelection {
  std::string include_csv;
  std::string split_file;
  int split_round = 0;
};

void add_selection_flags(CLI::App* cmd, CommonSelection& sel, const std::string& role) {
  cmd->add_option("--include", sel.include_csv,
                  "Comma-separated video ids to use (default: all eligible)");
  cmd->add_option("--split-file", sel.split_file,
                  "Split table from `dppsum splits`; uses the '" + role + "' rows");
  cmd->add_option("--round", sel.split_round, "Round to read from --split-file");
}

std::vector<Video> apply_selection(const std::vector<Video>& videos,
                                   const CommonSelection& sel, const std::string& role) {
  if (!sel.include_csv.empty() && !sel.split_file.empty()) {
    throw std::invalid_argument("--include and --split-file are mutually exclusive");
  }
  if (!sel.include_csv.empty()) return filter_videos(videos, parse_id_list(sel.include_csv));
  if (!sel.split_file.empty()) {
    return filter_videos(videos, read_split_ids(sel.split_file, sel.split_round, role));
  }
  return videos;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  SynthConfig cfg;
  std::string out_dir;
};

void run_synth(const SynthArgs& args) {
  gen_synthetic(args.cfg, args.out_dir);
  std::cout << "wrote " << (fs::path(args.out_dir) / "manifest.json").string() << "\n";
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string corpus;
  std::string out_model;
  std::string sim_kind = "rbf";
  double sigma = 1.0;
  std::string category_mode = "none";
  std::string granularity = "frame";
  bool learn_metric = false;
  bool exclude_self = false;
  int iters = 200;
  double step = 1.0;
  double init_alpha = 2.0;
  double oracle_budget = 0.15;
  std::uint64_t seed = 0;
  CommonSelection sel;
};

void run_train(const TrainArgs& args) {
  const auto videos = load_corpus(args.corpus);
  const auto selected = apply_selection(videos, args.sel, "train");
  const Granularity granularity = granularity_from_string(args.granularity);
  const auto exemplars = make_exemplars(selected, granularity, args.oracle_budget);
  if (exemplars.size() < selected.size()) {
    throw std::invalid_argument("every training video needs at least one summary");
  }

  SimilarityConfig sim;
  sim.kind = similarity_kind_from_string(args.sim_kind);
  sim.sigma = args.sigma;

  FitOptions opts;
  opts.category_mode = category_mode_from_string(args.category_mode);
  opts.learn_metric = args.learn_metric;
  opts.include_self = !args.exclude_self;
  opts.max_iters = args.iters;
  opts.init_step = args.step;
  opts.init_alpha = args.init_alpha;
  opts.seed = args.seed;

  FitResult result = fit(exemplars, sim, granularity, opts);
  result.model.corpus_hash = corpus_hash(args.corpus);
  result.model.oracle_budget = args.oracle_budget;
  save_model(result.model, args.out_model);

  double final_ll = 0.0;
  for (const auto& [group, trace] : result.objective_trace) final_ll += trace.back();
  std::cout << "trained " << exemplars.size() << " exemplars, log-likelihood "
            << fmt(final_ll) << ", wrote " << args.out_model << "\n";
  if (!result.converged) {
    std::cerr << "warning: iteration cap reached before convergence\n";
  }
}

// ---- summarize ------------------------------------------------------------

struct SummarizeArgs {
  std::string corpus;
  std::string model;
  std::string out_dir;
  int sequential_len = 0;
  int segment_len = 0;   // uniform-segmentation fallback for subshot tests
  double budget = 1.0;
  CommonSelection sel;
};

void run_summarize(const SummarizeArgs& args) {
  const auto videos = load_corpus(args.corpus);
  const ModelHeader header = read_model_header(args.model);

  if (!header.corpus_hash.empty() && header.corpus_hash != corpus_hash(args.corpus)) {
    std::cerr << "warning: corpus manifest differs from the one the model was trained on\n";
  }

  std::set<std::string> exemplar_ids(header.exemplar_ids.begin(), header.exemplar_ids.end());
  const auto exemplar_videos = filter_videos(videos, exemplar_ids);
  const auto exemplars =
      make_exemplars(exemplar_videos, header.granularity, header.oracle_budget);
  const TransferModel model = load_model(args.model, exemplars);

  std::vector<Video> targets;
  if (!args.sel.include_csv.empty() || !args.sel.split_file.empty()) {
    targets = apply_selection(videos, args.sel, "test");
  } else {
    for (const Video& v : videos) {
      if (!exemplar_ids.count(v.id)) targets.push_back(v);
    }
  }
  if (targets.empty()) {
    throw std::invalid_argument("no test videos to summarize");
  }
  if (args.sequential_len > 0 && model.granularity != Granularity::frame) {
    throw std::invalid_argument("sequential extraction requires a frame-granularity model");
  }
  if (args.budget < 1.0 && model.granularity == Granularity::frame) {
    throw std::invalid_argument("--budget applies to subshot-granularity models");
  }

  // Compute every summary before writing anything.
  std::vector<std::pair<std::string, Selection>> outputs;
  for (const Video& video : targets) {
    Selection frames;
    if (model.granularity == Granularity::frame) {
      if (args.sequential_len > 0) {
        const auto bounds =
            uniform_segments(static_cast<int>(video.frames.rows()), args.sequential_len);
        frames = summarize_sequential(model, video.frames, bounds, video.category);
      } else {
        frames = summarize(model, video.frames, video.category);
      }
    } else {
      std::vector<int> bounds = video.boundaries;
      if (bounds.empty()) {
        if (args.segment_len <= 0) {
          throw std::invalid_argument("video '" + video.id +
                                      "' has no boundaries; pass --segment-len");
        }
        bounds = uniform_segments(static_cast<int>(video.frames.rows()), args.segment_len);
      }
      const Matrix kernel = synthesize_kernel(model, video.frames, video.category, bounds);
      Selection segments = map_greedy(kernel);
      if (args.budget < 1.0) {
        segments = budgeted_truncate(segments, kernel, bounds, args.budget);
      }
      frames = middle_frames(segments, bounds);
    }
    outputs.emplace_back(video.id, std::move(frames));
  }

  fs::create_directories(args.out_dir);
  for (const auto& [id, summary] : outputs) {
    write_summary((fs::path(args.out_dir) / (id + ".txt")).string(), summary);
  }
  std::cout << "wrote " << outputs.size() << " summaries under " << args.out_dir << "\n";
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string corpus;
  std::string pred_dir;
  std::string out_csv;
  double threshold = 0.5;
  std::string agg = "mean";
};

void run_eval(const EvalArgs& args) {
  const auto videos = load_corpus(args.corpus);
  const AggregationMode mode = aggregation_mode_from_string(args.agg);
  MatchConfig cfg;
  cfg.threshold = args.threshold;

  struct Row {
    std::string id;
    ScoreTriple s;
    double matches = 0.0;
    double pred_size = 0.0;
    double truth_size = 0.0;
  };
  std::vector<Row> rows;
  for (const Video& video : videos) {
    const fs::path pred_path = fs::path(args.pred_dir) / (video.id + ".txt");
    if (!fs::exists(pred_path)) continue;
    if (video.summaries.empty()) {
      throw std::invalid_argument("video '" + video.id + "' has no user summaries to score");
    }
    Selection pred = read_summary(pred_path.string());
    validate_selection(pred, static_cast<int>(video.frames.rows()));

    Row row;
    row.id = video.id;
    row.pred_size = static_cast<double>(pred.size());
    if (mode == AggregationMode::mean) {
      for (const Selection& user : video.summaries) {
        const int m = match_pairs(pred, user, video.frames, video.frames, cfg);
        row.matches += static_cast<double>(m) / video.summaries.size();
        row.truth_size += static_cast<double>(user.size()) / video.summaries.size();
      }
    } else {
      // Column values follow the user selected by the max-F rule.
      double best_f = -1.0;
      for (const Selection& user : video.summaries) {
        const ScoreTriple s = score(pred, user, video.frames, video.frames, cfg);
        if (s.f_score > best_f) {
          best_f = s.f_score;
          row.matches = match_pairs(pred, user, video.frames, video.frames, cfg);
          row.truth_size = static_cast<double>(user.size());
        }
      }
    }
    row.s = aggregate(pred, video.summaries, video.frames, cfg, mode);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::invalid_argument("no predictions found under " + args.pred_dir);
  }

  std::ostringstream csv;
  csv << "video_id,precision,recall,f_score,matches,pred_size,truth_size\n";
  for (const Row& row : rows) {
    csv << row.id << ',' << fmt(row.s.precision) << ',' << fmt(row.s.recall) << ','
        << fmt(row.s.f_score) << ',' << fmt(row.matches) << ',' << fmt(row.pred_size)
        << ',' << fmt(row.truth_size) << "\n";
  }
  const auto column_stats = [&](auto getter) {
    double mean = 0.0;
    for (const Row& row : rows) mean += getter(row);
    mean /= rows.size();
    double var = 0.0;
    for (const Row& row : rows) var += (getter(row) - mean) * (getter(row) - mean);
    const double stderr_ =
        rows.size() > 1 ? std::sqrt(var / (rows.size() - 1)) / std::sqrt(double(rows.size()))
                        : 0.0;
    return std::make_pair(mean, stderr_);
  };
  const auto p = column_stats([](const Row& r) { return r.s.precision; });
  const auto rc = column_stats([](const Row& r) { return r.s.recall; });
  const auto f = column_stats([](const Row& r) { return r.s.f_score; });
  const auto m = column_stats([](const Row& r) { return r.matches; });
  const auto ps = column_stats([](const Row& r) { return r.pred_size; });
  const auto ts = column_stats([](const Row& r) { return r.truth_size; });
  csv << "mean," << fmt(p.first) << ',' << fmt(rc.first) << ',' << fmt(f.first) << ','
      << fmt(m.first) << ',' << fmt(ps.first) << ',' << fmt(ts.first) << "\n";
  csv << "stderr," << fmt(p.second) << ',' << fmt(rc.second) << ',' << fmt(f.second) << ','
      << fmt(m.second) << ',' << fmt(ps.second) << ',' << fmt(ts.second) << "\n";

  if (args.out_csv.empty() || args.out_csv == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(args.out_csv);
    if (!out) throw std::invalid_argument("cannot open output file: " + args.out_csv);
    out << csv.str();
    std::cout << "mean F " << fmt(f.first) << " +/- " << fmt(f.second) << ", wrote "
              << args.out_csv << "\n";
  }
}

// ---- gradcheck ------------------------------------------------------------

struct GradcheckArgs {
  int trials = 20;
  int videos = 3;
  int max_frames = 10;
  int dim = 8;
  double h = 1e-5;
  double tol = 1e-4;
  std::uint64_t seed = 1234;
};

bool close_enough(double analytic, double reference, double tol) {
  const double mag = std::max(std::abs(analytic), std::abs(reference));
  if (mag < 1e-8) return std::abs(analytic - reference) <= 1e-8;
  return std::abs(analytic - reference) / mag <= tol;
}

// Mirrors the random corpora used by the test suites: unit rows with a
// spread guarantee and summaries small enough to keep minors nonsingular.
std::vector<Exemplar> gradcheck_corpus(Rng& rng, int n_videos, int max_frames, int dim) {
  std::vector<Exemplar> corpus;
  for (int v = 0; v < n_videos; ++v) {
    Exemplar ex;
    ex.id = "ex_" + std::to_string(v);
    const int n = 2 + rng.below(std::max(1, max_frames - 1));
    ex.frames = Matrix(n, dim);
    for (int i = 0; i < n; ++i) {
      for (int attempt = 0; attempt < 64; ++attempt) {
        for (int j = 0; j < dim; ++j) ex.frames(i, j) = rng.normal();
        ex.frames.row(i).normalize();
        bool ok = true;
        for (int k = 0; k < i; ++k) {
          if (std::abs(ex.frames.row(i).dot(ex.frames.row(k))) > 0.9) {
            ok = false;
            break;
          }
        }
        if (ok) break;
      }
    }
    const int max_summary = std::max(1, std::min(n / 2, dim - 1));
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    rng.shuffle(all);
    ex.summary.assign(all.begin(), all.begin() + 1 + rng.below(max_summary));
    std::sort(ex.summary.begin(), ex.summary.end());
    corpus.push_back(std::move(ex));
  }
  return corpus;
}

void run_gradcheck(const GradcheckArgs& args) {
  double worst_alpha = 0.0;
  double worst_metric = 0.0;
  int failures = 0;
  for (int trial = 0; trial < args.trials; ++trial) {
    Rng rng = Rng::stream(args.seed, static_cast<std::uint64_t>(trial));
    const auto corpus = gradcheck_corpus(rng, args.videos, args.max_frames, args.dim);

    {
      SimilarityConfig sim;
      sim.kind = (trial % 2 == 0) ? SimilarityKind::rbf : SimilarityKind::dot;
      FitOptions opts;
      auto state = init_state(corpus, sim, Granularity::frame, opts);
      for (Eigen::Index r = 0; r < state.beta.cols(); ++r) {
        state.beta(0, r) = std::log(0.7 + 2.5 * rng.uniform());
      }
      const Matrix grad = grad_alpha(state, corpus);
      const auto fd = finite_difference_oracle(state, corpus, args.h);
      for (Eigen::Index r = 0; r < grad.cols(); ++r) {
        const double a = grad(0, r);
        const double b = -fd.beta(0, r);
        const double mag = std::max(std::abs(a), std::abs(b));
        if (mag >= 1e-8) worst_alpha = std::max(worst_alpha, std::abs(a - b) / mag);
        if (!close_enough(a, b, args.tol)) ++failures;
      }
    }
    {
      SimilarityConfig sim;
      sim.kind = SimilarityKind::mahalanobis;
      FitOptions opts;
      opts.learn_metric = true;
      auto state = init_state(corpus, sim, Granularity::frame, opts);
      for (Eigen::Index j = 0; j < state.omega_log.size(); ++j) {
        state.omega_log(j) = 0.4 * rng.normal();
      }
      const Vector grad = grad_metric(state, corpus);
      const auto fd = finite_difference_oracle(state, corpus, args.h);
      for (Eigen::Index j = 0; j < grad.size(); ++j) {
        const double a = grad(j);
        const double b = -fd.omega_log(j);
        const double mag = std::max(std::abs(a), std::abs(b));
        if (mag >= 1e-8) worst_metric = std::max(worst_metric, std::abs(a - b) / mag);
        if (!close_enough(a, b, args.tol)) ++failures;
      }
    }
  }
  std::cout << "gradcheck: " << args.trials << " trials, worst scale rel err "
            << worst_alpha << ", worst metric rel err " << worst_metric << "\n";
  if (failures > 0) {
    throw NumericalError(std::to_string(failures) +
                         " gradient coordinates disagree with finite differences");
  }
}

// ---- splits ---------------------------------------------------------------

struct SplitsArgs {
  std::string corpus;
  std::string out_csv;
  int rounds = 5;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

void run_splits(const SplitsArgs& args) {
  if (!(args.train_fraction > 0.0 && args.train_fraction < 1.0)) {
    throw std::invalid_argument("--train-fraction must be in (0, 1)");
  }
  if (args.rounds < 1) throw std::invalid_argument("--rounds must be >= 1");
  const auto videos = load_corpus(args.corpus);
  if (videos.size() < 2) {
    throw std::invalid_argument("splitting needs at least 2 videos");
  }

  std::ostringstream csv;
  csv << "round,video_id,role\n";
  for (int round = 0; round < args.rounds; ++round) {
    std::vector<std::string> ids;
    for (const Video& v : videos) ids.push_back(v.id);
    Rng rng = Rng::stream(args.seed, static_cast<std::uint64_t>(round));
    rng.shuffle(ids);
    std::size_t n_train = static_cast<std::size_t>(args.train_fraction * ids.size());
    n_train = std::min(std::max<std::size_t>(n_train, 1), ids.size() - 1);
    std::vector<std::pair<std::string, std::string>> rows;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      rows.emplace_back(ids[i], i < n_train ? "train" : "test");
    }
    std::sort(rows.begin(), rows.end());  // manifest-independent stable layout
    for (const auto& [id, role] : rows) {
      csv << round << ',' << id << ',' << role << "\n";
    }
  }
  if (args.out_csv.empty() || args.out_csv == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(args.out_csv);
    if (!out) throw std::invalid_argument("cannot open output file: " + args.out_csv);
    out << csv.str();
    std::cout << "wrote " << args.out_csv << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exemplar-based video summarization via DPP kernel transfer"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--videos", synth.cfg.n_videos, "Number of videos");
  synth_cmd->add_option("--frames", synth.cfg.n_frames, "Frames per video");
  synth_cmd->add_option("--dim", synth.cfg.dim, "Feature dimension");
  synth_cmd->add_option("--categories", synth.cfg.n_categories, "Number of categories");
  synth_cmd->add_option("--keyframes", synth.cfg.keyframes_per_video, "Keyframes per video");
  synth_cmd->add_option("--segment-len", synth.cfg.segment_len,
                        "Uniform segment length recorded in the manifest (0 = none)");
  synth_cmd->add_option("--noise", synth.cfg.noise_level, "Gaussian noise scale");
  synth_cmd->add_option("--seed", synth.cfg.seed, "RNG seed");
  synth_cmd->callback([&synth] { run_synth(synth); });

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit transfer scales by maximum likelihood");
  train_cmd->add_option("--corpus", train.corpus, "Corpus manifest")->required();
  train_cmd->add_option("--out", train.out_model, "Model file to write")->required();
  train_cmd->add_option("--sim", train.sim_kind, "Similarity kind: dot|rbf|mahalanobis");
  train_cmd->add_option("--sigma", train.sigma, "RBF bandwidth");
  train_cmd->add_option("--category-mode", train.category_mode, "none|hard|soft");
  train_cmd->add_option("--granularity", train.granularity, "frame|shot-mean|shot-max");
  train_cmd->add_flag("--learn-metric", train.learn_metric,
                      "Learn a diagonal metric (mahalanobis only)");
  train_cmd->add_flag("--exclude-self", train.exclude_self,
                      "Ablation: drop each video's own contribution from its kernel");
  train_cmd->add_option("--iters", train.iters, "Gradient-ascent iteration cap");
  train_cmd->add_option("--step", train.step, "Initial step size");
  train_cmd->add_option("--init-alpha", train.init_alpha, "Initial scale value");
  train_cmd->add_option("--oracle-budget", train.oracle_budget,
                        "Length budget for subshot oracle training targets");
  train_cmd->add_option("--seed", train.seed, "RNG seed (reserved)");
  add_selection_flags(train_cmd, train.sel, "train");
  train_cmd->callback([&train] { run_train(train); });

  SummarizeArgs summarize;
  auto* sum_cmd = app.add_subcommand("summarize", "Write summaries for test videos");
  sum_cmd->add_option("--corpus", summarize.corpus, "Corpus manifest")->required();
  sum_cmd->add_option("--model", summarize.model, "Trained model file")->required();
  sum_cmd->add_option("--out", summarize.out_dir, "Directory for summary files")->required();
  sum_cmd->add_option("--sequential-len", summarize.sequential_len,
                      "Segment length for sequential extraction (0 = off)");
  sum_cmd->add_option("--segment-len", summarize.segment_len,
                      "Uniform-segmentation fallback for subshot models");
  sum_cmd->add_option("--budget", summarize.budget,
                      "Summary length budget fraction (subshot models)");
  add_selection_flags(sum_cmd, summarize.sel, "test");
  sum_cmd->callback([&summarize] { run_summarize(summarize); });

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against user summaries");
  eval_cmd->add_option("--corpus", eval.corpus, "Corpus manifest")->required();
  eval_cmd->add_option("--pred", eval.pred_dir, "Directory of predicted summaries")->required();
  eval_cmd->add_option("--out", eval.out_csv, "Score table to write ('-' = stdout)");
  eval_cmd->add_option("--threshold", eval.threshold, "Match distance threshold");
  eval_cmd->add_option("--agg", eval.agg, "Multi-user aggregation: mean|max");
  eval_cmd->callback([&eval] { run_eval(eval); });

  GradcheckArgs gradcheck;
  auto* grad_cmd = app.add_subcommand("gradcheck",
                                      "Compare analytic gradients with finite differences");
  grad_cmd->add_option("--trials", gradcheck.trials, "Number of random corpora");
  grad_cmd->add_option("--videos", gradcheck.videos, "Videos per corpus");
  grad_cmd->add_option("--max-frames", gradcheck.max_frames, "Frame cap per video");
  grad_cmd->add_option("--dim", gradcheck.dim, "Feature dimension");
  grad_cmd->add_option("--fd-step", gradcheck.h, "Finite-difference step");
  grad_cmd->add_option("--tol", gradcheck.tol, "Relative-error tolerance");
  grad_cmd->add_option("--seed", gradcheck.seed, "RNG seed");
  grad_cmd->callback([&gradcheck] { run_gradcheck(gradcheck); });

  SplitsArgs splits;
  auto* splits_cmd = app.add_subcommand("splits", "Deterministic train/test splits");
  splits_cmd->add_option("--corpus", splits.corpus, "Corpus manifest")->required();
  splits_cmd->add_option("--out", splits.out_csv, "Split table to write ('-' = stdout)");
  splits_cmd->add_option("--rounds", splits.rounds, "Number of rounds");
  splits_cmd->add_option("--train-fraction", splits.train_fraction, "Training fraction");
  splits_cmd->add_option("--seed", splits.seed, "RNG seed");
  splits_cmd->callback([&splits] { run_splits(splits); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
