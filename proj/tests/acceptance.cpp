// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and thresholds are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dppsum/corpus.hpp"
#include "dppsum/dpp.hpp"
#include "dppsum/evaluation.hpp"
#include "dppsum/learning.hpp"
#include "dppsum/rng.hpp"
#include "dppsum/segments.hpp"
#include "dppsum/similarity.hpp"
#include "dppsum/transfer.hpp"
#include "oracles.hpp"

using namespace dppsum;
using Clock = std::chrono::steady_clock;

namespace {

// Frozen regression value for the noise-0.05 synthetic corpus (criterion 9),
// established once by running the finished pipeline with kRegressionSeed.
constexpr double kNoisyRegressionF = 100.0;
constexpr std::uint64_t kRegressionSeed = 20240611;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool grad_close(double analytic, double reference) {
  const double mag = std::max(std::abs(analytic), std::abs(reference));
  if (mag < 1e-8) return std::abs(analytic - reference) <= 1e-8;
  return std::abs(analytic - reference) / mag <= 1e-4;
}

// ---- shared synthetic-pipeline helper ---------------------------------------

struct PipelineResult {
  double mean_f = 0.0;
  double baseline_f = 0.0;   // mean F of random equal-size summaries
  std::vector<Selection> predictions;
};

// Trains on all but the last `held_out` videos (in id order) and evaluates the
// held-out ones. Categories interleave, so the held-out set covers them all.
PipelineResult run_pipeline(const SynthConfig& cfg, int held_out, CategoryMode mode,
                            SimilarityKind kind, int baseline_draws = 0) {
  const auto videos = gen_synthetic_videos(cfg);
  std::vector<Video> train(videos.begin(), videos.end() - held_out);
  std::vector<Video> test(videos.end() - held_out, videos.end());

  const auto exemplars = make_exemplars(train, Granularity::frame);
  SimilarityConfig sim;
  sim.kind = kind;
  FitOptions opts;
  opts.category_mode = mode;
  const FitResult fitres = fit(exemplars, sim, Granularity::frame, opts);

  MatchConfig match;
  match.threshold = 0.5;
  PipelineResult out;
  Rng baseline_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (const Video& video : test) {
    const Selection pred = summarize(fitres.model, video.frames, video.category);
    const ScoreTriple s =
        score(pred, video.summaries[0], video.frames, video.frames, match);
    out.mean_f += s.f_score / held_out;
    out.predictions.push_back(pred);

    if (baseline_draws > 0 && !pred.empty()) {
      const int n = static_cast<int>(video.frames.rows());
      double base = 0.0;
      for (int draw = 0; draw < baseline_draws; ++draw) {
        const Selection random_pick =
            oracles::random_selection(baseline_rng, n, static_cast<int>(pred.size()));
        base += score(random_pick, video.summaries[0], video.frames, video.frames, match)
                    .f_score;
      }
      out.baseline_f += base / baseline_draws / held_out;
    }
  }
  return out;
}

// ---- criteria ----------------------------------------------------------------

bool c1_normalization(std::string& detail) {
  const auto start = Clock::now();
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + rng.below(10);
    const Matrix l = oracles::random_psd(rng, n, 0.5 + 2.0 * rng.uniform());
    const double expected = oracles::det_sum_all_subsets(l);
    const double got = std::exp(log_partition(l));
    worst = std::max(worst, std::abs(got - expected) / expected);
  }
  const double elapsed = seconds_since(start);
  std::ostringstream msg;
  msg << "max rel err " << worst << ", " << elapsed << " s";
  detail = msg.str();
  return worst <= 1e-8 && elapsed < 5.0;
}

bool c2_idealized_recovery(std::string& detail) {
  Rng rng(2025);
  int recovered = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 2 + rng.below(14);  // N_r <= 15
    const Selection y = oracles::random_selection(rng, n, 1 + rng.below(n));
    bool ok = true;
    for (double alpha : {1.1, 2.0, 10.0}) {
      if (map_exact(idealized_kernel(y, n, alpha)) != y) ok = false;
    }
    if (ok) ++recovered;
  }

  // alpha = 1: every subset of y_r attains the optimum, nothing else does.
  bool ties_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + rng.below(9);
    const Selection y = oracles::random_selection(rng, n, 1 + rng.below(n));
    const Matrix l = idealized_kernel(y, n, 1.0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const Selection s = oracles::mask_to_selection(mask, n);
      const bool subset =
          std::includes(y.begin(), y.end(), s.begin(), s.end());
      const double det = oracles::subset_det(l, s);
      if (subset && std::abs(det - 1.0) > 1e-15) ties_ok = false;
      if (!subset && det > 1e-15) ties_ok = false;
    }
    if (map_exact(l) != Selection{}) ties_ok = false;  // tie-break: empty set
  }
  std::ostringstream msg;
  msg << recovered << "/" << trials << " recovered, ties "
      << (ties_ok ? "verified" : "broken");
  detail = msg.str();
  return recovered == trials && ties_ok;
}

bool c3_transfer_identity(std::string& detail) {
  const int n = 8;
  const Matrix frames = Matrix::Identity(n, n);
  const Selection summary = {0, 3, 5};
  Exemplar ex;
  ex.id = "identity";
  ex.frames = frames;
  ex.summary = summary;

  TransferModel model;
  model.exemplars = {ex};
  model.sim.kind = SimilarityKind::dot;
  model.alphas = Vector::Constant(1, 2.0);

  const Matrix kernel = synthesize_kernel(model, frames);
  const double err = (kernel - idealized_kernel(summary, n, 2.0)).cwiseAbs().maxCoeff();
  const Selection pred = summarize(model, frames);
  MatchConfig match;
  match.threshold = 0.5;
  const double f = score(pred, summary, frames, frames, match).f_score;
  std::ostringstream msg;
  msg << "kernel err " << err << ", F " << f;
  detail = msg.str();
  return err <= 1e-12 && pred == summary && f == 100.0;
}

bool c4_synthesis_oracle(std::string& detail) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = Rng::stream(2026, seed);
    const int dim = 4 + rng.below(4);
    auto corpus = oracles::random_corpus(rng, 2 + rng.below(2), 6, dim);
    const Matrix test = oracles::random_unit_rows(rng, 3 + rng.below(3), dim);

    TransferModel model;
    model.exemplars = corpus;
    model.sim.kind = (seed % 2 == 0) ? SimilarityKind::rbf : SimilarityKind::dot;
    model.alphas = Vector::Zero(static_cast<Eigen::Index>(corpus.size()));
    std::vector<Matrix> sims, ideals;
    for (std::size_t r = 0; r < corpus.size(); ++r) {
      model.alphas(static_cast<Eigen::Index>(r)) = 0.5 + 2.0 * rng.uniform();
      sims.push_back(similarity_matrix(test, corpus[r].frames, model.sim));
      ideals.push_back(
          idealized_kernel(corpus[r], model.alphas(static_cast<Eigen::Index>(r))));
    }
    const Matrix expected = oracles::nested_loop_synthesis(sims, ideals);
    const Matrix got = synthesize_kernel(model, test);
    worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());
  }
  std::ostringstream msg;
  msg << "max entrywise err " << worst;
  detail = msg.str();
  return worst <= 1e-10;
}

bool c5_gradients(std::string& detail) {
  const auto start = Clock::now();
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = Rng::stream(2027, seed);
    const int dim = 3 + rng.below(6);  // d <= 8
    auto corpus = oracles::random_corpus(rng, 3, 10, dim);

    {
      SimilarityConfig sim;
      sim.kind = (seed % 2 == 0) ? SimilarityKind::rbf : SimilarityKind::dot;
      FitOptions opts;
      auto state = init_state(corpus, sim, Granularity::frame, opts);
      for (Eigen::Index r = 0; r < state.beta.cols(); ++r) {
        state.beta(0, r) = std::log(0.7 + 2.5 * rng.uniform());
      }
      const Matrix grad = grad_alpha(state, corpus);
      const auto fd = finite_difference_oracle(state, corpus, 1e-5);
      for (Eigen::Index r = 0; r < grad.cols(); ++r) {
        const double a = grad(0, r);
        const double b = -fd.beta(0, r);
        if (!grad_close(a, b)) ok = false;
        const double mag = std::max(std::abs(a), std::abs(b));
        if (mag >= 1e-8) worst = std::max(worst, std::abs(a - b) / mag);
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
      const auto fd = finite_difference_oracle(state, corpus, 1e-5);
      for (Eigen::Index j = 0; j < grad.size(); ++j) {
        const double a = grad(j);
        const double b = -fd.omega_log(j);
        if (!grad_close(a, b)) ok = false;
        const double mag = std::max(std::abs(a), std::abs(b));
        if (mag >= 1e-8) worst = std::max(worst, std::abs(a - b) / mag);
      }
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream msg;
  msg << "max rel err " << worst << ", " << elapsed << " s";
  detail = msg.str();
  return ok && elapsed < 60.0;
}

bool c6_hard_equivalence(std::string& detail) {
  SynthConfig cfg;
  cfg.n_videos = 10;
  cfg.n_frames = 24;
  cfg.dim = 20;
  cfg.n_categories = 2;
  cfg.keyframes_per_video = 3;
  cfg.noise_level = 0.05;
  cfg.seed = 71;
  const auto videos = gen_synthetic_videos(cfg);
  std::vector<Video> train(videos.begin(), videos.end() - 2);
  const auto exemplars = make_exemplars(train, Granularity::frame);

  SimilarityConfig sim;
  sim.kind = SimilarityKind::rbf;
  FitOptions hard;
  hard.category_mode = CategoryMode::hard;
  const FitResult joint = fit(exemplars, sim, Granularity::frame, hard);

  double max_alpha_diff = 0.0;
  bool summaries_match = true;
  for (const std::string cat : {"cat_0", "cat_1"}) {
    std::vector<Exemplar> restricted;
    std::vector<int> positions;
    for (std::size_t r = 0; r < exemplars.size(); ++r) {
      if (exemplars[r].category == cat) {
        restricted.push_back(exemplars[r]);
        positions.push_back(static_cast<int>(r));
      }
    }
    FitOptions none;
    const FitResult sub = fit(restricted, sim, Granularity::frame, none);
    const Vector& joint_alphas = joint.model.category_alphas.at(cat);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      max_alpha_diff = std::max(
          max_alpha_diff, std::abs(joint_alphas(positions[i]) - sub.model.alphas(i)));
    }
    for (const Video& video : videos) {
      if (video.category != cat) continue;
      if (summarize(joint.model, video.frames, video.category) !=
          summarize(sub.model, video.frames)) {
        summaries_match = false;
      }
    }
  }
  std::ostringstream msg;
  msg << "max alpha diff " << max_alpha_diff << ", summaries "
      << (summaries_match ? "identical" : "differ");
  detail = msg.str();
  return max_alpha_diff <= 1e-8 && summaries_match;
}

bool c7_sequential(std::string& detail) {
  bool degenerate_ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = Rng::stream(2028, seed);
    const int dim = 5 + rng.below(4);
    auto corpus = oracles::random_corpus(rng, 3, 6, dim);
    TransferModel model;
    model.exemplars = corpus;
    model.sim.kind = SimilarityKind::rbf;
    model.alphas =
        Vector::Constant(static_cast<Eigen::Index>(corpus.size()), 1.0 + rng.uniform());
    const int n = 4 + rng.below(5);
    const Matrix test = oracles::random_unit_rows(rng, n, dim);
    if (summarize_sequential(model, test, {n}) != summarize(model, test)) {
      degenerate_ok = false;
    }
  }

  // Conditioning against brute-force constrained enumeration, N <= 8.
  bool conditioning_ok = true;
  Rng rng(2029);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + rng.below(6);
    const Matrix l = oracles::random_psd(rng, n, 2.0);
    const Selection forced = oracles::random_selection(rng, n, 1 + rng.below(2));
    Selection rest;
    for (int i = 0; i < n; ++i) {
      if (std::find(forced.begin(), forced.end(), i) == forced.end()) rest.push_back(i);
    }
    Matrix cond;
    try {
      cond = condition_on(l, forced);
    } catch (const NumericalError&) {
      continue;
    }
    Selection full = forced;
    for (int p : map_exact(cond)) full.push_back(rest[p]);
    std::sort(full.begin(), full.end());
    if (full != oracles::brute_force_map_superset(l, forced)) conditioning_ok = false;
  }
  std::ostringstream msg;
  msg << "degenerate " << (degenerate_ok ? "ok" : "broken") << ", conditioning "
      << (conditioning_ok ? "ok" : "broken");
  detail = msg.str();
  return degenerate_ok && conditioning_ok;
}

bool c8_evaluation(std::string& detail) {
  // |A| = 4, |B| = 5, 3 matches.
  Matrix fa(4, 1), fb(5, 1);
  fa << 0.0, 10.0, 20.0, 30.0;
  fb << 0.1, 10.1, 20.1, 100.0, 200.0;
  MatchConfig cfg;
  cfg.threshold = 0.5;
  const ScoreTriple s = score({0, 1, 2, 3}, {0, 1, 2, 3, 4}, fa, fb, cfg);
  const bool arithmetic_ok = std::abs(s.precision - 75.0) <= 1e-9 &&
                             std::abs(s.recall - 60.0) <= 1e-9 &&
                             std::abs(s.f_score - 66.67) <= 0.01;

  // Crossing instance where first-free greedy strands one item.
  Matrix ga(3, 2), gb(3, 2);
  ga << 1.0, 0.0, 3.0, 0.0, 0.0, 0.5;
  gb << 0.0, 0.0, 2.0, 0.0, 4.0, 0.0;
  MatchConfig unit;
  unit.threshold = 1.0;
  std::vector<std::vector<int>> adj(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if ((ga.row(i) - gb.row(j)).norm() <= unit.threshold) adj[i].push_back(j);
    }
  }
  const bool crossing_ok = oracles::greedy_matching(adj, 3) == 2 &&
                           match_pairs({0, 1, 2}, {0, 1, 2}, ga, gb, unit) == 3;

  bool properties_ok = true;
  Rng rng(2030);
  for (int trial = 0; trial < 100; ++trial) {
    const int na = 1 + rng.below(8);
    const int nb = 1 + rng.below(8);
    Matrix xa(na, 2), xb(nb, 2);
    for (int i = 0; i < na; ++i) {
      xa(i, 0) = 4.0 * rng.uniform();
      xa(i, 1) = 4.0 * rng.uniform();
    }
    for (int i = 0; i < nb; ++i) {
      xb(i, 0) = 4.0 * rng.uniform();
      xb(i, 1) = 4.0 * rng.uniform();
    }
    Selection a(na), b(nb);
    for (int i = 0; i < na; ++i) a[i] = i;
    for (int i = 0; i < nb; ++i) b[i] = i;
    MatchConfig c;
    c.threshold = 2.0 * rng.uniform();
    const int m = match_pairs(a, b, xa, xb, c);
    if (m != match_pairs(b, a, xb, xa, c)) properties_ok = false;
    MatchConfig wider;
    wider.threshold = c.threshold * 1.5 + 0.05;
    if (match_pairs(a, b, xa, xb, wider) < m) properties_ok = false;
    const ScoreTriple st = score(a, b, xa, xb, c);
    const ScoreTriple ts = score(b, a, xb, xa, c);
    if (std::abs(st.f_score - ts.f_score) > 1e-9) properties_ok = false;
    for (double v : {st.precision, st.recall, st.f_score}) {
      if (v < 0.0 || v > 100.0 + 1e-9) properties_ok = false;
    }
  }
  std::ostringstream msg;
  msg << "arithmetic " << (arithmetic_ok ? "ok" : "broken") << ", crossing "
      << (crossing_ok ? "ok" : "broken") << ", properties "
      << (properties_ok ? "ok" : "broken");
  detail = msg.str();
  return arithmetic_ok && crossing_ok && properties_ok;
}

bool c9_regression(std::string& detail) {
  const auto start = Clock::now();

  SynthConfig clean;
  clean.n_videos = 10;
  clean.n_frames = 30;
  clean.dim = 24;
  clean.n_categories = 2;
  clean.keyframes_per_video = 4;
  clean.noise_level = 0.0;
  clean.seed = kRegressionSeed;
  const PipelineResult noise_free =
      run_pipeline(clean, 2, CategoryMode::hard, SimilarityKind::dot);

  SynthConfig noisy = clean;
  noisy.noise_level = 0.05;
  const PipelineResult perturbed =
      run_pipeline(noisy, 2, CategoryMode::hard, SimilarityKind::rbf, 1000);

  const double elapsed = seconds_since(start);
  std::ostringstream msg;
  msg << "noise-0 F " << noise_free.mean_f << ", noise-0.05 F " << perturbed.mean_f
      << " (baseline " << perturbed.baseline_f << ", frozen " << kNoisyRegressionF
      << "), " << elapsed << " s";
  detail = msg.str();
  return noise_free.mean_f == 100.0 &&
         perturbed.mean_f >= perturbed.baseline_f + 20.0 &&
         std::abs(perturbed.mean_f - kNoisyRegressionF) <= 0.5 && elapsed < 120.0;
}

bool c10_performance(std::string& detail) {
  SynthConfig cfg;
  cfg.n_videos = 21;
  cfg.n_frames = 100;
  cfg.dim = 32;
  cfg.keyframes_per_video = 6;
  cfg.segment_len = 10;
  cfg.noise_level = 0.1;
  cfg.seed = 5150;
  auto videos = gen_synthetic_videos(cfg);
  const Video test = videos.back();
  videos.pop_back();
  const auto exemplars = make_exemplars(videos, Granularity::frame);

  TransferModel frame_model;
  frame_model.exemplars = exemplars;
  frame_model.sim.kind = SimilarityKind::rbf;
  frame_model.alphas = Vector::Constant(static_cast<Eigen::Index>(exemplars.size()), 2.0);

  auto start = Clock::now();
  const Selection frame_pred = summarize(frame_model, test.frames);
  const double frame_seconds = seconds_since(start);

  TransferModel shot_model = frame_model;
  shot_model.granularity = Granularity::shot_mean;
  start = Clock::now();
  const Selection shot_pred =
      summarize(shot_model, test.frames, {}, test.boundaries);
  const double shot_seconds = seconds_since(start);

  std::ostringstream msg;
  msg << "frame " << frame_seconds << " s (" << frame_pred.size() << " picks), subshot "
      << shot_seconds << " s (" << shot_pred.size() << " picks)";
  detail = msg.str();
  return frame_seconds < 1.0 && shot_seconds < 0.1;
}

bool c11_noise_monotonicity(std::string& detail) {
  std::ostringstream msg;
  double prev = 101.0;
  bool monotone = true;
  for (double noise : {0.0, 0.1, 0.3, 0.6}) {
    SynthConfig cfg;
    cfg.n_videos = 12;
    cfg.n_frames = 30;
    cfg.dim = 24;
    cfg.n_categories = 1;
    cfg.keyframes_per_video = 4;
    cfg.noise_level = noise;
    cfg.seed = 424242;
    const PipelineResult res =
        run_pipeline(cfg, 4, CategoryMode::none, SimilarityKind::rbf);
    msg << "F(" << noise << ") = " << res.mean_f << "  ";
    if (res.mean_f > prev + 1e-9) monotone = false;
    prev = res.mean_f;
  }
  detail = msg.str();
  return monotone;
}

struct Criterion {
  const char* name;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"DPP normalization vs brute force", c1_normalization},
      {"idealized-kernel MAP recovery", c2_idealized_recovery},
      {"transfer identity on an orthonormal self-exemplar", c3_transfer_identity},
      {"kernel synthesis vs nested-loop oracle", c4_synthesis_oracle},
      {"analytic gradients vs finite differences", c5_gradients},
      {"hard-category fit/summarize equivalence", c6_hard_equivalence},
      {"sequential degeneracy and conditioning", c7_sequential},
      {"evaluation arithmetic, matching, properties", c8_evaluation},
      {"synthetic end-to-end regression", c9_regression},
      {"summarization latency", c10_performance},
      {"held-out F non-increasing in noise", c11_noise_monotonicity},
  };

  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string describe;
    bool ok = false;
    try {
      ok = criteria[i].run(describe);
    } catch (const std::exception& e) {
      describe = std::string("exception: ") + e.what();
    }
    std::printf("[%2zu/%zu] %s  %s (%s)\n", i + 1, criteria.size(), ok ? "PASS" : "FAIL",
                criteria[i].name, describe.c_str());
    std::fflush(stdout);
    if (!ok) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
