#include "dppsum/learning.hpp"

#include "dppsum/dpp.hpp"
#include "dppsum/segments.hpp"
#include "dppsum/similarity.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace dppsum {

namespace {

constexpr double kZeroProbPenalty = 1e6;

struct PreparedVideo {
  const Exemplar* ex = nullptr;
  Matrix desc;          // ground descriptors (frames, or renormalized shot means)
  Selection gsummary;   // ground-truth summary over the ground set
  int ground = 0;       // ground-set size (segment count under shot-max)
  Eigen::Index group = 0;
};

struct Workspace {
  std::vector<PreparedVideo> vids;
  Granularity granularity = Granularity::frame;
};

Workspace prepare(const LearnState& state, const std::vector<Exemplar>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("learning corpus is empty");
  Workspace ws;
  ws.granularity = state.granularity;
  ws.vids.reserve(corpus.size());
  for (const Exemplar& ex : corpus) {
    validate_exemplar(ex);
    PreparedVideo pv;
    pv.ex = &ex;
    if (state.granularity == Granularity::shot_mean) {
      pv.desc = shot_mean_features(ex.frames, ex.boundaries);
    } else {
      pv.desc = ex.frames;
    }
    pv.gsummary = ground_summary(ex, state.granularity);
    pv.ground = ground_size(ex, state.granularity);
    pv.group = group_of(state, ex.category);
    ws.vids.push_back(std::move(pv));
  }
  return ws;
}

Matrix pair_similarity(const PreparedVideo& test, const PreparedVideo& train,
                       Granularity g, const SimilarityConfig& cfg) {
  if (g == Granularity::shot_max) {
    return shot_max_similarity_matrix(test.ex->frames, train.ex->frames,
                                      test.ex->boundaries, train.ex->boundaries, cfg);
  }
  return similarity_matrix(test.desc, train.desc, cfg);
}

Matrix summary_columns(const Matrix& sim, const Selection& summary) {
  Matrix b(sim.rows(), summary.size());
  for (std::size_t k = 0; k < summary.size(); ++k) {
    b.col(static_cast<Eigen::Index>(k)) = sim.col(summary[k]);
  }
  return b;
}

// Likelihood pieces for one training video treated as a test input.
struct VideoEval {
  double log_p = 0.0;
  bool singular_truth = false;
  Matrix g;                   // M - (L+I)^{-1}; only when want_gradients
  std::vector<Matrix> b;      // per active exemplar; empty matrices when inactive
  std::vector<double> alpha;  // applied scales, 0 when inactive
};

VideoEval eval_video(const LearnState& state, const Workspace& ws, std::size_t q,
                     const SimilarityConfig& cfg, bool want_gradients) {
  const PreparedVideo& video = ws.vids[q];
  const Eigen::Index g = video.group;
  const int n = video.ground;
  const std::size_t r_count = ws.vids.size();

  VideoEval out;
  out.alpha.assign(r_count, 0.0);
  out.b.resize(r_count);

  KahanMatrixSum acc(n, n);
  for (std::size_t r = 0; r < r_count; ++r) {
    if (!state.include_self && r == q) continue;
    const double alpha = state.alpha(g, static_cast<Eigen::Index>(r));
    if (alpha == 0.0) continue;
    const Matrix sim = pair_similarity(video, ws.vids[r], ws.granularity, cfg);
    Matrix b = summary_columns(sim, ws.vids[r].gsummary);
    acc.add(alpha * (b * b.transpose()));
    out.alpha[r] = alpha;
    if (want_gradients) out.b[r] = std::move(b);
  }
  Matrix kernel = acc.value();
  kernel = 0.5 * (kernel + kernel.transpose()).eval();

  Matrix shifted = kernel + Matrix::Identity(n, n);
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success) {
    shifted.diagonal().array() += 1e-10 * kernel.trace() / std::max(1, n);
    llt.compute(shifted);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("likelihood kernel factorization failed for video '" +
                           video.ex->id + "'");
    }
  }
  const double log_norm = 2.0 * llt.matrixLLT().diagonal().array().log().sum();

  const Selection& truth = video.gsummary;
  Matrix minor(truth.size(), truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = 0; j < truth.size(); ++j) {
      minor(i, j) = kernel(truth[i], truth[j]);
    }
  }
  Eigen::LDLT<Matrix> minor_ldlt(minor);
  const double minor_scale = std::max(1.0, minor.diagonal().cwiseAbs().maxCoeff());
  if (minor_ldlt.info() != Eigen::Success ||
      minor_ldlt.vectorD().minCoeff() <= 1e-12 * minor_scale) {
    out.singular_truth = true;
    out.log_p = -kZeroProbPenalty;
    return out;
  }
  const double log_minor = minor_ldlt.vectorD().array().log().sum();
  out.log_p = log_minor - log_norm;

  if (want_gradients) {
    const Matrix inv_shifted = llt.solve(Matrix::Identity(n, n));
    const Matrix minor_inv =
        minor_ldlt.solve(Matrix::Identity(minor.rows(), minor.rows()));
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      for (std::size_t j = 0; j < truth.size(); ++j) {
        m(truth[i], truth[j]) = minor_inv(i, j);
      }
    }
    out.g = m - inv_shifted;
  }
  return out;
}

}  // namespace

Vector LearnState::alpha_row(Eigen::Index g) const {
  Vector out(beta.cols());
  for (Eigen::Index r = 0; r < beta.cols(); ++r) out(r) = alpha(g, r);
  return out;
}

SimilarityConfig LearnState::sim_with_metric() const {
  SimilarityConfig cfg = sim;
  if (learn_metric && sim.kind == SimilarityKind::mahalanobis) {
    cfg.metric_diag = omega_log.array().exp();
    cfg.metric_full.resize(0, 0);
  }
  return cfg;
}

Eigen::Index group_of(const LearnState& state, const std::optional<std::string>& category) {
  if (state.groups.size() == 1 && state.groups[0].empty()) return 0;
  if (!category) {
    throw std::invalid_argument("video without category in a category-aware fit");
  }
  const auto it = std::find(state.groups.begin(), state.groups.end(), *category);
  if (it == state.groups.end()) {
    throw std::invalid_argument("unknown category '" + *category + "'");
  }
  return static_cast<Eigen::Index>(it - state.groups.begin());
}

LearnState init_state(const std::vector<Exemplar>& corpus, const SimilarityConfig& sim,
                      Granularity granularity, const FitOptions& opts) {
  if (corpus.empty()) throw std::invalid_argument("learning corpus is empty");
  if (!(opts.init_alpha > 0.0)) {
    throw std::invalid_argument("init_alpha must be positive");
  }
  LearnState state;
  state.sim = sim;
  state.granularity = granularity;
  state.learn_metric = opts.learn_metric;
  state.include_self = opts.include_self;
  if (opts.learn_metric && sim.kind != SimilarityKind::mahalanobis) {
    throw std::invalid_argument("metric learning requires the mahalanobis similarity kind");
  }
  if (opts.learn_metric && opts.category_mode != CategoryMode::none) {
    // A single shared metric cannot be fit per category group independently.
    throw std::invalid_argument("metric learning is supported with category mode 'none' only");
  }

  const auto r_count = static_cast<Eigen::Index>(corpus.size());
  if (opts.category_mode == CategoryMode::none) {
    state.groups = {""};
    state.beta = Matrix::Constant(1, r_count, std::log(opts.init_alpha));
    state.mask = Matrix::Ones(1, r_count);
  } else {
    std::set<std::string> cats;
    for (const Exemplar& ex : corpus) {
      if (!ex.category) {
        throw std::invalid_argument("exemplar '" + ex.id +
                                    "' lacks a category required by mode '" +
                                    to_string(opts.category_mode) + "'");
      }
      cats.insert(*ex.category);
    }
    state.groups.assign(cats.begin(), cats.end());
    const auto g_count = static_cast<Eigen::Index>(state.groups.size());
    state.beta = Matrix::Constant(g_count, r_count, std::log(opts.init_alpha));
    if (opts.category_mode == CategoryMode::hard) {
      state.mask = Matrix::Zero(g_count, r_count);
      for (Eigen::Index r = 0; r < r_count; ++r) {
        const Eigen::Index g = group_of(state, corpus[r].category);
        state.mask(g, r) = 1.0;
      }
    } else {
      state.mask = Matrix::Ones(g_count, r_count);
    }
  }
  if (opts.learn_metric) {
    const Eigen::Index dim = corpus.front().frames.cols();
    if (sim.metric_diag.size() > 0) {
      if (sim.metric_diag.minCoeff() <= 0.0) {
        throw std::invalid_argument("initial metric entries must be positive");
      }
      state.omega_log = sim.metric_diag.array().log();
    } else {
      state.omega_log = Vector::Zero(dim);
    }
  }
  return state;
}

double leave_self_in_nll(const LearnState& state, const std::vector<Exemplar>& corpus) {
  const Workspace ws = prepare(state, corpus);
  const SimilarityConfig cfg = state.sim_with_metric();
  double nll = 0.0;
  for (std::size_t q = 0; q < ws.vids.size(); ++q) {
    nll -= eval_video(state, ws, q, cfg, false).log_p;
  }
  return nll;
}

Matrix grad_alpha(const LearnState& state, const std::vector<Exemplar>& corpus) {
  const Workspace ws = prepare(state, corpus);
  const SimilarityConfig cfg = state.sim_with_metric();
  Matrix grad = Matrix::Zero(state.beta.rows(), state.beta.cols());
  for (std::size_t q = 0; q < ws.vids.size(); ++q) {
    const VideoEval ev = eval_video(state, ws, q, cfg, true);
    if (ev.singular_truth) {
      throw NumericalError("ground-truth summary of video '" + ws.vids[q].ex->id +
                           "' has zero probability under the current parameters");
    }
    const Eigen::Index g = ws.vids[q].group;
    for (std::size_t r = 0; r < ws.vids.size(); ++r) {
      if (ev.alpha[r] == 0.0) continue;
      // d logP / d alpha_r = tr(B' G B) for the summary columns B of S_r.
      const double d_alpha = (ev.b[r].array() * (ev.g * ev.b[r]).array()).sum();
      grad(g, static_cast<Eigen::Index>(r)) += d_alpha * ev.alpha[r];  // chain to beta
    }
  }
  return grad;
}

namespace {

// Shared inner loop of the metric gradients: accumulates either the diagonal
// d logP / d omega vector or the full d logP / d Omega matrix.
void accumulate_metric(const LearnState& state, const std::vector<Exemplar>& corpus,
                       Vector* diag_out, Matrix* full_out) {
  if (state.sim.kind != SimilarityKind::mahalanobis) {
    throw std::invalid_argument("metric gradient requires the mahalanobis similarity kind");
  }
  if (state.granularity == Granularity::shot_max) {
    throw std::invalid_argument("metric gradient is undefined for shot-max similarity");
  }
  const Workspace ws = prepare(state, corpus);
  const SimilarityConfig cfg = state.sim_with_metric();
  for (std::size_t q = 0; q < ws.vids.size(); ++q) {
    const VideoEval ev = eval_video(state, ws, q, cfg, true);
    if (ev.singular_truth) {
      throw NumericalError("ground-truth summary of video '" + ws.vids[q].ex->id +
                           "' has zero probability under the current parameters");
    }
    const Matrix& x = ws.vids[q].desc;
    for (std::size_t r = 0; r < ws.vids.size(); ++r) {
      if (ev.alpha[r] == 0.0) continue;
      const PreparedVideo& train = ws.vids[r];
      Matrix y(train.gsummary.size(), train.desc.cols());
      for (std::size_t k = 0; k < train.gsummary.size(); ++k) {
        y.row(static_cast<Eigen::Index>(k)) = train.desc.row(train.gsummary[k]);
      }
      // C = ((G S L_r) o S) restricted to the summary columns, where it is
      // alpha * (G B) o B.
      const Matrix c = ev.alpha[r] * ((ev.g * ev.b[r]).array() * ev.b[r].array()).matrix();
      const Vector rc = c.rowwise().sum();
      const Vector cc = c.colwise().sum();
      if (diag_out) {
        // d logP / d omega_j = -2 sum_ik C_ik (x_i - y_k)_j^2
        Vector term = (x.array().square().matrix().transpose() * rc) +
                      (y.array().square().matrix().transpose() * cc) -
                      2.0 * (x.array() * (c * y).array()).colwise().sum().matrix().transpose();
        *diag_out += -2.0 * term;
      }
      if (full_out) {
        const Matrix p1 = x.transpose() * c * y;
        const Matrix p2 = x.transpose() * rc.asDiagonal() * x;
        const Matrix p3 = y.transpose() * cc.asDiagonal() * y;
        *full_out += 2.0 * (p1 + p1.transpose() - p2 - p3);
      }
    }
  }
}

}  // namespace

Vector grad_metric(const LearnState& state, const std::vector<Exemplar>& corpus) {
  if (state.omega_log.size() == 0) {
    throw std::invalid_argument("grad_metric: state has no metric parameters");
  }
  Vector grad_omega = Vector::Zero(state.omega_log.size());
  accumulate_metric(state, corpus, &grad_omega, nullptr);
  // Chain through omega = exp(omega_log).
  return (grad_omega.array() * state.omega_log.array().exp()).matrix();
}

Matrix grad_metric_matrix(const LearnState& state, const std::vector<Exemplar>& corpus) {
  const Eigen::Index dim = corpus.front().frames.cols();
  Matrix grad = Matrix::Zero(dim, dim);
  accumulate_metric(state, corpus, nullptr, &grad);
  return grad;
}

Matrix grad_metric_factored(const LearnState& state, const std::vector<Exemplar>& corpus) {
  const SimilarityConfig cfg = state.sim_with_metric();
  const Eigen::Index dim = corpus.front().frames.cols();
  Matrix omega;
  if (cfg.metric_full.size() > 0) {
    omega = cfg.metric_full;
  } else if (cfg.metric_diag.size() > 0) {
    omega = Matrix(cfg.metric_diag.asDiagonal());
  } else {
    omega = Matrix::Identity(dim, dim);
  }
  return 2.0 * omega * grad_metric_matrix(state, corpus);
}

Vector central_differences(const std::function<double(const Vector&)>& f,
                           const Vector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double hi = f(probe);
    probe(i) = x(i) - h;
    const double lo = f(probe);
    probe(i) = x(i);
    grad(i) = (hi - lo) / (2.0 * h);
  }
  return grad;
}

FdGradients finite_difference_oracle(const LearnState& state,
                                     const std::vector<Exemplar>& corpus, double h) {
  FdGradients out;
  out.beta = Matrix::Zero(state.beta.rows(), state.beta.cols());
  for (Eigen::Index g = 0; g < state.beta.rows(); ++g) {
    for (Eigen::Index r = 0; r < state.beta.cols(); ++r) {
      const auto f = [&](const Vector& v) {
        LearnState probe = state;
        probe.beta(g, r) = v(0);
        return leave_self_in_nll(probe, corpus);
      };
      Vector x(1);
      x(0) = state.beta(g, r);
      out.beta(g, r) = central_differences(f, x, h)(0);
    }
  }
  if (state.learn_metric && state.omega_log.size() > 0) {
    const auto f = [&](const Vector& v) {
      LearnState probe = state;
      probe.omega_log = v;
      return leave_self_in_nll(probe, corpus);
    };
    out.omega_log = central_differences(f, state.omega_log, h);
  }
  return out;
}

namespace {

// Flattened view of one group's free parameters: active beta entries
// followed by the metric coordinates (group 0 only, none mode).
struct GroupParams {
  Eigen::Index group;
  std::vector<Eigen::Index> active;  // exemplar indices with mask == 1
  bool with_metric;
};

Vector pack(const LearnState& state, const GroupParams& gp) {
  Vector x(gp.active.size() + (gp.with_metric ? state.omega_log.size() : 0));
  for (std::size_t i = 0; i < gp.active.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = state.beta(gp.group, gp.active[i]);
  }
  if (gp.with_metric) {
    x.tail(state.omega_log.size()) = state.omega_log;
  }
  return x;
}

void unpack(const Vector& x, const GroupParams& gp, LearnState& state) {
  for (std::size_t i = 0; i < gp.active.size(); ++i) {
    state.beta(gp.group, gp.active[i]) = x(static_cast<Eigen::Index>(i));
  }
  if (gp.with_metric) {
    state.omega_log = x.tail(state.omega_log.size());
  }
}

}  // namespace

FitResult fit(const std::vector<Exemplar>& corpus, const SimilarityConfig& sim,
              Granularity granularity, const FitOptions& opts) {
  if (corpus.size() < 2) {
    throw std::invalid_argument("fit requires a corpus of at least 2 exemplars");
  }
  if (opts.max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (!(opts.init_step > 0.0)) throw std::invalid_argument("init_step must be positive");

  LearnState state = init_state(corpus, sim, granularity, opts);
  const Workspace ws = prepare(state, corpus);

  // Group log-likelihood: only the videos of the group contribute, so each
  // group's parameters can be optimized independently.
  const auto group_ll = [&](const LearnState& s, Eigen::Index g) {
    const SimilarityConfig cfg = s.sim_with_metric();
    double ll = 0.0;
    for (std::size_t q = 0; q < ws.vids.size(); ++q) {
      if (ws.vids[q].group != g) continue;
      ll += eval_video(s, ws, q, cfg, false).log_p;
    }
    return ll;
  };

  const auto group_grad = [&](const LearnState& s, const GroupParams& gp) {
    const SimilarityConfig cfg = s.sim_with_metric();
    Matrix gb = Matrix::Zero(s.beta.rows(), s.beta.cols());
    Vector gm = Vector::Zero(gp.with_metric ? s.omega_log.size() : 0);
    for (std::size_t q = 0; q < ws.vids.size(); ++q) {
      if (ws.vids[q].group != gp.group) continue;
      const VideoEval ev = eval_video(s, ws, q, cfg, true);
      if (ev.singular_truth) {
        throw NumericalError("ground-truth summary of video '" + ws.vids[q].ex->id +
                             "' has zero probability under the current parameters");
      }
      for (std::size_t r = 0; r < ws.vids.size(); ++r) {
        if (ev.alpha[r] == 0.0) continue;
        const double d_alpha = (ev.b[r].array() * (ev.g * ev.b[r]).array()).sum();
        gb(gp.group, static_cast<Eigen::Index>(r)) += d_alpha * ev.alpha[r];
      }
      if (gp.with_metric) {
        const Matrix& x = ws.vids[q].desc;
        for (std::size_t r = 0; r < ws.vids.size(); ++r) {
          if (ev.alpha[r] == 0.0) continue;
          const PreparedVideo& train = ws.vids[r];
          Matrix y(train.gsummary.size(), train.desc.cols());
          for (std::size_t k = 0; k < train.gsummary.size(); ++k) {
            y.row(static_cast<Eigen::Index>(k)) = train.desc.row(train.gsummary[k]);
          }
          const Matrix c =
              ev.alpha[r] * ((ev.g * ev.b[r]).array() * ev.b[r].array()).matrix();
          const Vector rc = c.rowwise().sum();
          const Vector cc = c.colwise().sum();
          Vector term = (x.array().square().matrix().transpose() * rc) +
                        (y.array().square().matrix().transpose() * cc) -
                        2.0 * (x.array() * (c * y).array())
                                  .colwise().sum().matrix().transpose();
          gm += -2.0 * term;
        }
      }
    }
    Vector flat(gp.active.size() + gm.size());
    for (std::size_t i = 0; i < gp.active.size(); ++i) {
      flat(static_cast<Eigen::Index>(i)) = gb(gp.group, gp.active[i]);
    }
    if (gm.size() > 0) {
      flat.tail(gm.size()) = (gm.array() * s.omega_log.array().exp()).matrix();
    }
    return flat;
  };

  FitResult result;
  result.converged = true;

  for (Eigen::Index g = 0; g < static_cast<Eigen::Index>(state.groups.size()); ++g) {
    GroupParams gp;
    gp.group = g;
    gp.with_metric = state.learn_metric;
    for (Eigen::Index r = 0; r < state.mask.cols(); ++r) {
      if (state.mask(g, r) != 0.0) gp.active.push_back(r);
    }

    std::vector<double> trace;
    double current_ll = group_ll(state, g);
    trace.push_back(current_ll);

    double step = opts.init_step;
    bool group_converged = opts.max_iters == 0;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      const Vector grad = group_grad(state, gp);
      if (grad.size() == 0 || grad.lpNorm<Eigen::Infinity>() < 1e-12) {
        group_converged = true;
        break;
      }
      const Vector x = pack(state, gp);
      bool accepted = false;
      double trial = step;
      for (int halving = 0; halving <= 20; ++halving) {
        LearnState candidate = state;
        unpack(x + trial * grad, gp, candidate);
        const double cand_ll = group_ll(candidate, g);
        if (cand_ll > current_ll) {
          state = std::move(candidate);
          const double gain = cand_ll - current_ll;
          current_ll = cand_ll;
          trace.push_back(current_ll);
          step = trial * 2.0;
          accepted = true;
          if (gain < opts.rel_tol * (1.0 + std::abs(current_ll))) {
            group_converged = true;
          }
          break;
        }
        trial *= 0.5;
      }
      if (!accepted || group_converged) {
        // A failed line search means no ascent direction at working precision.
        group_converged = true;
        break;
      }
    }
    if (!group_converged) result.converged = false;
    result.objective_trace[state.groups[g]] = std::move(trace);
  }

  TransferModel model;
  model.exemplars = corpus;
  model.sim = state.sim_with_metric();
  model.category_mode = opts.category_mode;
  model.granularity = granularity;
  model.fit_converged = result.converged;
  if (opts.category_mode == CategoryMode::none) {
    model.alphas = state.alpha_row(0);
  } else {
    for (std::size_t g = 0; g < state.groups.size(); ++g) {
      model.category_alphas[state.groups[g]] =
          state.alpha_row(static_cast<Eigen::Index>(g));
    }
  }
  result.model = std::move(model);
  return result;
}

}  // namespace dppsum
