#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dppsum/evaluation.hpp"
#include "dppsum/rng.hpp"
#include "oracles.hpp"

using namespace dppsum;

namespace {

// One feature per integer "slot", spaced far apart so only identical slots
// match under small thresholds.
Matrix slot_features(int n, double spacing = 10.0) {
  Matrix f = Matrix::Zero(n, 1);
  for (int i = 0; i < n; ++i) f(i, 0) = spacing * i;
  return f;
}

std::vector<std::vector<int>> adjacency(const Selection& a, const Selection& b,
                                        const Matrix& fa, const Matrix& fb,
                                        double threshold) {
  std::vector<std::vector<int>> adj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if ((fa.row(a[i]) - fb.row(b[j])).norm() <= threshold) {
        adj[i].push_back(static_cast<int>(j));
      }
    }
  }
  return adj;
}

}  // namespace

TEST_CASE("score arithmetic: 4 predicted, 5 truth, 3 matches") {
  Matrix fa(4, 1), fb(5, 1);
  fa << 0.0, 10.0, 20.0, 30.0;
  fb << 0.1, 10.1, 20.1, 100.0, 200.0;
  MatchConfig cfg;
  cfg.threshold = 0.5;
  const Selection a = {0, 1, 2, 3};
  const Selection b = {0, 1, 2, 3, 4};
  CHECK(match_pairs(a, b, fa, fb, cfg) == 3);
  const ScoreTriple s = score(a, b, fa, fb, cfg);
  CHECK(s.precision == doctest::Approx(75.0).epsilon(1e-12));
  CHECK(s.recall == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(s.f_score == doctest::Approx(200.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("identical and disjoint summaries") {
  const Matrix f = slot_features(6);
  MatchConfig cfg;
  cfg.threshold = 0.5;
  const Selection a = {1, 3, 4};
  const ScoreTriple same = score(a, a, f, f, cfg);
  CHECK(same.precision == 100.0);
  CHECK(same.recall == 100.0);
  CHECK(same.f_score == 100.0);

  const ScoreTriple none = score({0, 2}, {1, 5}, f, f, cfg);
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f_score == 0.0);

  const ScoreTriple empty = score({}, a, f, f, cfg);
  CHECK(empty.f_score == 0.0);
}

TEST_CASE("match_pairs basics") {
  const Matrix f = slot_features(5);
  MatchConfig cfg;
  cfg.threshold = 1.0;
  const Selection a = {0, 2, 4};
  CHECK(match_pairs(a, a, f, f, cfg) == 3);

  cfg.threshold = 0.0;  // only exactly identical vectors match
  CHECK(match_pairs({0, 1}, {0, 2}, f, f, cfg) == 1);
  CHECK(match_pairs({1}, {2}, f, f, cfg) == 0);

  Matrix other(1, 2);
  CHECK_THROWS_AS(match_pairs({0}, {0}, f, other, cfg), std::invalid_argument);
  CHECK_THROWS_AS(match_pairs({9}, {0}, f, f, cfg), std::invalid_argument);
}

TEST_CASE("maximum matching beats first-free greedy on the crossing instance") {
  // a0 reaches b0 and b1, a1 reaches b1 and b2, a2 reaches b0 only: greedy in
  // natural order strands a2, the maximum matching places all three.
  Matrix fa(3, 2), fb(3, 2);
  fa << 1.0, 0.0,
        3.0, 0.0,
        0.0, 0.5;
  fb << 0.0, 0.0,
        2.0, 0.0,
        4.0, 0.0;
  MatchConfig cfg;
  cfg.threshold = 1.0;
  const Selection a = {0, 1, 2};
  const Selection b = {0, 1, 2};

  const auto adj = adjacency(a, b, fa, fb, cfg.threshold);
  REQUIRE(oracles::greedy_matching(adj, 3) == 2);
  REQUIRE(oracles::brute_force_matching(adj) == 3);
  CHECK(match_pairs(a, b, fa, fb, cfg) == 3);
}

TEST_CASE("matching equals brute force and is symmetric on random instances") {
  Rng rng(163);
  for (int trial = 0; trial < 100; ++trial) {
    const int na = 1 + rng.below(8);
    const int nb = 1 + rng.below(8);
    Matrix fa(na, 2), fb(nb, 2);
    for (int i = 0; i < na; ++i) {
      fa(i, 0) = 4.0 * rng.uniform();
      fa(i, 1) = 4.0 * rng.uniform();
    }
    for (int i = 0; i < nb; ++i) {
      fb(i, 0) = 4.0 * rng.uniform();
      fb(i, 1) = 4.0 * rng.uniform();
    }
    Selection a(na), b(nb);
    for (int i = 0; i < na; ++i) a[i] = i;
    for (int i = 0; i < nb; ++i) b[i] = i;
    MatchConfig cfg;
    cfg.threshold = rng.uniform() * 2.0;

    const int m = match_pairs(a, b, fa, fb, cfg);
    CHECK(m == oracles::brute_force_matching(adjacency(a, b, fa, fb, cfg.threshold)));
    CHECK(m == match_pairs(b, a, fb, fa, cfg));
    CHECK(m <= std::min(na, nb));

    // Raising the threshold never loses matches.
    MatchConfig wider;
    wider.threshold = cfg.threshold * 1.5 + 0.1;
    CHECK(match_pairs(a, b, fa, fb, wider) >= m);

    // F-score is symmetric, precision and recall swap.
    const ScoreTriple st = score(a, b, fa, fb, cfg);
    const ScoreTriple ts = score(b, a, fb, fa, cfg);
    CHECK(st.f_score == doctest::Approx(ts.f_score).epsilon(1e-12));
    CHECK(st.precision == doctest::Approx(ts.recall).epsilon(1e-12));
    CHECK(st.recall == doctest::Approx(ts.precision).epsilon(1e-12));
    for (double v : {st.precision, st.recall, st.f_score}) {
      CHECK(v >= 0.0);
      CHECK(v <= 100.0 + 1e-12);
    }
  }
}

TEST_CASE("aggregate over user summaries") {
  const Matrix f = slot_features(8);
  MatchConfig cfg;
  cfg.threshold = 0.5;
  const Selection pred = {0, 1, 2, 3};

  // Single user: aggregate equals score.
  const Selection user0 = {0, 1, 5};
  const ScoreTriple direct = score(pred, user0, f, f, cfg);
  const ScoreTriple one = aggregate(pred, {user0}, f, cfg, AggregationMode::mean);
  CHECK(one.f_score == doctest::Approx(direct.f_score));

  // Max mode picks the best user's triple.
  const Selection good = {0, 1, 2, 3};
  const ScoreTriple best = aggregate(pred, {user0, good}, f, cfg, AggregationMode::max);
  CHECK(best.f_score == doctest::Approx(100.0));
  CHECK(best.precision == doctest::Approx(100.0));

  // Mean of a perfect and a disjoint user: (50, 50, 50).
  const Selection miss = {5, 6, 7};
  Selection pred3 = {0, 1, 2};
  const ScoreTriple mean =
      aggregate(pred3, {Selection{0, 1, 2}, miss}, f, cfg, AggregationMode::mean);
  CHECK(mean.precision == doctest::Approx(50.0));
  CHECK(mean.recall == doctest::Approx(50.0));
  CHECK(mean.f_score == doctest::Approx(50.0));

  CHECK_THROWS_AS(aggregate(pred, {}, f, cfg, AggregationMode::mean),
                  std::invalid_argument);
}

TEST_CASE("budgeted_truncate") {
  const std::vector<int> bounds = {5, 10};  // two equal-length segments
  Matrix kernel = Matrix::Zero(2, 2);
  kernel(0, 0) = 3.0;
  kernel(1, 1) = 1.0;

  CHECK(budgeted_truncate({0, 1}, kernel, bounds, 1.0) == Selection{0, 1});
  CHECK(budgeted_truncate({0, 1}, kernel, bounds, 0.5) == Selection{0});

  // Higher-diagonal segment wins even when listed later.
  Matrix flipped = Matrix::Zero(2, 2);
  flipped(1, 1) = 3.0;
  flipped(0, 0) = 1.0;
  CHECK(budgeted_truncate({0, 1}, flipped, bounds, 0.5) == Selection{1});

  // Ties keep the earlier segment.
  Matrix tied = Matrix::Identity(2, 2);
  CHECK(budgeted_truncate({0, 1}, tied, bounds, 0.5) == Selection{0});

  CHECK_THROWS_AS(budgeted_truncate({0}, kernel, bounds, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(budgeted_truncate({0}, kernel, bounds, 1.5), std::invalid_argument);
}

TEST_CASE("oracle_subshot_summary") {
  // Single user whose summary occupies exactly two of four segments.
  const std::vector<int> bounds = {2, 4, 6, 8};
  const Selection user = {0, 1, 4, 5};
  CHECK(oracle_subshot_summary({user}, bounds, 0.5) == Selection{0, 2});

  // All-zero votes: earlier segments win ties until the budget is reached.
  const Selection empty_user = {};
  CHECK(oracle_subshot_summary({empty_user}, bounds, 0.5) == Selection{0, 1});

  // Votes (2, 0, 1) over equal segments, budget 2/3: segments 0 and 2.
  const std::vector<int> three = {2, 4, 6};
  const Selection u1 = {0, 1, 4};
  const Selection u2 = {0, 1, 5};
  CHECK(oracle_subshot_summary({u1, u2}, three, 2.0 / 3.0) == Selection{0, 2});

  CHECK_THROWS_AS(oracle_subshot_summary({}, bounds, 0.5), std::invalid_argument);
}
