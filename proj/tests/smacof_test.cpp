#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "squadmds/engine.hpp"
#include "squadmds/linalg.hpp"
#include "squadmds/smacof.hpp"
#include "squadmds/synthetic.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace squadmds;

TEST_CASE("pairwise stress is the mean squared distance residual") {
  // Two points at HD distance 1 embedded at distance 3: (1-3)^2 = 4.
  Dataset d;
  d.n = 2;
  d.m = 1;
  d.points = {0.0, 1.0};
  Embedding e = Embedding::zeros(2);
  e.coords = {0.0, 0.0, 3.0, 0.0};
  CHECK(pairwise_stress(d, e) == 4.0);
}

TEST_CASE("pairwise stress matches the oracle sum over pairs") {
  Dataset d = testutil::random_dataset(40, 6, 401);
  Embedding e = testutil::random_embedding(40, 402, 2.0);
  const double pairs = 0.5 * 40.0 * 39.0;
  const double want = oracle::pairwise_stress(d, e) / pairs;
  CHECK(pairwise_stress(d, e) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("pairwise stress refuses oversized inputs") {
  Dataset d;
  d.n = kPairwiseStressMaxN + 1;
  d.m = 1;
  d.points.assign(d.n, 0.0);
  Embedding e = Embedding::zeros(d.n);
  CHECK_THROWS_AS(pairwise_stress(d, e), Error);
}

TEST_CASE("a two-point guttman step lands on the exact solution") {
  // delta = 1, embedded at distance 0.5: the transform pulls the pair to
  // distance exactly 1 in one step, all values dyadic.
  Dataset d;
  d.n = 2;
  d.m = 1;
  d.points = {0.0, 1.0};
  Embedding e = Embedding::zeros(2);
  e.coords = {-0.25, 0.0, 0.25, 0.0};

  smacof_step(d, e);
  CHECK(e.coords == std::vector<double>{-0.5, 0.0, 0.5, 0.0});
  CHECK(pairwise_stress(d, e) == 0.0);
}

TEST_CASE("stress never increases along the trace") {
  Dataset d = testutil::two_blobs(80, 4, 5.0, 403);
  RunConfig cfg;
  cfg.method = Method::smacof;
  cfg.seed = 1;
  cfg.smacof_max_iters = 60;
  cfg.smacof_rel_threshold = 0.0;

  SmacofResult r = run_smacof(d, cfg);
  REQUIRE(r.stress_trace.size() == 61);
  CHECK(r.iterations == 60);
  CHECK(!r.converged);
  for (std::size_t k = 1; k < r.stress_trace.size(); ++k)
    CHECK(r.stress_trace[k] <= r.stress_trace[k - 1] * (1.0 + 1e-9));
  CHECK(r.stress_trace.back() < r.stress_trace.front());
}

TEST_CASE("the relative-decrease cut fires on easy data") {
  Dataset d = testutil::two_blobs(60, 3, 8.0, 404);
  RunConfig cfg;
  cfg.method = Method::smacof;
  cfg.seed = 1;

  SmacofResult r = run_smacof(d, cfg);
  CHECK(r.converged);
  CHECK(r.iterations < kDefaultSmacofMaxIters);
  CHECK(r.stress_trace.size() == r.iterations + 1);
}

TEST_CASE("guttman steps keep the layout centered") {
  Dataset d = testutil::random_dataset(50, 5, 405);
  RunConfig cfg;
  cfg.method = Method::smacof;
  cfg.seed = 2;
  cfg.smacof_max_iters = 40;
  cfg.smacof_rel_threshold = 0.0;

  SmacofResult r = run_smacof(d, cfg);
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    sx += r.embedding.coords[i * 2];
    sy += r.embedding.coords[i * 2 + 1];
  }
  const double span = embedding_span(r.embedding);
  CHECK(std::abs(sx) / d.n < 1e-10 * span);
  CHECK(std::abs(sy) / d.n < 1e-10 * span);
}

TEST_CASE("optimal scale has a closed form and minimizes stress") {
  Dataset d;
  d.n = 2;
  d.m = 1;
  d.points = {0.0, 2.0};
  Embedding e = Embedding::zeros(2);
  e.coords = {0.0, 0.0, 4.0, 0.0};
  CHECK(optimal_stress_scale(d, e) == 0.5);

  Dataset big = testutil::random_dataset(60, 5, 406);
  Embedding emb = testutil::random_embedding(60, 407, 3.0);
  const double alpha = optimal_stress_scale(big, emb);
  CHECK(alpha > 0.0);
  auto scaled_stress = [&](double s) {
    Embedding t = emb;
    for (double& c : t.coords) c *= s;
    return pairwise_stress(big, t);
  };
  const double at_alpha = scaled_stress(alpha);
  CHECK(at_alpha <= scaled_stress(alpha * 1.01));
  CHECK(at_alpha <= scaled_stress(alpha * 0.99));
  CHECK(at_alpha <= scaled_stress(1.0));
}

TEST_CASE("smacof improves on its pca starting point") {
  Dataset d = swiss_roll(300, 408);
  RngStream rng(3);
  Embedding pca = initial_embedding(d, rng);
  const double before = pairwise_stress(d, pca);

  RunConfig cfg;
  cfg.method = Method::smacof;
  cfg.seed = 3;
  cfg.smacof_max_iters = 100;
  cfg.smacof_rel_threshold = 0.0;
  SmacofResult r = run_smacof(d, cfg);
  CHECK(r.stress_trace.front() == doctest::Approx(before).epsilon(1e-12));
  CHECK(r.stress_trace.back() < 0.8 * before);
}

TEST_CASE("duplicate points stay finite through the jitter floor") {
  // Rows 0 and 1 are identical, so their PCA projections coincide and the
  // embedded distance starts at zero.
  Dataset d = testutil::random_dataset(12, 4, 409);
  for (std::size_t j = 0; j < d.m; ++j) d.points[1 * d.m + j] = d.points[j];

  RunConfig cfg;
  cfg.method = Method::smacof;
  cfg.seed = 4;
  cfg.smacof_max_iters = 20;
  cfg.smacof_rel_threshold = 0.0;
  SmacofResult r = run_smacof(d, cfg);
  for (double v : r.embedding.coords) CHECK(std::isfinite(v));
  for (double s : r.stress_trace) CHECK(std::isfinite(s));
}

TEST_CASE("smacof is invariant to the worker count") {
  Dataset d = testutil::two_blobs(90, 4, 5.0, 410);
  Embedding e = testutil::random_embedding(90, 411, 2.0);
  CHECK(pairwise_stress(d, e, 1) == pairwise_stress(d, e, 4));

  RunConfig cfg;
  cfg.method = Method::smacof;
  cfg.seed = 5;
  cfg.smacof_max_iters = 30;
  cfg.smacof_rel_threshold = 0.0;
  cfg.workers = 1;
  SmacofResult a = run_smacof(d, cfg);
  cfg.workers = 4;
  SmacofResult b = run_smacof(d, cfg);
  CHECK(a.embedding.coords == b.embedding.coords);
  CHECK(a.stress_trace == b.stress_trace);
}
