#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "squadmds/engine.hpp"
#include "squadmds/tsne.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace squadmds;

namespace {

// Entropy-based perplexity of a probability row, computed the direct way.
double achieved_perplexity(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return std::pow(2.0, h);
}

std::vector<double> distances_from(const Dataset& d, std::size_t i) {
  std::vector<double> out;
  for (std::size_t j = 0; j < d.n; ++j) {
    if (j == i) continue;
    out.push_back(oracle::dist(d.points.data() + i * d.m,
                               d.points.data() + j * d.m, d.m));
  }
  return out;
}

}  // namespace

TEST_CASE("calibrated rows hit the requested perplexity") {
  Dataset d = testutil::random_dataset(50, 6, 301);
  for (double perp : {2.0, 10.0, 30.0}) {
    CalibratedRow row = calibrate_row(distances_from(d, 0), perp);
    REQUIRE(!row.degenerate);
    double sum = 0.0;
    for (double x : row.p) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(achieved_perplexity(row.p) == doctest::Approx(perp).epsilon(1e-4));
  }
}

TEST_CASE("fitted bandwidth matches an independent sigma bisection") {
  Dataset d = testutil::random_dataset(5, 3, 302);
  std::vector<double> dist = distances_from(d, 2);
  CalibratedRow row = calibrate_row(dist, 2.0);
  double sigma = oracle::perplexity_sigma(dist, 2.0);
  double beta_ref = 1.0 / (2.0 * sigma * sigma);
  CHECK(row.beta == doctest::Approx(beta_ref).epsilon(1e-5));
}

TEST_CASE("all-equal distances fall back to the uniform row") {
  std::vector<double> dist(9, 1.5);
  CalibratedRow row = calibrate_row(dist, 4.0);
  CHECK(row.degenerate);
  for (double x : row.p) CHECK(x == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("perplexity near one concentrates on the nearest neighbor") {
  Dataset d = testutil::random_dataset(30, 4, 303);
  std::vector<double> dist = distances_from(d, 5);
  CalibratedRow row = calibrate_row(dist, 1.001);
  double top = *std::max_element(row.p.begin(), row.p.end());
  CHECK(top > 0.9);
  std::size_t argmax =
      static_cast<std::size_t>(std::max_element(row.p.begin(), row.p.end()) -
                               row.p.begin());
  std::size_t argmin_dist =
      static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) -
                               dist.begin());
  CHECK(argmax == argmin_dist);
}

TEST_CASE("calibrate_row rejects out-of-range perplexities") {
  std::vector<double> dist = {1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(calibrate_row(dist, 4.0), Error);
  CHECK_THROWS_AS(calibrate_row(dist, 0.5), Error);
}

TEST_CASE("multiscale similarities satisfy the matrix invariants") {
  Dataset d = testutil::random_dataset(200, 5, 304);
  SimilarityMatrix p = multiscale_similarities(d, {4.0, 50.0});
  REQUIRE(!p.sparse());
  CHECK(p.degenerate_rows == 0);

  double total = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    CHECK(p.at(i, i) == 0.0);
    for (std::size_t j = 0; j < d.n; ++j) {
      CHECK(p.at(i, j) >= 0.0);
      CHECK(p.at(i, j) == p.at(j, i));  // symmetrized arithmetic is exact
      total += p.at(i, j);
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two equal perplexities reduce to the single-scale matrix") {
  Dataset d = testutil::random_dataset(40, 4, 305);
  SimilarityMatrix one = multiscale_similarities(d, {6.0});
  SimilarityMatrix two = multiscale_similarities(d, {6.0, 6.0});
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t j = 0; j < d.n; ++j)
      CHECK(two.at(i, j) == doctest::Approx(one.at(i, j)).epsilon(1e-14));
}

TEST_CASE("the two-scale matrix is the mean of the single scales") {
  Dataset d = testutil::random_dataset(35, 4, 306);
  SimilarityMatrix a = multiscale_similarities(d, {3.0});
  SimilarityMatrix b = multiscale_similarities(d, {12.0});
  SimilarityMatrix ab = multiscale_similarities(d, {3.0, 12.0});
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t j = 0; j < d.n; ++j) {
      double want = 0.5 * (a.at(i, j) + b.at(i, j));
      CHECK(ab.at(i, j) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("full-pattern sparse mode agrees with the dense matrix") {
  Dataset d = testutil::random_dataset(30, 4, 307);
  SimilarityMatrix dense = multiscale_similarities(d, {5.0});
  SimilarityMatrix sparse = multiscale_similarities(d, {5.0}, 29);
  REQUIRE(sparse.sparse());
  double total = 0.0;
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t j = 0; j < d.n; ++j) {
      CHECK(sparse.at(i, j) == doctest::Approx(dense.at(i, j)).epsilon(1e-9));
      total += sparse.at(i, j);
    }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sparse mode bounds the perplexity by the neighbor count") {
  Dataset d = testutil::random_dataset(30, 4, 308);
  CHECK_THROWS_AS(multiscale_similarities(d, {10.0}, 8), Error);
  SimilarityMatrix ok = multiscale_similarities(d, {2.0}, 8);
  CHECK(ok.sparse());
}

TEST_CASE("tsne gradient matches finite differences of the divergence") {
  Dataset d = testutil::random_dataset(10, 4, 309);
  SimilarityMatrix p = multiscale_similarities(d, {3.0});
  Embedding e = testutil::random_embedding(10, 310);

  std::vector<double> g;
  tsne_gradient(p, e, g);

  auto f = [&](const Embedding& at) { return kl_divergence(p, at); };
  std::vector<double> fd = oracle::fd_gradient(f, e, 1e-6);

  double err = 0.0, norm = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    err += (g[c] - fd[c]) * (g[c] - fd[c]);
    norm += fd[c] * fd[c];
  }
  CHECK(std::sqrt(err / norm) < 1e-4);
}

TEST_CASE("tsne gradient is translation invariant and zero-sum") {
  Dataset d = testutil::random_dataset(12, 4, 311);
  SimilarityMatrix p = multiscale_similarities(d, {4.0});
  Embedding e = testutil::random_embedding(12, 312);

  std::vector<double> g;
  tsne_gradient(p, e, g);
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    sx += g[i * 2];
    sy += g[i * 2 + 1];
  }
  CHECK(std::abs(sx) < 1e-12);
  CHECK(std::abs(sy) < 1e-12);

  Embedding shifted = e;
  for (std::size_t i = 0; i < d.n; ++i) {
    shifted.coords[i * 2] += 40.0;
    shifted.coords[i * 2 + 1] -= 13.5;
  }
  std::vector<double> g2;
  tsne_gradient(p, shifted, g2);
  for (std::size_t c = 0; c < g.size(); ++c)
    CHECK(g2[c] == doctest::Approx(g[c]).epsilon(1e-9));
}

TEST_CASE("n=2 gradient vanishes because p and q are both forced to half") {
  // With two points both P and Q have a single off-diagonal value of 1/2
  // regardless of the distance, so the gradient must vanish.
  SimilarityMatrix p;
  p.n = 2;
  p.perplexities = {1.0};
  p.dense = {0.0, 0.5, 0.5, 0.0};
  Embedding e = Embedding::zeros(2);
  e.coords = {0.0, 0.0, 2.5, -1.0};
  std::vector<double> g;
  tsne_gradient(p, e, g);
  for (double x : g) CHECK(std::abs(x) < 1e-14);
  CHECK(kl_divergence(p, e) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exaggeration scales exactly the attractive term") {
  Dataset d = testutil::random_dataset(15, 4, 314);
  SimilarityMatrix p = multiscale_similarities(d, {4.0});
  Embedding e = testutil::random_embedding(15, 315);

  std::vector<double> g1, g2, g3;
  tsne_gradient(p, e, g1, 1.0);
  tsne_gradient(p, e, g2, 2.0);
  tsne_gradient(p, e, g3, 3.0);
  // Linear in the attract factor: g(3) - g(2) == g(2) - g(1).
  for (std::size_t c = 0; c < g1.size(); ++c)
    CHECK(g3[c] - g2[c] ==
          doctest::Approx(g2[c] - g1[c]).epsilon(1e-9));
}

TEST_CASE("gradient reduction is identical across worker counts") {
  Dataset d = testutil::random_dataset(100, 5, 316);
  SimilarityMatrix p = multiscale_similarities(d, {4.0, 20.0});
  Embedding e = testutil::random_embedding(100, 317);
  std::vector<double> seq, par;
  tsne_gradient(p, e, seq, 1.0, 1);
  tsne_gradient(p, e, par, 1.0, 4);
  CHECK(seq == par);

  SimilarityMatrix sp = multiscale_similarities(d, {4.0}, 12, 1);
  SimilarityMatrix sp4 = multiscale_similarities(d, {4.0}, 12, 4);
  CHECK(sp.val == sp4.val);
  std::vector<double> sseq, spar;
  tsne_gradient(sp, e, sseq, 1.0, 1);
  tsne_gradient(sp, e, spar, 1.0, 4);
  CHECK(sseq == spar);
}

TEST_CASE("kl divergence decreases over a short descent") {
  Dataset d = testutil::two_blobs(80, 4, 6.0, 318);
  SimilarityMatrix p = multiscale_similarities(d, {4.0, 10.0});

  RunConfig cfg;
  cfg.method = Method::tsne;
  cfg.seed = 7;
  cfg.iterations = 150;
  cfg.perplexities = {4.0, 10.0};

  RngStream rng(7);
  Embedding init = initial_embedding(d, rng);
  double before = kl_divergence(p, init);
  Embedding after = run_tsne(d, cfg, p);
  CHECK(kl_divergence(p, after) < before);
}

TEST_CASE("well-separated blobs come out cleanly clustered") {
  Dataset d = testutil::two_blobs(500, 5, 10.0, 319);
  RunConfig cfg;
  cfg.method = Method::tsne;
  cfg.seed = 5;
  cfg.iterations = 300;
  cfg.perplexities = {4.0, 30.0};
  Embedding e = run_tsne(d, cfg);
  CHECK(oracle::purity_two_clusters(e, d.labels) > 0.95);
}

TEST_CASE("tsne runs are deterministic") {
  Dataset d = testutil::two_blobs(60, 4, 6.0, 320);
  RunConfig cfg;
  cfg.method = Method::tsne;
  cfg.seed = 9;
  cfg.iterations = 60;
  cfg.perplexities = {4.0, 10.0};
  Embedding a = run_tsne(d, cfg);
  Embedding b = run_tsne(d, cfg);
  CHECK(a.coords == b.coords);
}

TEST_CASE("the perplexity bound surfaces through run_tsne") {
  Dataset d = testutil::random_dataset(100, 3, 321);
  RunConfig cfg;
  cfg.method = Method::tsne;
  cfg.perplexities = {99.0};
  try {
    run_tsne(d, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::perplexity_bound);
  }
}
