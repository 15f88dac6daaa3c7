#include "squadmds/smacof.hpp"

#include <algorithm>
#include <cmath>

#include "squadmds/engine.hpp"
#include "squadmds/linalg.hpp"
#include "squadmds/parallel.hpp"

namespace squadmds {

double pairwise_stress(const Dataset& data, const Embedding& emb, int workers) {
  const std::size_t n = data.n;
  if (n > kPairwiseStressMaxN)
    throw Error(ErrorKind::too_large,
                "pairwise stress is quadratic and capped at " +
                    std::to_string(kPairwiseStressMaxN) + " points");
  if (emb.n != n)
    throw Error(ErrorKind::row_count_mismatch, "embedding row count mismatch");

  std::vector<double> partial(kReductionBlocks, 0.0);
  parallel_for_blocks(workers, kReductionBlocks, [&](std::size_t b) {
    std::size_t i0, i1;
    block_range(n, b, i0, i1);
    double s = 0.0;
    for (std::size_t i = i0; i < i1; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double delta = euclidean_distance(data.row(i), data.row(j));
        double dx = emb.coords[i * 2] - emb.coords[j * 2];
        double dy = emb.coords[i * 2 + 1] - emb.coords[j * 2 + 1];
        double diff = delta - std::sqrt(dx * dx + dy * dy);
        s += diff * diff;
      }
    partial[b] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return total / pairs;
}

double optimal_stress_scale(const Dataset& data, const Embedding& emb) {
  const std::size_t n = data.n;
  double cross = 0.0, selfsq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double delta = euclidean_distance(data.row(i), data.row(j));
      double dx = emb.coords[i * 2] - emb.coords[j * 2];
      double dy = emb.coords[i * 2 + 1] - emb.coords[j * 2 + 1];
      double d = std::sqrt(dx * dx + dy * dy);
      cross += delta * d;
      selfsq += d * d;
    }
  return selfsq > 0.0 ? cross / selfsq : 1.0;
}

void smacof_step(const Dataset& data, Embedding& emb, int workers) {
  const std::size_t n = data.n;
  Embedding next = Embedding::zeros(n);
  // Row i of B(X) X only needs row i of B, so the update is row-parallel:
  // (BX)_i = b_ii x_i + sum_{j != i} b_ij x_j with b_ij = -delta_ij/d_ij.
  parallel_for_blocks(workers, kReductionBlocks, [&](std::size_t b) {
    std::size_t i0, i1;
    block_range(n, b, i0, i1);
    for (std::size_t i = i0; i < i1; ++i) {
      const double xi = emb.coords[i * 2], yi = emb.coords[i * 2 + 1];
      double accx = 0.0, accy = 0.0, diag = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double delta = euclidean_distance(data.row(i), data.row(j));
        double dx = xi - emb.coords[j * 2];
        double dy = yi - emb.coords[j * 2 + 1];
        double d = std::max(std::sqrt(dx * dx + dy * dy), kSmacofJitter);
        double w = delta / d;  // -b_ij
        diag += w;
        accx += w * emb.coords[j * 2];
        accy += w * emb.coords[j * 2 + 1];
      }
      next.coords[i * 2] = (diag * xi - accx) / static_cast<double>(n);
      next.coords[i * 2 + 1] = (diag * yi - accy) / static_cast<double>(n);
    }
  });
  emb = std::move(next);
}

SmacofResult run_smacof(const Dataset& data, const RunConfig& cfg) {
  RunConfig rc = resolve_run_config(cfg, data.n);
  RngStream rng(rc.seed);
  SmacofResult res;
  res.embedding = rc.init_random ? random_embedding(data.n, rng)
                                 : initial_embedding(data, rng);
  res.stress_trace.push_back(pairwise_stress(data, res.embedding, rc.workers));
  for (std::size_t it = 0; it < rc.smacof_max_iters; ++it) {
    smacof_step(data, res.embedding, rc.workers);
    double stress = pairwise_stress(data, res.embedding, rc.workers);
    double prev = res.stress_trace.back();
    res.stress_trace.push_back(stress);
    res.iterations = it + 1;
    if (rc.smacof_rel_threshold > 0.0 && prev > 0.0 &&
        (prev - stress) / prev < rc.smacof_rel_threshold) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace squadmds
