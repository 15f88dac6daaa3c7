#include "squadmds/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "squadmds/linalg.hpp"
#include "squadmds/parallel.hpp"
#include "squadmds/quality.hpp"

namespace squadmds {

namespace {

constexpr std::size_t kDenseSimilarityMaxN = 10000;

// Entropy of p(beta) over shifted squared distances s_j = d_j^2 - min d^2,
// via H = beta * E[s] + ln(sum exp(-beta s)). Returns exp(H), the
// perplexity in the 2^H-with-bits convention.
double perplexity_at(const std::vector<double>& ssq, double beta,
                     std::vector<double>& expbuf) {
  double sum = 0.0, moment = 0.0;
  for (std::size_t j = 0; j < ssq.size(); ++j) {
    double e = std::exp(-beta * ssq[j]);
    expbuf[j] = e;
    sum += e;
    moment += e * ssq[j];
  }
  double h = beta * moment / sum + std::log(sum);
  return std::exp(h);
}

}  // namespace

CalibratedRow calibrate_row(const std::vector<double>& distances, double perplexity) {
  const std::size_t len = distances.size();
  CalibratedRow out;
  out.p.assign(len, 0.0);
  if (!(perplexity >= 1.0) || !(perplexity < static_cast<double>(len)))
    throw Error(ErrorKind::perplexity_bound,
                "perplexity " + std::to_string(perplexity) +
                    " outside [1, " + std::to_string(len) + ")");

  double dmin = distances[0], dmax = distances[0];
  for (double d : distances) {
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  if (dmax - dmin <= 1e-12 * std::max(1.0, dmax)) {
    // All-equal distances: entropy is flat in beta, every bandwidth gives
    // the uniform row.
    std::fill(out.p.begin(), out.p.end(), 1.0 / static_cast<double>(len));
    out.degenerate = true;
    return out;
  }

  std::vector<double> ssq(len), expbuf(len);
  for (std::size_t j = 0; j < len; ++j)
    ssq[j] = distances[j] * distances[j] - dmin * dmin;

  double lo = 0.0, hi = -1.0;  // hi < 0 means unbounded above
  double beta = 1.0;
  bool converged = false;
  for (int it = 0; it < kBisectionMaxIters; ++it) {
    double perp = perplexity_at(ssq, beta, expbuf);
    out.iterations = it + 1;
    if (std::abs(perp - perplexity) <= kPerplexityRelTol * perplexity) {
      converged = true;
      break;
    }
    if (perp > perplexity) {
      lo = beta;
      beta = hi < 0.0 ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (lo + beta);
    }
  }
  if (!converged) {
    std::fill(out.p.begin(), out.p.end(), 1.0 / static_cast<double>(len));
    out.degenerate = true;
    return out;
  }

  double sum = 0.0;
  for (double e : expbuf) sum += e;
  for (std::size_t j = 0; j < len; ++j) out.p[j] = expbuf[j] / sum;
  out.beta = beta;
  return out;
}

double SimilarityMatrix::at(std::size_t i, std::size_t j) const {
  if (!sparse()) return dense[i * n + j];
  auto lo = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  auto hi = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  auto it = std::lower_bound(lo, hi, static_cast<std::uint32_t>(j));
  if (it == hi || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

namespace {

// Dense path: calibrate all rows for one perplexity into k (n*n, diagonal
// zero), rows in parallel.
std::size_t fill_conditional_dense(const Dataset& data, double perplexity,
                                   std::vector<double>& k, int workers) {
  const std::size_t n = data.n;
  std::atomic<std::size_t> degenerate{0};
  parallel_for_blocks(workers, kReductionBlocks, [&](std::size_t b) {
    std::size_t i0, i1;
    block_range(n, b, i0, i1);
    std::vector<double> dist(n - 1);
    for (std::size_t i = i0; i < i1; ++i) {
      std::size_t w = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        dist[w++] = euclidean_distance(data.row(i), data.row(j));
      }
      CalibratedRow row = calibrate_row(dist, perplexity);
      if (row.degenerate) degenerate.fetch_add(1);
      w = 0;
      double* out = k.data() + i * n;
      for (std::size_t j = 0; j < n; ++j)
        out[j] = (j == i) ? 0.0 : row.p[w++];
    }
  });
  return degenerate.load();
}

}  // namespace

SimilarityMatrix multiscale_similarities(const Dataset& data,
                                         const std::vector<double>& perplexities,
                                         std::size_t knn_sparsity, int workers) {
  const std::size_t n = data.n;
  SimilarityMatrix out;
  out.n = n;
  out.perplexities = perplexities;
  if (perplexities.empty())
    throw Error(ErrorKind::bad_config, "at least one perplexity is required");
  const std::size_t nscales = perplexities.size();

  if (knn_sparsity == 0) {
    if (n > kDenseSimilarityMaxN)
      throw Error(ErrorKind::too_large,
                  "dense similarities are capped at " +
                      std::to_string(kDenseSimilarityMaxN) +
                      " points; use the kNN-sparse mode");
    for (double p : perplexities)
      if (!(p >= 1.0) || !(p < static_cast<double>(n) - 1.0))
        throw Error(ErrorKind::perplexity_bound,
                    "perplexity " + std::to_string(p) + " outside [1, n-1)");

    out.dense.assign(n * n, 0.0);
    std::vector<double> k(n * n);
    for (std::size_t s = 0; s < nscales; ++s) {
      out.degenerate_rows +=
          fill_conditional_dense(data, perplexities[s], k, workers);
      // Symmetrize, then fold into the running mean scaled to unit total.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          double avg = 0.5 * (k[i * n + j] + k[j * n + i]);
          k[i * n + j] = avg;
          k[j * n + i] = avg;
        }
      double total = 0.0;
      for (double v : k) total += v;
      const double scale = 1.0 / (total * static_cast<double>(nscales));
      for (std::size_t e = 0; e < n * n; ++e) out.dense[e] += k[e] * scale;
    }
    return out;
  }

  // Sparse path: per-row calibration restricted to the k nearest
  // neighbors, stored CSR on the symmetrized pattern (same for every
  // scale, since the pattern only depends on the kNN graph).
  const std::size_t k = std::min(knn_sparsity, n - 1);
  for (double p : perplexities)
    if (!(p >= 1.0) || !(p < static_cast<double>(k)))
      throw Error(ErrorKind::perplexity_bound,
                  "perplexity " + std::to_string(p) +
                      " needs more neighbors than knn sparsity " +
                      std::to_string(k));

  NeighborTable knn = knn_sets(data.points.data(), n, data.m, k, workers);

  // Symmetrized pattern: each undirected edge appears in both rows.
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t* row = knn.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      adj[i].push_back(row[j]);
      adj[row[j]].push_back(static_cast<std::uint32_t>(i));
    }
  }
  out.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
    out.row_ptr[i + 1] = out.row_ptr[i] + adj[i].size();
  }
  out.col.reserve(out.row_ptr[n]);
  for (std::size_t i = 0; i < n; ++i)
    out.col.insert(out.col.end(), adj[i].begin(), adj[i].end());
  out.val.assign(out.row_ptr[n], 0.0);

  // Directed conditional rows live on the kNN lists; kcond[i] aligns with
  // knn.row(i).
  std::vector<double> kcond(n * k);
  std::vector<double> scratch(out.row_ptr[n]);
  for (std::size_t s = 0; s < nscales; ++s) {
    std::atomic<std::size_t> degenerate{0};
    parallel_for_blocks(workers, kReductionBlocks, [&](std::size_t b) {
      std::size_t i0, i1;
      block_range(n, b, i0, i1);
      std::vector<double> dist(k);
      for (std::size_t i = i0; i < i1; ++i) {
        const std::uint32_t* row = knn.row(i);
        for (std::size_t j = 0; j < k; ++j)
          dist[j] = euclidean_distance(data.row(i), data.row(row[j]));
        CalibratedRow cal = calibrate_row(dist, perplexities[s]);
        if (cal.degenerate) degenerate.fetch_add(1);
        std::copy(cal.p.begin(), cal.p.end(), kcond.begin() + i * k);
      }
    });
    out.degenerate_rows += degenerate.load();

    // Scatter (K + K^T)/2 onto the pattern, then rescale to unit total.
    std::fill(scratch.begin(), scratch.end(), 0.0);
    auto entry_index = [&](std::size_t i, std::uint32_t j) {
      auto lo = out.col.begin() + static_cast<std::ptrdiff_t>(out.row_ptr[i]);
      auto hi = out.col.begin() + static_cast<std::ptrdiff_t>(out.row_ptr[i + 1]);
      return static_cast<std::size_t>(std::lower_bound(lo, hi, j) - out.col.begin());
    };
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t* row = knn.row(i);
      for (std::size_t j = 0; j < k; ++j) {
        const double half = 0.5 * kcond[i * k + j];
        scratch[entry_index(i, row[j])] += half;
        scratch[entry_index(row[j], static_cast<std::uint32_t>(i))] += half;
      }
    }
    double total = 0.0;
    for (double v : scratch) total += v;
    const double scale = 1.0 / (total * static_cast<double>(nscales));
    for (std::size_t e = 0; e < scratch.size(); ++e) out.val[e] += scratch[e] * scale;
  }
  return out;
}

namespace {

// Row boundaries for the mirrored pair loop, chosen so each block holds a
// near-equal share of the i<j pairs rather than of the rows.
std::size_t pair_block_boundary(std::size_t n, std::size_t b) {
  if (b >= kReductionBlocks) return n;
  double frac = static_cast<double>(b) / static_cast<double>(kReductionBlocks);
  double r = (1.0 - std::sqrt(1.0 - frac)) * static_cast<double>(n);
  std::size_t row = static_cast<std::size_t>(r);
  return std::min(row, n);
}

struct TsneScratch {
  std::vector<double> ax, ay, rx, ry;  // kReductionBlocks * n each
  std::vector<double> z;               // kReductionBlocks
  std::vector<double> xs, ys;          // n

  void reset(std::size_t n) {
    ax.assign(kReductionBlocks * n, 0.0);
    ay.assign(kReductionBlocks * n, 0.0);
    rx.assign(kReductionBlocks * n, 0.0);
    ry.assign(kReductionBlocks * n, 0.0);
    z.assign(kReductionBlocks, 0.0);
    xs.resize(n);
    ys.resize(n);
  }
};

TsneScratch& tsne_scratch() {
  static thread_local TsneScratch s;
  return s;
}

}  // namespace

void tsne_gradient(const SimilarityMatrix& p, const Embedding& emb,
                   std::vector<double>& grad, double attract, int workers) {
  const std::size_t n = p.n;
  TsneScratch& ws = tsne_scratch();
  ws.reset(n);
  for (std::size_t i = 0; i < n; ++i) {
    ws.xs[i] = emb.coords[i * 2];
    ws.ys[i] = emb.coords[i * 2 + 1];
  }
  const double* xs = ws.xs.data();
  const double* ys = ws.ys.data();
  const bool sparse = p.sparse();

  parallel_for_blocks(workers, kReductionBlocks, [&](std::size_t b) {
    const std::size_t i0 = pair_block_boundary(n, b);
    const std::size_t i1 = pair_block_boundary(n, b + 1);
    double* ax = ws.ax.data() + b * n;
    double* ay = ws.ay.data() + b * n;
    double* rx = ws.rx.data() + b * n;
    double* ry = ws.ry.data() + b * n;
    double zsum = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
      const double xi = xs[i], yi = ys[i];
      double axi = 0.0, ayi = 0.0, rxi = 0.0, ryi = 0.0;
      if (!sparse) {
        const double* prow = p.dense.data() + i * n;
        for (std::size_t j = i + 1; j < n; ++j) {
          const double dx = xi - xs[j];
          const double dy = yi - ys[j];
          const double w = 1.0 / (1.0 + dx * dx + dy * dy);
          const double pa = attract * prow[j] * w;
          const double ww = w * w;
          axi += pa * dx;
          ayi += pa * dy;
          ax[j] -= pa * dx;
          ay[j] -= pa * dy;
          rxi += ww * dx;
          ryi += ww * dy;
          rx[j] -= ww * dx;
          ry[j] -= ww * dy;
          zsum += w;
        }
      } else {
        // Sparse attraction: only this row's stored entries, mirrored on
        // j > i so each undirected pair is handled once. Repulsion stays
        // dense below.
        const std::size_t e0 = p.row_ptr[i], e1 = p.row_ptr[i + 1];
        for (std::size_t e = e0; e < e1; ++e) {
          const std::size_t j = p.col[e];
          if (j <= i) continue;
          const double dx = xi - xs[j];
          const double dy = yi - ys[j];
          const double w = 1.0 / (1.0 + dx * dx + dy * dy);
          const double pa = attract * p.val[e] * w;
          axi += pa * dx;
          ayi += pa * dy;
          ax[j] -= pa * dx;
          ay[j] -= pa * dy;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
          const double dx = xi - xs[j];
          const double dy = yi - ys[j];
          const double w = 1.0 / (1.0 + dx * dx + dy * dy);
          const double ww = w * w;
          rxi += ww * dx;
          ryi += ww * dy;
          rx[j] -= ww * dx;
          ry[j] -= ww * dy;
          zsum += w;
        }
      }
      ax[i] += axi;
      ay[i] += ayi;
      rx[i] += rxi;
      ry[i] += ryi;
    }
    ws.z[b] += zsum;
  });

  double z = 0.0;
  for (std::size_t b = 0; b < kReductionBlocks; ++b) z += ws.z[b];
  z *= 2.0;
  // Z is a sum of n*(n-1) positive kernel values, each at most 1 and
  // exactly 1 only for coincident points; it cannot be zero for n >= 2.
  const double inv_z = 1.0 / z;

  grad.assign(n * 2, 0.0);
  for (std::size_t b = 0; b < kReductionBlocks; ++b) {
    const double* ax = ws.ax.data() + b * n;
    const double* ay = ws.ay.data() + b * n;
    const double* rx = ws.rx.data() + b * n;
    const double* ry = ws.ry.data() + b * n;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i * 2] += ax[i] - rx[i] * inv_z;
      grad[i * 2 + 1] += ay[i] - ry[i] * inv_z;
    }
  }
  for (double& g : grad) g *= 4.0;
}

double kl_divergence(const SimilarityMatrix& p, const Embedding& emb) {
  const std::size_t n = p.n;
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = emb.coords[i * 2] - emb.coords[j * 2];
      double dy = emb.coords[i * 2 + 1] - emb.coords[j * 2 + 1];
      z += 1.0 / (1.0 + dx * dx + dy * dy);
    }
  z *= 2.0;

  double kl = 0.0;
  if (!p.sparse()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double pij = p.dense[i * n + j];
        if (pij <= 0.0) continue;
        double dx = emb.coords[i * 2] - emb.coords[j * 2];
        double dy = emb.coords[i * 2 + 1] - emb.coords[j * 2 + 1];
        double q = 1.0 / ((1.0 + dx * dx + dy * dy) * z);
        kl += 2.0 * pij * std::log(pij / q);
      }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t e = p.row_ptr[i]; e < p.row_ptr[i + 1]; ++e) {
        std::size_t j = p.col[e];
        double pij = p.val[e];
        if (pij <= 0.0) continue;
        double dx = emb.coords[i * 2] - emb.coords[j * 2];
        double dy = emb.coords[i * 2 + 1] - emb.coords[j * 2 + 1];
        double q = 1.0 / ((1.0 + dx * dx + dy * dy) * z);
        kl += pij * std::log(pij / q);
      }
  }
  return kl;
}

}  // namespace squadmds
