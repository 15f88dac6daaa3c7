#include "squadmds/quality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "squadmds/linalg.hpp"
#include "squadmds/parallel.hpp"

namespace squadmds {

namespace {

// Neighbor ordering everywhere in this module: ascending squared distance,
// ties toward the lower index. Squared distances order identically to
// distances and skip the sqrt.
struct DistIdx {
  double d;
  std::uint32_t i;
  bool operator<(const DistIdx& o) const {
    return d < o.d || (d == o.d && i < o.i);
  }
};

}  // namespace

NeighborTable knn_sets(const double* points, std::size_t n, std::size_t dim,
                       std::size_t k, int workers) {
  if (n < 2 || k < 1 || k > n - 1)
    throw Error(ErrorKind::bad_config,
                "knn_sets needs 1 <= k <= n-1, got k = " + std::to_string(k) +
                    ", n = " + std::to_string(n));
  NeighborTable t;
  t.n = n;
  t.k = k;
  t.ids.assign(n * k, 0);

  parallel_for_blocks(workers, kReductionBlocks, [&](std::size_t b) {
    std::size_t i0, i1;
    block_range(n, b, i0, i1);
    std::vector<DistIdx> cand(n - 1);
    for (std::size_t i = i0; i < i1; ++i) {
      const double* pi = points + i * dim;
      std::size_t w = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double* pj = points + j * dim;
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          double diff = pi[d] - pj[d];
          s += diff * diff;
        }
        cand[w++] = {s, static_cast<std::uint32_t>(j)};
      }
      if (k < cand.size()) {
        std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         cand.end());
        std::sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        std::sort(cand.begin(), cand.end());
      }
      for (std::size_t j = 0; j < k; ++j) t.ids[i * k + j] = cand[j].i;
    }
  });
  return t;
}

QualityCurve quality_curves(const Dataset& data, const Embedding& emb, int workers) {
  const std::size_t n = data.n;
  if (emb.n != n)
    throw Error(ErrorKind::row_count_mismatch,
                "embedding has " + std::to_string(emb.n) + " rows, dataset has " +
                    std::to_string(n));
  if (n < 3)
    throw Error(ErrorKind::too_few_points,
                "quality curves need at least 3 points");
  const std::size_t kmax = n - 2;

  // Per-point overlap counts accumulate into fixed-shape block partials so
  // any worker count sums them in the same order.
  std::vector<double> partial(kReductionBlocks * kmax, 0.0);

  parallel_for_blocks(workers, kReductionBlocks, [&](std::size_t b) {
    std::size_t i0, i1;
    block_range(n, b, i0, i1);
    double* acc = partial.data() + b * kmax;
    std::vector<DistIdx> hd(n - 1), ld(n - 1);
    std::vector<std::uint32_t> rank_hd(n), rank_ld(n);
    for (std::size_t i = i0; i < i1; ++i) {
      std::size_t w = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double hs = squared_distance(data.row(i), data.row(j));
        double dx = emb.coords[i * 2] - emb.coords[j * 2];
        double dy = emb.coords[i * 2 + 1] - emb.coords[j * 2 + 1];
        hd[w] = {hs, static_cast<std::uint32_t>(j)};
        ld[w] = {dx * dx + dy * dy, static_cast<std::uint32_t>(j)};
        ++w;
      }
      std::sort(hd.begin(), hd.end());
      std::sort(ld.begin(), ld.end());
      for (std::size_t r = 0; r + 1 < n; ++r) {
        rank_hd[hd[r].i] = static_cast<std::uint32_t>(r);
        rank_ld[ld[r].i] = static_cast<std::uint32_t>(r);
      }
      // Sweep K upward; at each step the K-th HD and LD neighbors are the
      // only candidates that can newly enter the intersection.
      std::size_t overlap = 0;
      for (std::size_t kk = 1; kk <= kmax; ++kk) {
        const std::uint32_t a = hd[kk - 1].i;
        const std::uint32_t c = ld[kk - 1].i;
        if (a == c) {
          overlap += 1;
        } else {
          if (rank_ld[a] < kk) overlap += 1;
          if (rank_hd[c] < kk) overlap += 1;
        }
        acc[kk - 1] += static_cast<double>(overlap);
      }
    }
  });

  QualityCurve out;
  out.n = n;
  out.k_values.resize(kmax);
  std::iota(out.k_values.begin(), out.k_values.end(), std::size_t{1});
  out.q_nx.assign(kmax, 0.0);
  for (std::size_t b = 0; b < kReductionBlocks; ++b) {
    const double* acc = partial.data() + b * kmax;
    for (std::size_t kk = 0; kk < kmax; ++kk) out.q_nx[kk] += acc[kk];
  }
  for (std::size_t kk = 0; kk < kmax; ++kk)
    out.q_nx[kk] /= static_cast<double>(n) * static_cast<double>(kk + 1);
  out.r_nx = rnx_from_qnx(out.q_nx, n);
  out.auc = auc_log_k(out.r_nx);
  return out;
}

std::vector<double> rnx_from_qnx(const std::vector<double>& q_nx, std::size_t n) {
  std::vector<double> r(q_nx.size());
  const double nm1 = static_cast<double>(n - 1);
  for (std::size_t kk = 0; kk < q_nx.size(); ++kk) {
    const double k = static_cast<double>(kk + 1);
    r[kk] = (nm1 * q_nx[kk] - k) / (nm1 - k);
  }
  return r;
}

double auc_log_k(const std::vector<double>& r_nx) {
  double num = 0.0, den = 0.0;
  for (std::size_t kk = 0; kk < r_nx.size(); ++kk) {
    const double inv_k = 1.0 / static_cast<double>(kk + 1);
    num += r_nx[kk] * inv_k;
    den += inv_k;
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace squadmds
