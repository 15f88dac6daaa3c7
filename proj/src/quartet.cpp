#include "squadmds/quartet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "squadmds/linalg.hpp"

namespace squadmds {

void partition_into_quartets(std::size_t n, RngStream& rng, QuartetPartition& out) {
  if (n < 4)
    throw Error(ErrorKind::too_few_points,
                "quartet partition needs at least 4 points, got " + std::to_string(n));
  out.perm.resize(n);
  std::iota(out.perm.begin(), out.perm.end(), 0u);
  rng.shuffle(out.perm);
  const std::size_t nq = n / 4;
  out.quartets.resize(nq);
  for (std::size_t q = 0; q < nq; ++q)
    out.quartets[q] = {out.perm[4 * q], out.perm[4 * q + 1], out.perm[4 * q + 2],
                       out.perm[4 * q + 3]};
  out.leftover.assign(out.perm.begin() + 4 * nq, out.perm.end());
}

QuartetPartition partition_into_quartets(std::size_t n, RngStream& rng) {
  QuartetPartition p;
  partition_into_quartets(n, rng, p);
  return p;
}

void quartet_distances(const Dataset& data, const Embedding& emb,
                       const std::array<std::uint32_t, 4>& idx, QuartetWorkspace& w) {
  w.idx = idx;
  w.hd_sum = 0.0;
  w.ld_sum = 0.0;
  for (int p = 0; p < 6; ++p) {
    const auto a = idx[kQuartetPairs[p][0]];
    const auto b = idx[kQuartetPairs[p][1]];
    double hd = euclidean_distance(data.row(a), data.row(b));
    const double* xa = emb.row(a);
    const double* xb = emb.row(b);
    double dx = xa[0] - xb[0];
    double dy = xa[1] - xb[1];
    double ld = std::sqrt(dx * dx + dy * dy);
    w.hd[p] = std::max(hd, kDistanceFloor);
    w.ld[p] = std::max(ld, kDistanceFloor);
    w.hd_sum += w.hd[p];
    w.ld_sum += w.ld[p];
  }
  for (int p = 0; p < 6; ++p) {
    w.hd_rel[p] = w.hd[p] / w.hd_sum;
    w.ld_rel[p] = w.ld[p] / w.ld_sum;
  }
}

double quartet_stress(const QuartetWorkspace& w) {
  double s = 0.0;
  for (int p = 0; p < 6; ++p) {
    double d = w.hd_rel[p] - w.ld_rel[p];
    s += d * d;
  }
  return s;
}

QuartetGradient quartet_gradient(const QuartetWorkspace& w, const Embedding& emb) {
  // Pair coefficients c_p = 2*(ld_rel - hd_rel)/ld_sum and their
  // rel-weighted total C; see the header for the folded form.
  double c[6];
  double cap = 0.0;
  for (int p = 0; p < 6; ++p) {
    c[p] = 2.0 * (w.ld_rel[p] - w.hd_rel[p]) / w.ld_sum;
    cap += c[p] * w.ld_rel[p];
  }
  // c indexed by the unordered pair {q, b}.
  static constexpr int pair_of[4][4] = {
      {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};

  QuartetGradient out;
  for (int q = 0; q < 4; ++q) {
    const double* xq = emb.row(w.idx[q]);
    double gx = 0.0, gy = 0.0;
    for (int b = 0; b < 4; ++b) {
      if (b == q) continue;
      const int p = pair_of[q][b];
      const double* xb = emb.row(w.idx[b]);
      const double scale = (c[p] - cap) / w.ld[p];
      gx += scale * (xq[0] - xb[0]);
      gy += scale * (xq[1] - xb[1]);
    }
    out.g[q][0] = gx;
    out.g[q][1] = gy;
  }
  return out;
}

double full_relative_stress(const Dataset& data, const Embedding& emb,
                            const std::vector<std::uint32_t>& subset, bool relative) {
  const std::size_t s = subset.size();
  if (s < 4)
    throw Error(ErrorKind::too_few_points,
                "stress diagnostic needs at least 4 points, got " + std::to_string(s));
  if (s > 64)
    throw Error(ErrorKind::too_large,
                "brute-force quartet stress is capped at 64 points, got " +
                    std::to_string(s));

  // Cache the subset's pairwise distances once; C(s,4) quartets reuse them.
  std::vector<double> hd(s * s, 0.0), ld(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) {
      double h = std::max(euclidean_distance(data.row(subset[i]), data.row(subset[j])),
                          kDistanceFloor);
      const double* xa = emb.row(subset[i]);
      const double* xb = emb.row(subset[j]);
      double dx = xa[0] - xb[0], dy = xa[1] - xb[1];
      double l = std::max(std::sqrt(dx * dx + dy * dy), kDistanceFloor);
      hd[i * s + j] = hd[j * s + i] = h;
      ld[i * s + j] = ld[j * s + i] = l;
    }

  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j)
      for (std::size_t k = j + 1; k < s; ++k)
        for (std::size_t l = k + 1; l < s; ++l) {
          const std::size_t q[4] = {i, j, k, l};
          double hsum = 0.0, lsum = 0.0;
          double hp[6], lp[6];
          for (int p = 0; p < 6; ++p) {
            const std::size_t a = q[kQuartetPairs[p][0]];
            const std::size_t b = q[kQuartetPairs[p][1]];
            hp[p] = hd[a * s + b];
            lp[p] = ld[a * s + b];
            hsum += hp[p];
            lsum += lp[p];
          }
          double stress = 0.0;
          for (int p = 0; p < 6; ++p) {
            double d = relative ? hp[p] / hsum - lp[p] / lsum : hp[p] - lp[p];
            stress += d * d;
          }
          total += stress;
          ++count;
        }
  return total / (6.0 * static_cast<double>(count));
}

double sampled_relative_stress(const Dataset& data, const Embedding& emb,
                               std::size_t max_points, bool relative) {
  const std::size_t s = std::min(data.n, max_points);
  std::vector<std::uint32_t> subset(s);
  for (std::size_t i = 0; i < s; ++i)
    subset[i] = static_cast<std::uint32_t>(i * data.n / s);
  return full_relative_stress(data, emb, subset, relative);
}

}  // namespace squadmds
