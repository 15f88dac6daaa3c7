#pragma once

#include <cstdint>
#include <vector>

#include "squadmds/types.hpp"

namespace squadmds {

/// K nearest neighbors of every point, by squared Euclidean distance with
/// ties broken toward the lower index. ids is n*k, row-major, each row in
/// ascending distance order and excluding the point itself.
struct NeighborTable {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::uint32_t> ids;

  const std::uint32_t* row(std::size_t i) const { return ids.data() + i * k; }
};

NeighborTable knn_sets(const double* points, std::size_t n, std::size_t dim,
                       std::size_t k, int workers = 1);

/// Neighborhood preservation curves between a dataset and its embedding:
///   q_nx[K-1] = mean_i |HD-kNN_i(K) intersect LD-kNN_i(K)| / K
///   r_nx[K-1] = ((n-1)*q_nx - K) / (n-1 - K)
/// for K = 1 .. n-2, with auc the 1/K-weighted mean of r_nx:
///   auc = (sum_K r_nx(K)/K) / (sum_K 1/K).
/// A random embedding has q_nx(K) ~ K/(n-1) and auc ~ 0; a perfect one has
/// r_nx = 1 everywhere and auc = 1.
struct QualityCurve {
  std::size_t n = 0;
  std::vector<std::size_t> k_values;  // 1 .. n-2
  std::vector<double> q_nx;
  std::vector<double> r_nx;
  double auc = 0.0;
};

/// Full-curve computation. Per point, both full neighbor orders are sorted
/// once and the intersection size is maintained incrementally while K
/// sweeps upward (a rank array marks which LD positions have appeared in
/// the HD prefix), so the whole curve costs O(n^2 log n) instead of
/// O(n^3). Per-point contributions accumulate into fixed-shape block
/// partials, so the curve is identical for any worker count.
/// Requires n >= 3.
QualityCurve quality_curves(const Dataset& data, const Embedding& emb,
                            int workers = 1);

/// Curve pieces, for callers that already have a QualityCurve's q_nx.
std::vector<double> rnx_from_qnx(const std::vector<double>& q_nx, std::size_t n);
double auc_log_k(const std::vector<double>& r_nx);

}  // namespace squadmds
