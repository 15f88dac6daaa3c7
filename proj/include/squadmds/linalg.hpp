#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "squadmds/types.hpp"

namespace squadmds {

double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Top-2 principal basis of a dataset. components holds the two component
/// vectors as rows (2 x m, row-major, orthonormal for m >= 2); explained
/// holds the matching covariance eigenvalues, descending. degenerate is set
/// when the data has no spread at all (explained[0] ~ 0); callers that need
/// an initial embedding fall back to random coordinates in that case.
struct PcaBasis {
  std::size_t m = 0;
  std::vector<double> components;  // 2*m
  double explained[2] = {0.0, 0.0};
  std::vector<double> mean;        // m
  bool degenerate = false;
};

/// Power iteration with deflation on the sample covariance (divisor n-1).
/// The covariance is formed explicitly for m <= 1000 and applied
/// matrix-free from the centered data otherwise, so wide inputs never
/// allocate an m x m matrix. Deterministic: the start vector comes from a
/// fixed internal seed, and each component's sign is fixed so its
/// largest-magnitude coordinate is positive.
PcaBasis pca_fit(const Dataset& data);

/// Projects onto the basis: coords = (x - mean) . components^T.
Embedding pca_project(const Dataset& data, const PcaBasis& basis);

/// max(x-extent, y-extent) of an embedding; 1.0 for a degenerate (single
/// point or empty) extent. Used to express learning rates in units of the
/// initial layout size.
double embedding_span(const Embedding& e);

}  // namespace squadmds
