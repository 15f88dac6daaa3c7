#pragma once

#include <vector>

#include "squadmds/types.hpp"

namespace squadmds {

inline constexpr std::size_t kDefaultSmacofMaxIters = 300;
inline constexpr double kDefaultSmacofRelThreshold = 1e-4;
inline constexpr double kSmacofJitter = 1e-9;
inline constexpr std::size_t kPairwiseStressMaxN = 20000;

/// Raw (absolute) pairwise stress: mean over the C(n,2) pairs i<j of
/// (delta_ij - d_ij)^2, where delta is the HD distance and d the embedded
/// distance. Quadratic cost; throws Error(too_large) beyond 20000 points.
double pairwise_stress(const Dataset& data, const Embedding& emb, int workers = 1);

/// Least-squares uniform scale for the embedding against the HD distances:
/// alpha* = sum(delta*d) / sum(d^2). Multiplying the embedding by this
/// minimizes pairwise stress over uniform rescalings, which makes stress
/// comparable between scale-anchored and scale-free methods.
double optimal_stress_scale(const Dataset& data, const Embedding& emb);

/// One Guttman transform for unweighted stress: X <- (1/n) * B(X) X with
/// b_ij = -delta_ij / d_ij off the diagonal and b_ii = -sum_{j!=i} b_ij.
/// Embedded distances are floored at the jitter (1e-9) so coincident
/// points cannot divide by zero. Guaranteed not to increase stress.
void smacof_step(const Dataset& data, Embedding& emb, int workers = 1);

struct SmacofResult {
  Embedding embedding;
  std::vector<double> stress_trace;  // stress after each completed step, [0] = init
  std::size_t iterations = 0;
  bool converged = false;
};

/// Full SMACOF from the PCA projection: Guttman steps until the relative
/// stress decrease falls below rel_threshold (default 1e-4) or max_iters
/// (default 300). rel_threshold = 0 always runs max_iters, which bench
/// uses for uniform per-size work.
SmacofResult run_smacof(const Dataset& data, const RunConfig& cfg);

}  // namespace squadmds
