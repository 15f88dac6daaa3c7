#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "squadmds/rng.hpp"
#include "squadmds/types.hpp"

namespace squadmds {

/// Distances are floored here before any division, so coincident points
/// yield finite relative distances and gradients.
inline constexpr double kDistanceFloor = 1e-12;

struct QuartetPartition {
  std::vector<std::array<std::uint32_t, 4>> quartets;
  std::vector<std::uint32_t> leftover;  // the n mod 4 unassigned indices
  std::vector<std::uint32_t> perm;      // scratch, reused across iterations
};

/// Random disjoint partition of 0..n-1 into floor(n/4) quartets plus
/// leftovers: one Fisher-Yates shuffle, then consecutive chunks of four.
/// Throws Error(too_few_points) for n < 4.
QuartetPartition partition_into_quartets(std::size_t n, RngStream& rng);

/// Same partition, reusing the caller's storage across iterations.
void partition_into_quartets(std::size_t n, RngStream& rng, QuartetPartition& out);

/// Fills a workspace for the quartet idx: raw and relative distances in
/// both spaces, in kQuartetPairs order. HD distances come from the dataset
/// rows, LD from the embedding.
void quartet_distances(const Dataset& data, const Embedding& emb,
                       const std::array<std::uint32_t, 4>& idx, QuartetWorkspace& w);

/// Sum over the six pairs of (hd_rel - ld_rel)^2.
double quartet_stress(const QuartetWorkspace& w);

struct QuartetGradient {
  std::array<std::array<double, 2>, 4> g{};  // d(stress)/d(coords of member q)
};

/// Analytic gradient of quartet_stress with respect to the four embedded
/// points. Every pair's term contributes both directly and through the
/// shared distance sum in the denominator; folding the two gives, for
/// member q with c_ab = 2*(ld_rel_ab - hd_rel_ab)/ld_sum and
/// C = sum over pairs of c_ab*ld_rel_ab,
///
///   grad_q = sum over b != q of (c_qb - C) * (x_q - x_b) / ld_qb
///
/// which is what this computes. Must be evaluated against the same
/// embedding the workspace was filled from.
QuartetGradient quartet_gradient(const QuartetWorkspace& w, const Embedding& emb);

/// Mean of (1/6) * quartet stress over every quartet (i<j<k<l) of a point
/// subset; the per-pair-term diagnostic objective the stochastic descent
/// minimizes in expectation. Brute force over all C(n,4) quartets, so the
/// subset is capped: throws Error(too_large) beyond 64 points. With
/// relative=false the raw (unnormalized) distances are compared instead;
/// that variant is scale-sensitive and equals the mean squared pairwise
/// distance residual exactly.
double full_relative_stress(const Dataset& data, const Embedding& emb,
                            const std::vector<std::uint32_t>& subset,
                            bool relative = true);

/// Convenience overload over an evenly strided subset of at most
/// max_points points (deterministic, no RNG involved).
double sampled_relative_stress(const Dataset& data, const Embedding& emb,
                               std::size_t max_points = 64, bool relative = true);

}  // namespace squadmds
