#pragma once

#include <cmath>
#include <functional>

#include "squadmds/types.hpp"

namespace squadmds {

inline constexpr std::size_t kDefaultSquadIterations = 5000;
inline constexpr double kDefaultLrSpanMultiplier = 0.05;
inline constexpr double kDefaultGamma = 0.9;

/// Default decay: eta(t) = eta0 / (a*t + 1) with a = 9/T, so the rate ends
/// at eta0/10 after T iterations.
LrSchedule default_decay_schedule(double eta0, std::size_t iterations);

inline double lr_at(const LrSchedule& s, std::size_t t) {
  return s.eta0 * s.b / (s.a * static_cast<double>(t) + s.b);
}

/// One Nesterov momentum step:
///   v <- gamma*v - eta(t) * grad(coords + gamma*v)
///   coords <- coords + v
/// grad is called exactly once, with the lookahead coordinates, and must
/// return a flat n*2 gradient. Advances state.t. Throws
/// Error(non_finite_update) if any updated coordinate is not finite.
template <typename GradFn>
void nesterov_step(Embedding& coords, OptimizerState& state, GradFn&& grad) {
  const std::size_t len = coords.coords.size();
  Embedding lookahead;
  lookahead.n = coords.n;
  lookahead.coords.resize(len);
  for (std::size_t i = 0; i < len; ++i)
    lookahead.coords[i] = coords.coords[i] + state.gamma * state.velocity[i];

  const std::vector<double>& g = grad(static_cast<const Embedding&>(lookahead));
  const double eta = lr_at(state.schedule, state.t);
  bool ok = true;
  for (std::size_t i = 0; i < len; ++i) {
    state.velocity[i] = state.gamma * state.velocity[i] - eta * g[i];
    coords.coords[i] += state.velocity[i];
    ok = ok && std::isfinite(coords.coords[i]);
  }
  state.t += 1;
  if (!ok)
    throw Error(ErrorKind::non_finite_update,
                "non-finite coordinate after optimizer step " +
                    std::to_string(state.t - 1),
                static_cast<long>(state.t - 1));
}

/// Population std of the per-row Euclidean norms of a flat n*2 array.
double row_norm_std(const std::vector<double>& g, std::size_t n);

/// Rescales any row whose norm exceeds limit_sigmas times the population
/// std of all row norms down to exactly that limit. No-op when the std is
/// zero (all norms equal). Returns the std it measured.
double clip_rows_to_norm_std(std::vector<double>& g, std::size_t n,
                             double limit_sigmas = 10.0);

/// Per-iteration diagnostics, emitted every telemetry_every iterations
/// (and always for the final one) when a sink is installed. Norm stats
/// refer to the raw per-arm gradients before normalization; stress_sample
/// is the mean relative quartet stress of a small strided point subset.
/// Producing a record never touches the run's RNG stream, so telemetry on
/// vs off cannot change the embedding.
struct TelemetryRecord {
  std::size_t iteration = 0;
  double eta_mds = 0.0;
  double eta_tsne = 0.0;
  double mds_norm_std = 0.0;
  double tsne_norm_std = 0.0;
  double blended_norm_mean = 0.0;
  double blended_norm_max = 0.0;
  double stress_sample = 0.0;
};

using TelemetrySink = std::function<void(const TelemetryRecord&)>;

/// Stochastic quartet-descent MDS. Starts from the PCA projection (random
/// [-1,1]^2 if PCA is degenerate), then per iteration: draw a fresh random
/// quartet partition, accumulate analytic quartet gradients, clip, divide
/// by the population std of the row norms, and take a Nesterov step with
/// eta0 = lr_mds * span(init) decayed by default_decay_schedule. Points
/// left over by the partition still decay their momentum. O(n) work and
/// memory per iteration.
Embedding run_squad_mds(const Dataset& data, const RunConfig& cfg,
                        const TelemetrySink& sink = nullptr);

}  // namespace squadmds
