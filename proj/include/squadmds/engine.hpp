#pragma once

#include <optional>

#include "squadmds/hybrid.hpp"
#include "squadmds/optimizer.hpp"
#include "squadmds/quartet.hpp"
#include "squadmds/rng.hpp"
#include "squadmds/tsne.hpp"
#include "squadmds/types.hpp"

namespace squadmds {

/// One gradient arm of the shared SGD loop. A disabled arm (or one whose
/// eta0 is zero) is never evaluated.
struct ArmConfig {
  bool enabled = false;
  LrSchedule schedule;
};

struct EngineConfig {
  std::size_t iterations = 1;
  double gamma = kDefaultGamma;
  int workers = 1;
  ArmConfig mds;
  ArmConfig tsne;
  bool clip_mds = true;
  double exaggeration = 1.0;
  std::size_t exaggeration_iters = 0;
  std::size_t telemetry_every = 0;
  std::size_t stress_sample_points = 24;
};

/// The one SGD loop behind run_squad_mds, run_tsne and run_hybrid. Each
/// step: evaluate the enabled arms at the Nesterov lookahead (fresh random
/// quartet partition for the MDS arm, KL gradient against the fixed
/// similarity matrix for the t-SNE arm), clip the MDS arm, normalize each
/// arm by the population std of its row norms, sum eta_arm(t) * arm, and
/// apply one momentum update. Exposed as a class so callers can single-step
/// and inspect; run() drives all iterations and telemetry.
class EmbeddingSgd {
public:
  /// similarities must outlive the engine and be non-null iff the t-SNE
  /// arm is active.
  EmbeddingSgd(const Dataset& data, Embedding init, const EngineConfig& cfg,
               RngStream rng, const SimilarityMatrix* similarities = nullptr);

  void step();
  Embedding run(const TelemetrySink& sink = nullptr);

  const Embedding& coords() const { return coords_; }
  const OptimizerState& state() const { return state_; }
  const TelemetryRecord& last_record() const { return record_; }

private:
  const std::vector<double>& eval_gradient_(const Embedding& lookahead);
  void fill_record_();

  const Dataset& data_;
  EngineConfig cfg_;
  RngStream rng_;
  const SimilarityMatrix* similarities_;
  Embedding coords_;
  OptimizerState state_;
  QuartetPartition partition_;
  std::vector<double> g_mds_;
  std::vector<double> g_tsne_;
  std::vector<double> g_blend_;
  TelemetryRecord record_;
  bool mds_on_;
  bool tsne_on_;
};

/// Uniform random coordinates in [-1,1]^2, drawn row by row from rng; the
/// --init random starting layout and the degenerate-PCA fallback.
Embedding random_embedding(std::size_t n, RngStream& rng);

/// Shared preamble of every runner: resolve the config, fit PCA, project,
/// and fall back to random [-1,1]^2 coordinates (drawn from rng) when the
/// basis is degenerate. Reports whether the fallback fired.
Embedding initial_embedding(const Dataset& data, RngStream& rng,
                            bool* used_random_fallback = nullptr);

}  // namespace squadmds
