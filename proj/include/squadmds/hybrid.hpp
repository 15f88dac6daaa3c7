#pragma once

#include <vector>

#include "squadmds/tsne.hpp"
#include "squadmds/types.hpp"

namespace squadmds {

inline constexpr double kDefaultLrMdsHybrid = 0.5;
inline constexpr double kNormalizeEps = 1e-12;

struct BlendConfig {
  LrSchedule mds;
  LrSchedule tsne;
};

/// Divides every row of a flat n*2 gradient by the population std of the
/// per-row norms (floored at eps), putting both arms on a common scale
/// regardless of their raw magnitudes. Returns the std that was used.
double normalize_by_norm_std(std::vector<double>& g, std::size_t n,
                             double eps = kNormalizeEps);

/// blended = eta_mds(t) * g_mds + eta_tsne(t) * g_tsne, written into out.
/// Inputs are expected to be normalized already.
void blend(const std::vector<double>& g_mds, const std::vector<double>& g_tsne,
           const BlendConfig& cfg, std::size_t t, std::vector<double>& out);

/// Hybrid run: per iteration both gradients are computed at the Nesterov
/// lookahead, the quartet gradient clipped, each arm normalized by the
/// population std of its row norms, blended with per-arm decayed rates
/// (defaults lr_tsne = 1.0, lr_mds = 0.5, both absolute, shared decay
/// shape), and applied as one momentum step. An arm whose learning rate is
/// zero is skipped outright, so lr_tsne = 0 reproduces run_squad_mds
/// bit for bit given the same seed and schedule. Default iterations: 750.
Embedding run_hybrid(const Dataset& data, const RunConfig& cfg,
                     const TelemetrySink& sink = nullptr);

/// Same, reusing similarities already computed for this dataset.
Embedding run_hybrid(const Dataset& data, const RunConfig& cfg,
                     const SimilarityMatrix& similarities,
                     const TelemetrySink& sink = nullptr);

}  // namespace squadmds
