#include "squadmds/hybrid.hpp"

#include <cmath>

#include "squadmds/optimizer.hpp"

namespace squadmds {

double normalize_by_norm_std(std::vector<double>& g, std::size_t n, double eps) {
  double sigma = row_norm_std(g, n);
  double denom = std::max(sigma, eps);
  for (double& x : g) x /= denom;
  return denom;
}

void blend(const std::vector<double>& g_mds, const std::vector<double>& g_tsne,
           const BlendConfig& cfg, std::size_t t, std::vector<double>& out) {
  const double em = lr_at(cfg.mds, t);
  const double et = lr_at(cfg.tsne, t);
  out.resize(g_mds.size());
  for (std::size_t e = 0; e < out.size(); ++e)
    out[e] = em * g_mds[e] + et * g_tsne[e];
}

}  // namespace squadmds
