#include "squadmds/types.hpp"

#include <algorithm>
#include <cmath>

#include "squadmds/hybrid.hpp"
#include "squadmds/optimizer.hpp"
#include "squadmds/smacof.hpp"
#include "squadmds/tsne.hpp"

namespace squadmds {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::bad_config:
      return 1;
    case ErrorKind::non_finite_update:
      return 3;
    default:
      return 2;
  }
}

OptimizerState make_optimizer_state(std::size_t n, std::size_t max_iters,
                                    LrSchedule schedule, double gamma) {
  if (n == 0)
    throw Error(ErrorKind::bad_config, "optimizer state needs at least one point");
  if (max_iters < 1)
    throw Error(ErrorKind::bad_config, "max_iters must be at least 1");
  if (!(schedule.eta0 > 0.0))
    throw Error(ErrorKind::bad_config, "eta0 must be positive");
  if (!(schedule.a >= 0.0))
    throw Error(ErrorKind::bad_config, "schedule decay a must be non-negative");
  if (!(schedule.b > 0.0))
    throw Error(ErrorKind::bad_config, "schedule offset b must be positive");
  if (!(gamma >= 0.0) || gamma >= 1.0)
    throw Error(ErrorKind::bad_config, "momentum gamma must lie in [0, 1)");
  OptimizerState st;
  st.velocity.assign(n * 2, 0.0);
  st.t = 0;
  st.max_iters = max_iters;
  st.schedule = schedule;
  st.gamma = gamma;
  return st;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::squad_mds: return "squad-mds";
    case Method::tsne: return "tsne";
    case Method::hybrid: return "hybrid";
    case Method::smacof: return "smacof";
    case Method::pca: return "pca";
  }
  return "?";
}

bool parse_method(const std::string& name, Method& out) {
  if (name == "squad-mds") out = Method::squad_mds;
  else if (name == "tsne") out = Method::tsne;
  else if (name == "hybrid") out = Method::hybrid;
  else if (name == "smacof") out = Method::smacof;
  else if (name == "pca") out = Method::pca;
  else return false;
  return true;
}

RunConfig resolve_run_config(const RunConfig& cfg, std::size_t n) {
  RunConfig r = cfg;
  if (r.iterations == 0) {
    switch (r.method) {
      case Method::squad_mds: r.iterations = kDefaultSquadIterations; break;
      case Method::tsne:
      case Method::hybrid: r.iterations = kDefaultTsneIterations; break;
      case Method::smacof: r.iterations = r.smacof_max_iters; break;
      case Method::pca: r.iterations = 1; break;
    }
  }
  if (r.method == Method::smacof) r.smacof_max_iters = r.iterations;
  if (r.lr_mds < 0.0) {
    r.lr_mds = (r.method == Method::hybrid) ? kDefaultLrMdsHybrid
                                            : kDefaultLrSpanMultiplier;
  }
  if (r.lr_tsne < 0.0) r.lr_tsne = kDefaultLrTsne;
  if (r.perplexities.empty()) r.perplexities = kDefaultPerplexities;

  if (r.workers < 1)
    throw Error(ErrorKind::bad_config, "workers must be at least 1");
  if (!(r.gamma >= 0.0) || r.gamma >= 1.0)
    throw Error(ErrorKind::bad_config, "momentum gamma must lie in [0, 1)");
  if (r.method == Method::hybrid && r.lr_mds == 0.0 && r.lr_tsne == 0.0)
    throw Error(ErrorKind::bad_config,
                "hybrid needs a non-zero learning rate on at least one arm");
  if (!(r.exaggeration > 0.0))
    throw Error(ErrorKind::bad_config, "exaggeration must be positive");
  if (r.method == Method::tsne || r.method == Method::hybrid) {
    for (double p : r.perplexities) {
      if (!(p >= 1.0) || !(p < static_cast<double>(n) - 1.0))
        throw Error(ErrorKind::perplexity_bound,
                    "perplexity " + std::to_string(p) +
                        " outside [1, n-1) for n = " + std::to_string(n));
    }
  }
  return r;
}

Dataset validate_dataset(std::vector<double> points, std::size_t n, std::size_t m,
                         std::vector<std::string> labels) {
  if (n == 0 || m == 0 || points.empty())
    throw Error(ErrorKind::empty_matrix, "empty matrix");
  if (points.size() != n * m)
    throw Error(ErrorKind::dimension_mismatch,
                "matrix storage holds " + std::to_string(points.size()) +
                    " values, expected " + std::to_string(n * m));
  if (n < 2)
    throw Error(ErrorKind::too_few_points, "need at least 2 points, got " +
                                               std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(points[i * m + j]))
        throw Error(ErrorKind::non_finite_value,
                    "non-finite value at row " + std::to_string(i) + ", column " +
                        std::to_string(j),
                    static_cast<long>(i), static_cast<long>(j));
    }
  }
  if (!labels.empty() && labels.size() != n)
    throw Error(ErrorKind::row_count_mismatch,
                std::to_string(labels.size()) + " labels for " +
                    std::to_string(n) + " points");
  Dataset d;
  d.n = n;
  d.m = m;
  d.points = std::move(points);
  d.labels = std::move(labels);
  return d;
}

}  // namespace squadmds
