#include "squadmds/engine.hpp"

#include <cmath>

#include "squadmds/linalg.hpp"
#include "squadmds/parallel.hpp"

namespace squadmds {

Embedding random_embedding(std::size_t n, RngStream& rng) {
  Embedding e = Embedding::zeros(n);
  for (std::size_t i = 0; i < n * 2; ++i) e.coords[i] = rng.uniform(-1.0, 1.0);
  return e;
}

Embedding initial_embedding(const Dataset& data, RngStream& rng,
                            bool* used_random_fallback) {
  PcaBasis basis = pca_fit(data);
  if (used_random_fallback) *used_random_fallback = basis.degenerate;
  if (basis.degenerate) return random_embedding(data.n, rng);
  return pca_project(data, basis);
}

EmbeddingSgd::EmbeddingSgd(const Dataset& data, Embedding init,
                           const EngineConfig& cfg, RngStream rng,
                           const SimilarityMatrix* similarities)
    : data_(data), cfg_(cfg), rng_(rng), similarities_(similarities),
      coords_(std::move(init)) {
  mds_on_ = cfg_.mds.enabled && cfg_.mds.schedule.eta0 > 0.0;
  tsne_on_ = cfg_.tsne.enabled && cfg_.tsne.schedule.eta0 > 0.0;
  if (tsne_on_ && !similarities_)
    throw Error(ErrorKind::bad_config,
                "t-SNE arm requires a similarity matrix");
  if (!mds_on_ && !tsne_on_)
    throw Error(ErrorKind::bad_config, "no active gradient arm");
  if (coords_.n != data_.n)
    throw Error(ErrorKind::row_count_mismatch,
                "initial embedding row count does not match the dataset");
  // The per-arm schedules already carry the learning rates, so the outer
  // Nesterov step runs with a unit constant rate.
  state_ = make_optimizer_state(data_.n, cfg_.iterations,
                                LrSchedule{1.0, 0.0, 1.0}, cfg_.gamma);
  const std::size_t len = data_.n * 2;
  if (mds_on_) g_mds_.assign(len, 0.0);
  if (tsne_on_) g_tsne_.assign(len, 0.0);
  g_blend_.assign(len, 0.0);
}

const std::vector<double>& EmbeddingSgd::eval_gradient_(const Embedding& lookahead) {
  const std::size_t n = data_.n;
  const std::size_t t = state_.t;

  if (mds_on_) {
    partition_into_quartets(n, rng_, partition_);
    std::fill(g_mds_.begin(), g_mds_.end(), 0.0);
    const std::size_t nq = partition_.quartets.size();
    // Quartets own disjoint point rows, so any schedule writes the same
    // bytes.
    parallel_for_blocks(cfg_.workers, kReductionBlocks, [&](std::size_t b) {
      std::size_t q0, q1;
      block_range(nq, b, q0, q1);
      QuartetWorkspace w;
      for (std::size_t q = q0; q < q1; ++q) {
        quartet_distances(data_, lookahead, partition_.quartets[q], w);
        QuartetGradient g = quartet_gradient(w, lookahead);
        for (int v = 0; v < 4; ++v) {
          g_mds_[w.idx[v] * 2] += g.g[v][0];
          g_mds_[w.idx[v] * 2 + 1] += g.g[v][1];
        }
      }
    });
    record_.mds_norm_std = cfg_.clip_mds
                               ? clip_rows_to_norm_std(g_mds_, n)
                               : row_norm_std(g_mds_, n);
    normalize_by_norm_std(g_mds_, n);
  }

  if (tsne_on_) {
    const double attract =
        (t < cfg_.exaggeration_iters) ? cfg_.exaggeration : 1.0;
    tsne_gradient(*similarities_, lookahead, g_tsne_, attract, cfg_.workers);
    record_.tsne_norm_std = row_norm_std(g_tsne_, n);
    normalize_by_norm_std(g_tsne_, n);
  }

  record_.iteration = t + 1;
  record_.eta_mds = mds_on_ ? lr_at(cfg_.mds.schedule, t) : 0.0;
  record_.eta_tsne = tsne_on_ ? lr_at(cfg_.tsne.schedule, t) : 0.0;

  if (mds_on_ && tsne_on_) {
    blend(g_mds_, g_tsne_, BlendConfig{cfg_.mds.schedule, cfg_.tsne.schedule}, t,
          g_blend_);
  } else {
    const std::vector<double>& g = mds_on_ ? g_mds_ : g_tsne_;
    const double eta = mds_on_ ? record_.eta_mds : record_.eta_tsne;
    for (std::size_t e = 0; e < g_blend_.size(); ++e) g_blend_[e] = eta * g[e];
  }
  fill_record_();
  return g_blend_;
}

void EmbeddingSgd::fill_record_() {
  const std::size_t n = data_.n;
  double sum = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = g_blend_[i * 2], y = g_blend_[i * 2 + 1];
    double norm = std::sqrt(x * x + y * y);
    sum += norm;
    mx = std::max(mx, norm);
  }
  record_.blended_norm_mean = sum / static_cast<double>(n);
  record_.blended_norm_max = mx;
}

void EmbeddingSgd::step() {
  nesterov_step(coords_, state_,
                [this](const Embedding& look) -> const std::vector<double>& {
                  return eval_gradient_(look);
                });
}

Embedding EmbeddingSgd::run(const TelemetrySink& sink) {
  for (std::size_t it = 0; it < cfg_.iterations; ++it) {
    step();
    if (sink && cfg_.telemetry_every > 0 &&
        (state_.t % cfg_.telemetry_every == 0 || state_.t == cfg_.iterations)) {
      record_.stress_sample = data_.n >= 4
                                  ? sampled_relative_stress(
                                        data_, coords_, cfg_.stress_sample_points)
                                  : 0.0;
      sink(record_);
    }
  }
  return std::move(coords_);
}

Embedding run_squad_mds(const Dataset& data, const RunConfig& cfg,
                        const TelemetrySink& sink) {
  RunConfig rc = cfg;
  rc.method = Method::squad_mds;
  rc = resolve_run_config(rc, data.n);
  RngStream rng(rc.seed);
  Embedding init = rc.init_random ? random_embedding(data.n, rng)
                                  : initial_embedding(data, rng);
  const double eta0 = rc.lr_mds * embedding_span(init);
  if (!(eta0 > 0.0))
    throw Error(ErrorKind::bad_config, "lr_mds must be positive for squad-mds");

  EngineConfig ec;
  ec.iterations = rc.iterations;
  ec.gamma = rc.gamma;
  ec.workers = rc.workers;
  ec.mds = {true, default_decay_schedule(eta0, rc.iterations)};
  ec.telemetry_every = rc.telemetry_every;
  EmbeddingSgd engine(data, std::move(init), ec, rng);
  return engine.run(sink);
}

namespace {

Embedding run_neighbor_method(const Dataset& data, const RunConfig& rc,
                              const SimilarityMatrix& sims, bool with_mds_arm,
                              const TelemetrySink& sink) {
  RngStream rng(rc.seed);
  Embedding init = rc.init_random ? random_embedding(data.n, rng)
                                  : initial_embedding(data, rng);

  EngineConfig ec;
  ec.iterations = rc.iterations;
  ec.gamma = rc.gamma;
  ec.workers = rc.workers;
  ec.tsne = {rc.lr_tsne > 0.0,
             default_decay_schedule(std::max(rc.lr_tsne, 1e-300), rc.iterations)};
  if (with_mds_arm)
    ec.mds = {rc.lr_mds > 0.0,
              default_decay_schedule(std::max(rc.lr_mds, 1e-300), rc.iterations)};
  ec.exaggeration = rc.exaggeration;
  ec.exaggeration_iters = rc.exaggeration_iters;
  ec.telemetry_every = rc.telemetry_every;
  EmbeddingSgd engine(data, std::move(init), ec, rng,
                      ec.tsne.enabled ? &sims : nullptr);
  return engine.run(sink);
}

SimilarityMatrix build_similarities(const Dataset& data, const RunConfig& rc) {
  std::size_t sparsity = 0;
  if (rc.sparse_similarities) {
    double maxp = 0.0;
    for (double p : rc.perplexities) maxp = std::max(maxp, p);
    sparsity = static_cast<std::size_t>(std::ceil(3.0 * maxp));
  }
  return multiscale_similarities(data, rc.perplexities, sparsity, rc.workers);
}

}  // namespace

Embedding run_tsne(const Dataset& data, const RunConfig& cfg,
                   const SimilarityMatrix& similarities, const TelemetrySink& sink) {
  RunConfig rc = cfg;
  rc.method = Method::tsne;
  rc = resolve_run_config(rc, data.n);
  if (!(rc.lr_tsne > 0.0))
    throw Error(ErrorKind::bad_config, "lr_tsne must be positive for tsne");
  return run_neighbor_method(data, rc, similarities, false, sink);
}

Embedding run_tsne(const Dataset& data, const RunConfig& cfg,
                   const TelemetrySink& sink) {
  RunConfig rc = cfg;
  rc.method = Method::tsne;
  rc = resolve_run_config(rc, data.n);
  if (!(rc.lr_tsne > 0.0))
    throw Error(ErrorKind::bad_config, "lr_tsne must be positive for tsne");
  SimilarityMatrix sims = build_similarities(data, rc);
  return run_neighbor_method(data, rc, sims, false, sink);
}

Embedding run_hybrid(const Dataset& data, const RunConfig& cfg,
                     const SimilarityMatrix& similarities, const TelemetrySink& sink) {
  RunConfig rc = cfg;
  rc.method = Method::hybrid;
  rc = resolve_run_config(rc, data.n);
  return run_neighbor_method(data, rc, similarities, true, sink);
}

Embedding run_hybrid(const Dataset& data, const RunConfig& cfg,
                     const TelemetrySink& sink) {
  RunConfig rc = cfg;
  rc.method = Method::hybrid;
  rc = resolve_run_config(rc, data.n);
  if (rc.lr_tsne > 0.0) {
    SimilarityMatrix sims = build_similarities(data, rc);
    return run_neighbor_method(data, rc, sims, true, sink);
  }
  SimilarityMatrix none;
  return run_neighbor_method(data, rc, none, true, sink);
}

}  // namespace squadmds
