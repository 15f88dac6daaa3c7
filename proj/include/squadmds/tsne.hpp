#pragma once

#include <cstdint>
#include <vector>

#include "squadmds/optimizer.hpp"
#include "squadmds/types.hpp"

namespace squadmds {

inline constexpr std::size_t kDefaultTsneIterations = 750;
inline constexpr double kDefaultLrTsne = 1.0;
inline const std::vector<double> kDefaultPerplexities = {4.0, 50.0};
inline constexpr int kBisectionMaxIters = 200;
inline constexpr double kPerplexityRelTol = 1e-5;

struct CalibratedRow {
  std::vector<double> p;   // conditional similarities to the other n-1 points, sum 1
  double beta = 0.0;       // precision of the fitted Gaussian, p_j proportional to exp(-beta*d_j^2)
  int iterations = 0;
  bool degenerate = false; // all-equal distances; fell back to the uniform row
};

/// Fits the row bandwidth by bisection on beta so that 2^H(p) matches the
/// requested perplexity to 1e-5 relative. distances holds the n-1
/// Euclidean distances from the row's point to every other point, in index
/// order. Rows whose distances are all equal (entropy is flat in beta)
/// come back uniform with degenerate set; the same fallback applies if the
/// bisection somehow fails to converge within 200 iterations.
/// Requires 1 <= perplexity < n-1.
CalibratedRow calibrate_row(const std::vector<double>& distances, double perplexity);

/// Symmetric multi-scale similarity matrix. Dense unless sparse() is true,
/// in which case row_ptr/col/val hold CSR storage over the union of kNN
/// patterns. Entries sum to 1 across the whole matrix, diagonal is zero.
struct SimilarityMatrix {
  std::size_t n = 0;
  std::vector<double> perplexities;
  std::vector<double> dense;            // n*n row-major, empty when sparse
  std::vector<std::size_t> row_ptr;     // CSR, empty when dense
  std::vector<std::uint32_t> col;
  std::vector<double> val;
  std::size_t degenerate_rows = 0;      // uniform-fallback count across all scales

  bool sparse() const { return dense.empty() && n > 0; }
  double at(std::size_t i, std::size_t j) const;  // O(1) dense, O(log deg) sparse
};

/// For each perplexity: calibrate every row, symmetrize (K + K^T)/2, divide
/// by the grand sum; then average the per-perplexity matrices. With
/// knn_sparsity > 0 each row is calibrated only against its knn_sparsity
/// nearest neighbors (by Euclidean distance, ties to the lower index) and
/// the result is stored sparse on the symmetrized pattern. Every perplexity
/// must satisfy 1 <= p < n-1 (Error(perplexity_bound) otherwise; in sparse
/// mode the bound is against the neighbor count).
SimilarityMatrix multiscale_similarities(const Dataset& data,
                                         const std::vector<double>& perplexities,
                                         std::size_t knn_sparsity = 0,
                                         int workers = 1);

/// Gradient of KL(P || Q) at the given embedding, where Q is the Student-t
/// kernel w_ij = 1/(1 + |x_i - x_j|^2) normalized over all ordered pairs:
///
///   grad_i = 4 * sum_j (p_ij - q_ij) * w_ij * (x_i - x_j)
///
/// attract scales the attractive (p) term for early exaggeration; 1 is
/// plain KL. The kernel normalizer Z is accumulated in the same pass via
/// fixed-block partial sums, so results are identical for any worker
/// count. Writes the flat n*2 gradient into grad.
void tsne_gradient(const SimilarityMatrix& p, const Embedding& emb,
                   std::vector<double>& grad, double attract = 1.0,
                   int workers = 1);

/// KL(P || Q) in nats over entries with p > 0. Diagnostic counterpart of
/// tsne_gradient.
double kl_divergence(const SimilarityMatrix& p, const Embedding& emb);

/// Multi-scale t-SNE: the same Nesterov loop as run_squad_mds but with the
/// quartet arm off and the KL gradient normalized by the population std of
/// its row norms, eta0 = lr_tsne (absolute, default 1.0), default 750
/// iterations. PCA init. Set cfg.sparse_similarities for kNN-sparse
/// attractive forces with k = 3 * max perplexity.
Embedding run_tsne(const Dataset& data, const RunConfig& cfg,
                   const TelemetrySink& sink = nullptr);

/// Same, reusing similarities already computed for this dataset.
Embedding run_tsne(const Dataset& data, const RunConfig& cfg,
                   const SimilarityMatrix& similarities,
                   const TelemetrySink& sink = nullptr);

}  // namespace squadmds
