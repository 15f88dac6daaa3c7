#include "squadmds/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "squadmds/rng.hpp"

namespace squadmds {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

namespace {

constexpr double kPowerTol = 1e-9;
constexpr int kPowerMaxIters = 1000;
constexpr std::size_t kExplicitCovMaxM = 1000;

void normalize_vec(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s > 0.0)
    for (double& x : v) x /= s;
}

// Applies the (deflated) sample covariance to v. With an explicit matrix
// this is a plain matvec; otherwise it goes through the centered data:
// C v = X_c^T (X_c v) / (n-1), without ever forming X_c or C.
struct CovOperator {
  const Dataset* data = nullptr;
  const std::vector<double>* mean = nullptr;
  std::vector<double> cov;  // m*m when explicit, else empty
  // deflation: subtract lambda * (v1 . v) * v1
  const std::vector<double>* deflate_vec = nullptr;
  double deflate_val = 0.0;

  void apply(const std::vector<double>& v, std::vector<double>& out,
             std::vector<double>& scratch_n) const {
    const std::size_t m = data->m;
    const std::size_t n = data->n;
    if (!cov.empty()) {
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        const double* row = cov.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
        out[i] = s;
      }
    } else {
      double mu_dot_v = 0.0;
      for (std::size_t j = 0; j < m; ++j) mu_dot_v += (*mean)[j] * v[j];
      double ysum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = data->points.data() + i * m;
        double s = -mu_dot_v;
        for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
        scratch_n[i] = s;
        ysum += s;
      }
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = data->points.data() + i * m;
        const double y = scratch_n[i];
        for (std::size_t j = 0; j < m; ++j) out[j] += y * row[j];
      }
      const double denom = static_cast<double>(n - 1);
      for (std::size_t j = 0; j < m; ++j)
        out[j] = (out[j] - ysum * (*mean)[j]) / denom;
    }
    if (deflate_vec) {
      double proj = 0.0;
      for (std::size_t j = 0; j < m; ++j) proj += (*deflate_vec)[j] * v[j];
      for (std::size_t j = 0; j < m; ++j)
        out[j] -= deflate_val * proj * (*deflate_vec)[j];
    }
  }
};

// Largest eigenpair of op by power iteration. Returns the Rayleigh
// quotient; the converged vector lands in v. If the operator annihilates
// the start vector (zero matrix after deflation) the eigenvalue is 0 and
// v is replaced by `fallback` if one is given.
double power_iteration(const CovOperator& op, std::vector<double>& v,
                       std::vector<double>& scratch_n,
                       const std::vector<double>* fallback) {
  const std::size_t m = v.size();
  std::vector<double> next(m), prev(m);
  for (int it = 0; it < kPowerMaxIters; ++it) {
    op.apply(v, next, scratch_n);
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-300) {
      if (fallback) v = *fallback;
      return 0.0;
    }
    for (std::size_t j = 0; j < m; ++j) next[j] /= norm;
    double diff = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double d = next[j] - v[j];
      diff += d * d;
    }
    prev = v;
    v = next;
    if (std::sqrt(diff) < kPowerTol) break;
  }
  op.apply(v, next, scratch_n);
  double rayleigh = 0.0;
  for (std::size_t j = 0; j < m; ++j) rayleigh += v[j] * next[j];
  return std::max(rayleigh, 0.0);
}

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < v.size(); ++j)
    if (std::abs(v[j]) > std::abs(v[best])) best = j;
  if (v[best] < 0.0)
    for (double& x : v) x = -x;
}

// Unit vector orthogonal to v1: take the axis where v1 is smallest and
// project it out. Deterministic completion for rank-deficient data.
std::vector<double> orthogonal_complement(const std::vector<double>& v1) {
  const std::size_t m = v1.size();
  std::size_t k = 0;
  for (std::size_t j = 1; j < m; ++j)
    if (std::abs(v1[j]) < std::abs(v1[k])) k = j;
  std::vector<double> u(m, 0.0);
  u[k] = 1.0;
  for (std::size_t j = 0; j < m; ++j) u[j] -= v1[k] * v1[j];
  normalize_vec(u);
  return u;
}

}  // namespace

PcaBasis pca_fit(const Dataset& data) {
  const std::size_t n = data.n;
  const std::size_t m = data.m;
  PcaBasis basis;
  basis.m = m;
  basis.mean.assign(m, 0.0);
  basis.components.assign(2 * m, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data.points.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) basis.mean[j] += row[j];
  }
  for (std::size_t j = 0; j < m; ++j) basis.mean[j] /= static_cast<double>(n);

  // Total variance and a scale reference for the degeneracy test.
  double trace = 0.0;
  double mean_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data.points.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) {
      double c = row[j] - basis.mean[j];
      trace += c * c;
      mean_sq += row[j] * row[j];
    }
  }
  trace /= static_cast<double>(n - 1);
  mean_sq /= static_cast<double>(n);
  if (trace <= 1e-15 * std::max(1.0, mean_sq)) {
    basis.degenerate = true;
    basis.components[0] = 1.0;           // canonical axes, explained stays 0
    if (m >= 2) basis.components[m + 1] = 1.0;
    return basis;
  }

  CovOperator op;
  op.data = &data;
  op.mean = &basis.mean;
  if (m <= kExplicitCovMaxM) {
    op.cov.assign(m * m, 0.0);
    std::vector<double> centered(m);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = data.points.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) centered[j] = row[j] - basis.mean[j];
      for (std::size_t j = 0; j < m; ++j) {
        const double cj = centered[j];
        double* out = op.cov.data() + j * m;
        for (std::size_t k = j; k < m; ++k) out[k] += cj * centered[k];
      }
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = j; k < m; ++k) {
        op.cov[j * m + k] /= denom;
        op.cov[k * m + j] = op.cov[j * m + k];
      }
  }

  // Fixed-seed start vector: deterministic across runs and platforms.
  RngStream rng(0x5eedbeef);
  std::vector<double> v1(m);
  for (double& x : v1) x = rng.normal();
  normalize_vec(v1);
  std::vector<double> scratch_n(op.cov.empty() ? n : 0);

  basis.explained[0] = power_iteration(op, v1, scratch_n, nullptr);
  fix_sign(v1);

  if (m == 1) {
    basis.components[0] = v1[0];
    basis.explained[1] = 0.0;
    return basis;
  }

  op.deflate_vec = &v1;
  op.deflate_val = basis.explained[0];
  std::vector<double> v2(m);
  for (double& x : v2) x = rng.normal();
  // Keep the start vector clear of the first component.
  double proj = 0.0;
  for (std::size_t j = 0; j < m; ++j) proj += v1[j] * v2[j];
  for (std::size_t j = 0; j < m; ++j) v2[j] -= proj * v1[j];
  normalize_vec(v2);
  std::vector<double> ortho = orthogonal_complement(v1);
  double v2_norm = 0.0;
  for (double x : v2) v2_norm += x * x;
  if (v2_norm < 0.5) v2 = ortho;  // start draw was parallel to v1

  basis.explained[1] = power_iteration(op, v2, scratch_n, &ortho);
  fix_sign(v2);

  std::copy(v1.begin(), v1.end(), basis.components.begin());
  std::copy(v2.begin(), v2.end(), basis.components.begin() + m);
  return basis;
}

Embedding pca_project(const Dataset& data, const PcaBasis& basis) {
  if (basis.m != data.m)
    throw Error(ErrorKind::dimension_mismatch,
                "basis dimension " + std::to_string(basis.m) +
                    " does not match data dimension " + std::to_string(data.m));
  Embedding e = Embedding::zeros(data.n);
  const std::size_t m = data.m;
  const double* c0 = basis.components.data();
  const double* c1 = basis.components.data() + m;
  double off0 = 0.0, off1 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    off0 += basis.mean[j] * c0[j];
    off1 += basis.mean[j] * c1[j];
  }
  for (std::size_t i = 0; i < data.n; ++i) {
    const double* row = data.points.data() + i * m;
    double a = -off0, b = -off1;
    for (std::size_t j = 0; j < m; ++j) {
      a += row[j] * c0[j];
      b += row[j] * c1[j];
    }
    e.coords[i * 2] = a;
    e.coords[i * 2 + 1] = b;
  }
  return e;
}

double embedding_span(const Embedding& e) {
  if (e.n == 0) return 1.0;
  double xmin = e.coords[0], xmax = e.coords[0];
  double ymin = e.coords[1], ymax = e.coords[1];
  for (std::size_t i = 1; i < e.n; ++i) {
    xmin = std::min(xmin, e.coords[i * 2]);
    xmax = std::max(xmax, e.coords[i * 2]);
    ymin = std::min(ymin, e.coords[i * 2 + 1]);
    ymax = std::max(ymax, e.coords[i * 2 + 1]);
  }
  double span = std::max(xmax - xmin, ymax - ymin);
  return span > 0.0 ? span : 1.0;
}

}  // namespace squadmds
