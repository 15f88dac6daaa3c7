#include "squadmds/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "squadmds/rng.hpp"

namespace squadmds {

namespace {

std::string num_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

Dataset gaussian_blobs(std::size_t n, std::size_t m, std::size_t k,
                       std::uint64_t seed, double center_range, double noise) {
  RngStream rng(seed);
  std::vector<double> centers(k * m);
  for (double& c : centers) c = rng.uniform(-center_range, center_range);
  std::vector<double> pts(n * m);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % k;
    for (std::size_t j = 0; j < m; ++j)
      pts[i * m + j] = centers[c * m + j] + noise * rng.normal();
    labels[i] = std::to_string(c);
  }
  return validate_dataset(std::move(pts), n, m, std::move(labels));
}

Dataset hierarchical_clusters(std::size_t n, std::size_t m, std::size_t majors,
                              std::size_t minors, std::uint64_t seed,
                              double major_scale, double minor_scale, double noise) {
  RngStream rng(seed);
  std::vector<double> major_centers(majors * m);
  for (double& c : major_centers) c = rng.uniform(-major_scale, major_scale);
  std::vector<double> minor_centers(majors * minors * m);
  for (std::size_t a = 0; a < majors; ++a)
    for (std::size_t b = 0; b < minors; ++b)
      for (std::size_t j = 0; j < m; ++j)
        minor_centers[(a * minors + b) * m + j] =
            major_centers[a * m + j] + minor_scale * rng.normal();

  std::vector<double> pts(n * m);
  std::vector<std::string> labels(n);
  const std::size_t groups = majors * minors;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = i % groups;
    for (std::size_t j = 0; j < m; ++j)
      pts[i * m + j] = minor_centers[g * m + j] + noise * rng.normal();
    labels[i] = std::to_string(g / minors) + "." + std::to_string(g % minors);
  }
  return validate_dataset(std::move(pts), n, m, std::move(labels));
}

Dataset swiss_roll(std::size_t n, std::uint64_t seed, double noise) {
  RngStream rng(seed);
  std::vector<double> pts(n * 3);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 1.5 * std::numbers::pi * (1.0 + 2.0 * rng.uniform());
    const double h = 21.0 * rng.uniform();
    pts[i * 3] = t * std::cos(t) + noise * rng.normal();
    pts[i * 3 + 1] = h + noise * rng.normal();
    pts[i * 3 + 2] = t * std::sin(t) + noise * rng.normal();
    labels[i] = num_label(t);
  }
  return validate_dataset(std::move(pts), n, 3, std::move(labels));
}

Dataset hypercube_uniform(std::size_t n, std::size_t m, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> pts(n * m);
  for (double& p : pts) p = rng.uniform();
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = num_label(pts[i * m]);
  return validate_dataset(std::move(pts), n, m, std::move(labels));
}

Dataset anisotropic_gaussian(std::size_t n, std::size_t m, std::uint64_t seed,
                             double decay) {
  RngStream rng(seed);
  std::vector<double> scale(m);
  double s = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    scale[j] = s;
    s *= decay;
  }
  std::vector<double> pts(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) pts[i * m + j] = scale[j] * rng.normal();
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = num_label(pts[i * m]);
  return validate_dataset(std::move(pts), n, m, std::move(labels));
}

Dataset make_named_dataset(const std::string& name, std::size_t n,
                           std::uint64_t seed) {
  if (name == "blobs") return gaussian_blobs(n, 10, 5, seed);
  if (name == "hierarchical") return hierarchical_clusters(n, 10, 4, 3, seed);
  if (name == "swiss-roll") return swiss_roll(n, seed);
  if (name == "hypercube") return hypercube_uniform(n, 10, seed);
  if (name == "anisotropic") return anisotropic_gaussian(n, 50, seed);
  throw Error(ErrorKind::bad_config, "unknown dataset '" + name +
                                         "' (expected blobs, hierarchical, "
                                         "swiss-roll, hypercube or anisotropic)");
}

}  // namespace squadmds
