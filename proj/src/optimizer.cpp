#include "squadmds/optimizer.hpp"

#include <cmath>

namespace squadmds {

LrSchedule default_decay_schedule(double eta0, std::size_t iterations) {
  LrSchedule s;
  s.eta0 = eta0;
  s.a = 9.0 / static_cast<double>(iterations < 1 ? 1 : iterations);
  s.b = 1.0;
  return s;
}

double row_norm_std(const std::vector<double>& g, std::size_t n) {
  if (n == 0) return 0.0;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = g[i * 2], y = g[i * 2 + 1];
    double norm = std::sqrt(x * x + y * y);
    sum += norm;
    sumsq += norm * norm;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double var = sumsq * inv_n - (sum * inv_n) * (sum * inv_n);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

double clip_rows_to_norm_std(std::vector<double>& g, std::size_t n,
                             double limit_sigmas) {
  const double sigma = row_norm_std(g, n);
  if (sigma <= 0.0) return sigma;
  const double limit = limit_sigmas * sigma;
  for (std::size_t i = 0; i < n; ++i) {
    double x = g[i * 2], y = g[i * 2 + 1];
    double norm = std::sqrt(x * x + y * y);
    if (norm > limit) {
      double s = limit / norm;
      g[i * 2] = x * s;
      g[i * 2 + 1] = y * s;
    }
  }
  return sigma;
}

}  // namespace squadmds
