#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace squadmds {

enum class ErrorKind {
  empty_matrix,
  too_few_points,
  non_finite_value,
  ragged_rows,
  parse_error,
  dimension_mismatch,
  row_count_mismatch,
  too_large,
  perplexity_bound,
  bad_config,
  non_finite_update,
  io_error,
  usage,
};

/// All library failures surface as this. detail_a/detail_b carry the
/// location when one makes sense: (row, col) for data errors, (line, col)
/// for parse errors, (iteration, -1) for optimizer blow-ups.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg, long detail_a = -1, long detail_b = -1)
      : std::runtime_error(msg), kind(kind), detail_a(detail_a), detail_b(detail_b) {}

  ErrorKind kind;
  long detail_a;
  long detail_b;
};

/// Process exit code for an error category. Usage problems exit 1,
/// bad input data exits 2, numerical failures during optimization exit 3.
int exit_code_for(ErrorKind kind);

struct Dataset {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> points;       // n*m, row-major
  std::vector<std::string> labels;  // empty, or one label per point

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(points.data() + i * m, m);
  }
};

struct Embedding {
  std::size_t n = 0;
  std::vector<double> coords;  // n*2, row-major

  static Embedding zeros(std::size_t n) {
    Embedding e;
    e.n = n;
    e.coords.assign(n * 2, 0.0);
    return e;
  }

  double* row(std::size_t i) { return coords.data() + i * 2; }
  const double* row(std::size_t i) const { return coords.data() + i * 2; }
};

/// Fixed enumeration order of the six pairs within a quartet:
/// (0,1) (0,2) (0,3) (1,2) (1,3) (2,3). Everything quartet-shaped
/// (distances, relative distances, per-pair stress terms) uses this order.
inline constexpr std::array<std::array<int, 2>, 6> kQuartetPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Scratch for one quartet: member indices, raw and relative distances in
/// both spaces. Relative distances are each pair's distance divided by the
/// sum of all six, so each rel array sums to 1.
struct QuartetWorkspace {
  std::array<std::uint32_t, 4> idx{};
  std::array<double, 6> hd{};
  std::array<double, 6> hd_rel{};
  std::array<double, 6> ld{};
  std::array<double, 6> ld_rel{};
  double hd_sum = 0.0;
  double ld_sum = 0.0;
};

/// Learning rate schedule eta(t) = eta0 * b / (a*t + b). At t=0 this is
/// exactly eta0; a=0 keeps it constant.
struct LrSchedule {
  double eta0 = 0.05;
  double a = 0.0;
  double b = 1.0;
};

struct OptimizerState {
  std::vector<double> velocity;  // n*2, row-major, same layout as Embedding
  std::size_t t = 0;
  std::size_t max_iters = 1;
  LrSchedule schedule;
  double gamma = 0.9;
};

/// Validates the hyperparameters and returns a zero-velocity state.
OptimizerState make_optimizer_state(std::size_t n, std::size_t max_iters,
                                    LrSchedule schedule, double gamma);

enum class Method { squad_mds, tsne, hybrid, smacof, pca };

const char* method_name(Method m);
bool parse_method(const std::string& name, Method& out);

/// User-facing run settings shared by every embedding method. Values left
/// at their sentinel (0 iterations, negative learning rates, empty
/// perplexity list) resolve to per-method defaults in resolve_run_config.
///
/// lr_mds is method-dependent: for squad-mds it multiplies the span of the
/// initial embedding (default 0.05), for hybrid it is the absolute initial
/// learning rate of the MDS arm (default 0.5). lr_tsne is always absolute
/// (default 1.0).
struct RunConfig {
  Method method = Method::squad_mds;
  std::uint64_t seed = 1;
  std::size_t iterations = 0;
  int workers = 1;
  double lr_mds = -1.0;
  double lr_tsne = -1.0;
  double gamma = 0.9;
  std::vector<double> perplexities;
  bool sparse_similarities = false;
  bool init_random = false;
  double exaggeration = 1.0;
  std::size_t exaggeration_iters = 0;
  std::size_t telemetry_every = 0;
  double smacof_rel_threshold = 1e-4;
  std::size_t smacof_max_iters = 300;
};

/// Fills in method defaults and checks invariants against the dataset size.
/// Throws Error(bad_config) or Error(perplexity_bound).
RunConfig resolve_run_config(const RunConfig& cfg, std::size_t n);

/// Checks shape and content of a raw matrix and assembles a Dataset.
/// labels may be empty or have exactly n entries. Throws Error on an empty
/// matrix, fewer than two points, a non-finite entry (row/col reported), or
/// a label count mismatch. Validating the points of an already validated
/// Dataset is a no-op that returns an equal Dataset.
Dataset validate_dataset(std::vector<double> points, std::size_t n, std::size_t m,
                         std::vector<std::string> labels = {});

}  // namespace squadmds
