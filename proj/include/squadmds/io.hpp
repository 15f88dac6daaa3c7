#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "squadmds/quality.hpp"
#include "squadmds/types.hpp"

namespace squadmds {

/// Options controlling how a text matrix is read. The delimiter is
/// auto-detected per file (first of comma, semicolon, tab, then runs of
/// spaces, whichever splits the first data line into the most fields)
/// unless forced. Lines that are blank or start with '#' are skipped.
struct LoadOptions {
  bool header = false;           // skip the first non-comment line
  int label_col = -1;            // extract this 0-based column as labels; -1 = none
  char delimiter = '\0';         // '\0' = auto-detect
  bool raw_f64 = false;          // binary mode, see below
};

/// Loads a matrix as a Dataset (validated). Text mode parses delimited
/// doubles, reporting Error(parse_error) with 1-based line and column and
/// Error(ragged_rows) with the offending line. Raw mode reads a 16-byte
/// header of n then m as little-endian uint64, followed by n*m
/// little-endian doubles, row-major.
Dataset load_matrix(const std::string& path, const LoadOptions& opts = {});

/// Writes an embedding as comma-delimited text, x,y with 17 significant
/// digits (and a third label column when labels are present), one row per
/// point. The format round-trips bit-exactly through load_matrix.
void save_embedding(const std::string& path, const Embedding& emb,
                    const std::vector<std::string>& labels = {});

/// Reads a two-column embedding back (labels, if any, go to the out-param).
Embedding load_embedding(const std::string& path,
                         std::vector<std::string>* labels = nullptr);

/// Writes a matrix in the raw-f64 format described above.
void save_matrix_raw(const std::string& path, const std::vector<double>& points,
                     std::uint64_t n, std::uint64_t m);

/// FNV-1a 64-bit hash of a file's bytes, as 16 lowercase hex digits.
/// Cheap content fingerprint for the run manifest.
std::string file_fingerprint(const std::string& path);

/// Everything needed to reproduce an embed run, serialized as one
/// "key: value" line per field in fixed order. Values are fully resolved
/// (no defaults left implicit), so a replay is immune to future default
/// changes.
struct RunManifest {
  std::string version;
  std::string method;
  std::string input_path;
  std::string input_fingerprint;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 1;
  std::size_t iterations = 0;
  int workers = 1;
  double lr_mds = 0.0;
  double lr_tsne = 0.0;
  double gamma = 0.0;
  std::vector<double> perplexities;
  bool sparse_similarities = false;
  std::string init = "pca";  // "pca" or "random"
  bool header = false;
  int label_col = -1;
  std::string delimiter;  // "auto", "comma", "semicolon", "tab", "space"
  bool raw_f64 = false;
  std::string output_path;
  // Wall-clock seconds per phase; informational, ignored on replay.
  double time_load = 0.0;
  double time_run = 0.0;
  double time_save = 0.0;

  std::string serialize() const;
  static RunManifest parse(const std::string& text);
};

void save_manifest(const std::string& path, const RunManifest& m);
RunManifest load_manifest(const std::string& path);

/// Delimiter <-> manifest name mapping ('\0' <-> "auto").
const char* io_delimiter_name(char d);
char io_delimiter_from_name(const std::string& name);

/// Writes K,q_nx,r_nx rows for K = 1..n-2 followed by a trailing
/// "# auc: <value>" summary line.
void save_quality_curve(const std::string& path, const QualityCurve& q);

}  // namespace squadmds
