#include "squadmds/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace squadmds {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::io_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw Error(ErrorKind::io_error, "read failed on " + path);
  return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::io_error, "cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out)
    throw Error(ErrorKind::io_error, "write failed on " + path);
}

std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

double get_f64_le(const unsigned char* p) {
  return std::bit_cast<double>(get_u64_le(p));
}

void put_f64_le(std::string& out, double v) {
  put_u64_le(out, std::bit_cast<std::uint64_t>(v));
}

struct TextLine {
  std::size_t number;  // 1-based position in the file
  std::string_view text;
};

// Physical lines minus comments and blanks, with original numbering kept
// for error messages.
std::vector<TextLine> data_lines(std::string_view content) {
  std::vector<TextLine> lines;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#')
      lines.push_back({lineno, line});
    if (end == content.size()) break;
    pos = end + 1;
  }
  return lines;
}

char detect_delimiter(std::string_view line) {
  std::size_t commas = 0, semis = 0, tabs = 0;
  for (char c : line) {
    if (c == ',') ++commas;
    else if (c == ';') ++semis;
    else if (c == '\t') ++tabs;
  }
  if (commas >= semis && commas >= tabs && commas > 0) return ',';
  if (semis >= tabs && semis > 0) return ';';
  if (tabs > 0) return '\t';
  return ' ';  // whitespace runs
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  if (delim == ' ') {
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      fields.push_back(line.substr(pos, end - pos));
      pos = end;
    }
    return fields;
  }
  std::size_t pos = 0;
  for (;;) {
    std::size_t end = line.find(delim, pos);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
}

double parse_double(std::string_view field, std::size_t lineno, std::size_t col) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw Error(ErrorKind::parse_error,
                "cannot parse '" + std::string(field) + "' as a number at line " +
                    std::to_string(lineno) + ", column " + std::to_string(col),
                static_cast<long>(lineno), static_cast<long>(col));
  return v;
}

Dataset load_matrix_raw(const std::string& path) {
  std::string bytes = read_file(path);
  if (bytes.size() < 16)
    throw Error(ErrorKind::parse_error, path + ": raw file shorter than its header");
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t n = get_u64_le(p);
  const std::uint64_t m = get_u64_le(p + 8);
  if (n == 0 || m == 0)
    throw Error(ErrorKind::empty_matrix, path + ": raw header declares an empty matrix");
  if (n > (std::uint64_t{1} << 32) || m > (std::uint64_t{1} << 24))
    throw Error(ErrorKind::too_large, path + ": raw header dimensions implausible");
  const std::uint64_t expect = 16 + n * m * 8;
  if (bytes.size() != expect)
    throw Error(ErrorKind::parse_error,
                path + ": raw payload holds " + std::to_string(bytes.size()) +
                    " bytes, header implies " + std::to_string(expect));
  std::vector<double> pts(n * m);
  for (std::size_t e = 0; e < pts.size(); ++e) pts[e] = get_f64_le(p + 16 + e * 8);
  return validate_dataset(std::move(pts), n, m);
}

const char* delimiter_name(char d) {
  switch (d) {
    case ',': return "comma";
    case ';': return "semicolon";
    case '\t': return "tab";
    case ' ': return "space";
  }
  return "auto";
}

char delimiter_from_name(const std::string& name) {
  if (name == "comma") return ',';
  if (name == "semicolon") return ';';
  if (name == "tab") return '\t';
  if (name == "space") return ' ';
  if (name == "auto") return '\0';
  throw Error(ErrorKind::parse_error, "unknown delimiter name: " + name);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset load_matrix(const std::string& path, const LoadOptions& opts) {
  if (opts.raw_f64) return load_matrix_raw(path);

  std::string content = read_file(path);
  std::vector<TextLine> lines = data_lines(content);
  std::size_t start = 0;
  if (opts.header && !lines.empty()) start = 1;
  if (lines.size() <= start)
    throw Error(ErrorKind::empty_matrix, path + ": no data rows");

  const char delim = opts.delimiter != '\0' ? opts.delimiter
                                            : detect_delimiter(lines[start].text);
  std::size_t ncols = 0;
  std::vector<double> pts;
  std::vector<std::string> labels;
  const bool want_labels = opts.label_col >= 0;

  for (std::size_t li = start; li < lines.size(); ++li) {
    std::vector<std::string_view> fields = split_fields(lines[li].text, delim);
    if (li == start) {
      ncols = fields.size();
      if (want_labels && static_cast<std::size_t>(opts.label_col) >= ncols)
        throw Error(ErrorKind::bad_config,
                    "label column " + std::to_string(opts.label_col) +
                        " out of range for " + std::to_string(ncols) + " columns");
      if (ncols - (want_labels ? 1 : 0) == 0)
        throw Error(ErrorKind::empty_matrix, path + ": rows have no feature columns");
      pts.reserve((lines.size() - start) * (ncols - (want_labels ? 1 : 0)));
    } else if (fields.size() != ncols) {
      throw Error(ErrorKind::ragged_rows,
                  path + ": line " + std::to_string(lines[li].number) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(ncols),
                  static_cast<long>(lines[li].number));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (want_labels && c == static_cast<std::size_t>(opts.label_col)) {
        labels.emplace_back(fields[c]);
        continue;
      }
      pts.push_back(parse_double(fields[c], lines[li].number, c + 1));
    }
  }
  const std::size_t m = ncols - (want_labels ? 1 : 0);
  const std::size_t n = pts.size() / m;
  return validate_dataset(std::move(pts), n, m, std::move(labels));
}

void save_embedding(const std::string& path, const Embedding& emb,
                    const std::vector<std::string>& labels) {
  std::string out;
  out.reserve(emb.n * 48);
  for (std::size_t i = 0; i < emb.n; ++i) {
    out += fmt17(emb.coords[i * 2]);
    out += ',';
    out += fmt17(emb.coords[i * 2 + 1]);
    if (!labels.empty()) {
      out += ',';
      out += labels[i];
    }
    out += '\n';
  }
  write_file(path, out);
}

Embedding load_embedding(const std::string& path, std::vector<std::string>* labels) {
  std::string content = read_file(path);
  std::vector<TextLine> lines = data_lines(content);
  if (lines.empty())
    throw Error(ErrorKind::empty_matrix, path + ": no data rows");
  const char delim = detect_delimiter(lines[0].text);

  Embedding e;
  std::vector<std::string> labs;
  std::size_t ncols = 0;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::vector<std::string_view> fields = split_fields(lines[li].text, delim);
    if (li == 0) {
      ncols = fields.size();
      if (ncols != 2 && ncols != 3)
        throw Error(ErrorKind::ragged_rows,
                    path + ": an embedding row needs 2 or 3 columns, got " +
                        std::to_string(ncols),
                    static_cast<long>(lines[li].number));
    } else if (fields.size() != ncols) {
      throw Error(ErrorKind::ragged_rows,
                  path + ": line " + std::to_string(lines[li].number) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(ncols),
                  static_cast<long>(lines[li].number));
    }
    e.coords.push_back(parse_double(fields[0], lines[li].number, 1));
    e.coords.push_back(parse_double(fields[1], lines[li].number, 2));
    if (ncols == 3) labs.emplace_back(fields[2]);
  }
  e.n = e.coords.size() / 2;
  if (labels) *labels = std::move(labs);
  return e;
}

void save_matrix_raw(const std::string& path, const std::vector<double>& points,
                     std::uint64_t n, std::uint64_t m) {
  if (points.size() != n * m)
    throw Error(ErrorKind::dimension_mismatch, "raw save size mismatch");
  std::string out;
  out.reserve(16 + points.size() * 8);
  put_u64_le(out, n);
  put_u64_le(out, m);
  for (double v : points) put_f64_le(out, v);
  write_file(path, out);
}

std::string file_fingerprint(const std::string& path) {
  std::string bytes = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunManifest::serialize() const {
  std::ostringstream out;
  out << "version: " << version << "\n";
  out << "method: " << method << "\n";
  out << "input: " << input_path << "\n";
  out << "input_fingerprint: " << input_fingerprint << "\n";
  out << "n: " << n << "\n";
  out << "m: " << m << "\n";
  out << "seed: " << seed << "\n";
  out << "iterations: " << iterations << "\n";
  out << "workers: " << workers << "\n";
  out << "lr_mds: " << fmt17(lr_mds) << "\n";
  out << "lr_tsne: " << fmt17(lr_tsne) << "\n";
  out << "gamma: " << fmt17(gamma) << "\n";
  out << "perplexities: ";
  for (std::size_t i = 0; i < perplexities.size(); ++i)
    out << (i ? "," : "") << fmt17(perplexities[i]);
  out << "\n";
  out << "sparse: " << (sparse_similarities ? 1 : 0) << "\n";
  out << "init: " << init << "\n";
  out << "header: " << (header ? 1 : 0) << "\n";
  out << "label_col: " << label_col << "\n";
  out << "delimiter: " << delimiter << "\n";
  out << "raw_f64: " << (raw_f64 ? 1 : 0) << "\n";
  out << "output: " << output_path << "\n";
  out << "time_load: " << fmt17(time_load) << "\n";
  out << "time_run: " << fmt17(time_run) << "\n";
  out << "time_save: " << fmt17(time_save) << "\n";
  return std::move(out).str();
}

RunManifest RunManifest::parse(const std::string& text) {
  RunManifest m;
  std::vector<TextLine> lines = data_lines(text);
  for (const TextLine& line : lines) {
    std::size_t sep = line.text.find(": ");
    if (sep == std::string_view::npos)
      throw Error(ErrorKind::parse_error,
                  "manifest line " + std::to_string(line.number) +
                      " is not 'key: value'",
                  static_cast<long>(line.number));
    std::string key(line.text.substr(0, sep));
    std::string value(line.text.substr(sep + 2));

    auto as_u64 = [&](const std::string& v) {
      std::uint64_t x = 0;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc{} || ptr != v.data() + v.size())
        throw Error(ErrorKind::parse_error,
                    "bad integer '" + v + "' for manifest key " + key,
                    static_cast<long>(line.number));
      return x;
    };
    auto as_f64 = [&](const std::string& v) {
      return parse_double(v, line.number, 1);
    };

    if (key == "version") m.version = value;
    else if (key == "method") m.method = value;
    else if (key == "input") m.input_path = value;
    else if (key == "input_fingerprint") m.input_fingerprint = value;
    else if (key == "n") m.n = as_u64(value);
    else if (key == "m") m.m = as_u64(value);
    else if (key == "seed") m.seed = as_u64(value);
    else if (key == "iterations") m.iterations = as_u64(value);
    else if (key == "workers") m.workers = static_cast<int>(as_u64(value));
    else if (key == "lr_mds") m.lr_mds = as_f64(value);
    else if (key == "lr_tsne") m.lr_tsne = as_f64(value);
    else if (key == "gamma") m.gamma = as_f64(value);
    else if (key == "perplexities") {
      m.perplexities.clear();
      std::size_t pos = 0;
      while (pos <= value.size() && !value.empty()) {
        std::size_t end = value.find(',', pos);
        if (end == std::string::npos) end = value.size();
        m.perplexities.push_back(
            parse_double(std::string_view(value).substr(pos, end - pos),
                         line.number, 1));
        if (end == value.size()) break;
        pos = end + 1;
      }
    } else if (key == "sparse") m.sparse_similarities = as_u64(value) != 0;
    else if (key == "init") {
      if (value != "pca" && value != "random")
        throw Error(ErrorKind::parse_error,
                    "manifest init must be pca or random, got '" + value + "'",
                    static_cast<long>(line.number));
      m.init = value;
    } else if (key == "header") m.header = as_u64(value) != 0;
    else if (key == "label_col") {
      if (!value.empty() && value[0] == '-') m.label_col = -1;
      else m.label_col = static_cast<int>(as_u64(value));
    } else if (key == "delimiter") m.delimiter = value;
    else if (key == "raw_f64") m.raw_f64 = as_u64(value) != 0;
    else if (key == "output") m.output_path = value;
    else if (key == "time_load") m.time_load = as_f64(value);
    else if (key == "time_run") m.time_run = as_f64(value);
    else if (key == "time_save") m.time_save = as_f64(value);
    else
      throw Error(ErrorKind::parse_error,
                  "unknown manifest key '" + key + "'",
                  static_cast<long>(line.number));
  }
  if (m.method.empty() || m.input_path.empty())
    throw Error(ErrorKind::parse_error, "manifest is missing method or input");
  return m;
}

void save_manifest(const std::string& path, const RunManifest& m) {
  write_file(path, m.serialize());
}

RunManifest load_manifest(const std::string& path) {
  return RunManifest::parse(read_file(path));
}

void save_quality_curve(const std::string& path, const QualityCurve& q) {
  std::string out;
  out.reserve(q.k_values.size() * 48);
  for (std::size_t i = 0; i < q.k_values.size(); ++i) {
    out += std::to_string(q.k_values[i]);
    out += ',';
    out += fmt17(q.q_nx[i]);
    out += ',';
    out += fmt17(q.r_nx[i]);
    out += '\n';
  }
  out += "# auc: ";
  out += fmt17(q.auc);
  out += '\n';
  write_file(path, out);
}

// Helpers shared with the CLI layer.
const char* io_delimiter_name(char d) { return delimiter_name(d); }
char io_delimiter_from_name(const std::string& name) { return delimiter_from_name(name); }

}  // namespace squadmds
