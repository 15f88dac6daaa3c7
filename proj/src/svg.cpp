#include "squadmds/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace squadmds {

namespace {

constexpr const char* kCategoricalPalette[10] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Coarse sequential map (dark violet to yellow), linearly interpolated.
constexpr int kSeqStops[9][3] = {
    {68, 1, 84},    {71, 45, 123},  {59, 82, 139},  {44, 114, 142},
    {33, 145, 140}, {40, 174, 128}, {94, 201, 98},  {173, 220, 48},
    {253, 231, 37}};

std::string sequential_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  double pos = t * 8.0;
  int lo = std::min(static_cast<int>(pos), 7);
  double frac = pos - lo;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(kSeqStops[lo][0] +
                                             frac * (kSeqStops[lo + 1][0] - kSeqStops[lo][0]))),
                static_cast<int>(std::lround(kSeqStops[lo][1] +
                                             frac * (kSeqStops[lo + 1][1] - kSeqStops[lo][1]))),
                static_cast<int>(std::lround(kSeqStops[lo][2] +
                                             frac * (kSeqStops[lo + 1][2] - kSeqStops[lo][2]))));
  return buf;
}

bool parse_scalar(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

std::string plot_svg(const Embedding& emb, const std::vector<std::string>& labels,
                     int size_px) {
  const std::size_t n = emb.n;
  if (!labels.empty() && labels.size() != n)
    throw Error(ErrorKind::row_count_mismatch,
                "label count does not match the embedding");

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  if (n > 0) {
    xmin = xmax = emb.coords[0];
    ymin = ymax = emb.coords[1];
    for (std::size_t i = 1; i < n; ++i) {
      xmin = std::min(xmin, emb.coords[i * 2]);
      xmax = std::max(xmax, emb.coords[i * 2]);
      ymin = std::min(ymin, emb.coords[i * 2 + 1]);
      ymax = std::max(ymax, emb.coords[i * 2 + 1]);
    }
  }
  double xspan = xmax - xmin, yspan = ymax - ymin;
  if (xspan <= 0.0) xspan = 1.0;
  if (yspan <= 0.0) yspan = 1.0;
  const double margin = 0.05 * size_px;
  const double scale = (size_px - 2.0 * margin) / std::max(xspan, yspan);

  // Color assignment: scalar colormap when every label is numeric,
  // categorical palette otherwise (categories in sorted label order, so the
  // mapping never depends on row order).
  std::vector<std::string> colors;
  if (!labels.empty()) {
    std::vector<double> values(n);
    bool all_scalar = true;
    for (std::size_t i = 0; i < n && all_scalar; ++i)
      all_scalar = parse_scalar(labels[i], values[i]);
    colors.resize(n);
    if (all_scalar) {
      double lo = values[0], hi = values[0];
      for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double range = hi > lo ? hi - lo : 1.0;
      for (std::size_t i = 0; i < n; ++i)
        colors[i] = sequential_color((values[i] - lo) / range);
    } else {
      std::map<std::string, std::size_t> order;
      for (const std::string& l : labels) order.emplace(l, 0);
      std::size_t next = 0;
      for (auto& [key, idx] : order) idx = next++;
      for (std::size_t i = 0; i < n; ++i)
        colors[i] = kCategoricalPalette[order[labels[i]] % 10];
    }
  }

  // Very large plots drop to smaller markers and one fewer decimal, which
  // keeps the file size roughly linear with a small constant.
  const bool big = n > 20000;
  const char* radius = big ? "1" : "2.5";

  std::string out;
  out.reserve(128 + n * 64);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                size_px, size_px, size_px, size_px);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<rect width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n", size_px,
                size_px);
  out += buf;

  for (std::size_t i = 0; i < n; ++i) {
    const double cx = margin + (emb.coords[i * 2] - xmin) * scale;
    // SVG y grows downward; flip so the plot reads like a standard chart.
    const double cy = size_px - margin - (emb.coords[i * 2 + 1] - ymin) * scale;
    const char* fill = colors.empty() ? kCategoricalPalette[0] : colors[i].c_str();
    if (big)
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"%s\" fill=\"%s\"/>\n", cx,
                    cy, radius, fill);
    else
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%s\" fill=\"%s\"/>\n", cx,
                    cy, radius, fill);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

void save_svg(const std::string& path, const std::string& svg_text) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Error(ErrorKind::io_error, "cannot open " + path + " for writing");
  std::fwrite(svg_text.data(), 1, svg_text.size(), f);
  if (std::fclose(f) != 0)
    throw Error(ErrorKind::io_error, "write failed on " + path);
}

}  // namespace squadmds
