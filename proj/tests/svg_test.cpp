#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "squadmds/svg.hpp"
#include "support/testutil.hpp"

using namespace squadmds;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("the plot is a well-formed svg with one marker per point") {
  Embedding e = testutil::random_embedding(25, 701, 4.0);
  std::string svg = plot_svg(e);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_occurrences(svg, "<circle") == 25);
}

TEST_CASE("identical inputs give identical bytes") {
  Embedding e = testutil::random_embedding(40, 702);
  std::vector<std::string> labels(40);
  for (std::size_t i = 0; i < 40; ++i) labels[i] = i % 2 ? "б" : "a";
  CHECK(plot_svg(e, labels) == plot_svg(e, labels));
  CHECK(plot_svg(e) == plot_svg(e));
}

TEST_CASE("categorical labels color by category") {
  Embedding e = testutil::random_embedding(30, 703);
  std::vector<std::string> labels(30);
  for (std::size_t i = 0; i < 30; ++i)
    labels[i] = i % 3 == 0 ? "ant" : (i % 3 == 1 ? "bee" : "cat");
  std::string svg = plot_svg(e, labels);

  // Three categories, three distinct fill colors, each used 10 times.
  std::size_t fills = count_occurrences(svg, "fill=\"");
  CHECK(fills >= 30);
  std::string uncolored = plot_svg(e);
  CHECK(svg != uncolored);
}

TEST_CASE("numeric labels use a sequential colormap") {
  Embedding e = testutil::random_embedding(20, 704);
  std::vector<std::string> numeric(20), categorical(20);
  for (std::size_t i = 0; i < 20; ++i) {
    numeric[i] = std::to_string(0.1 * static_cast<double>(i));
    categorical[i] = "c" + std::to_string(i);
  }
  CHECK(plot_svg(e, numeric) != plot_svg(e, categorical));
}

TEST_CASE("a degenerate single-point embedding still renders") {
  Embedding e = Embedding::zeros(1);
  std::string svg = plot_svg(e);
  CHECK(count_occurrences(svg, "<circle") == 1);
}

TEST_CASE("very large plots stay under the size cap") {
  Embedding e = testutil::random_embedding(60000, 705, 100.0);
  std::string svg = plot_svg(e);
  CHECK(count_occurrences(svg, "<circle") == 60000);
  CHECK(svg.size() < 50u * 1024u * 1024u);
}

TEST_CASE("save writes the exact text") {
  Embedding e = testutil::random_embedding(10, 706);
  std::string svg = plot_svg(e);
  const std::string path = "/tmp/squadmds_svg_test.svg";
  save_svg(path, svg);
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::remove(path.c_str());
  CHECK(buf.str() == svg);
}
