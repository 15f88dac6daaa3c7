#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "squadmds/commands.hpp"
#include "squadmds/io.hpp"
#include "support/testutil.hpp"

using namespace squadmds;

namespace {

struct TempDir {
  std::string base;
  explicit TempDir(const std::string& name) : base("/tmp/squadmds_cmd_" + name) {
    std::error_code ec;
    std::filesystem::remove_all(base, ec);
    REQUIRE(std::filesystem::create_directories(base));
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(base, ec);
  }
  std::string operator/(const std::string& leaf) const { return base + "/" + leaf; }
};

void write_csv(const std::string& path, const Dataset& d) {
  std::ofstream out(path);
  for (std::size_t i = 0; i < d.n; ++i) {
    for (std::size_t j = 0; j < d.m; ++j) {
      if (j) out << ",";
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", d.points[i * d.m + j]);
      out << buf;
    }
    out << "\n";
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("embed writes an embedding plus a faithful manifest") {
  TempDir dir("embed");
  Dataset d = testutil::two_blobs(40, 4, 6.0, 801);
  write_csv(dir / "in.csv", d);

  EmbedArgs args;
  args.input = dir / "in.csv";
  args.output = dir / "out.csv";
  args.run.method = Method::squad_mds;
  args.run.iterations = 200;
  args.run.seed = 7;

  std::ostringstream out, err;
  REQUIRE(embed_command(args, out, err) == 0);
  CHECK(err.str().empty());
  CHECK(out.str().find("squad-mds") != std::string::npos);

  Embedding emb = load_embedding(dir / "out.csv");
  CHECK(emb.n == 40);

  RunManifest m = load_manifest(dir / "out.csv.manifest");
  CHECK(m.method == "squad-mds");
  CHECK(m.n == 40);
  CHECK(m.seed == 7);
  CHECK(m.iterations == 200);
  CHECK(m.init == "pca");
  CHECK(m.input_fingerprint == file_fingerprint(dir / "in.csv"));
  CHECK(m.time_run >= 0.0);
}

TEST_CASE("replay from the manifest reproduces the bytes") {
  TempDir dir("replay");
  Dataset d = testutil::two_blobs(36, 4, 5.0, 802);
  write_csv(dir / "in.csv", d);

  for (Method method : {Method::squad_mds, Method::smacof, Method::tsne,
                        Method::hybrid, Method::pca}) {
    EmbedArgs args;
    args.input = dir / "in.csv";
    args.output = dir / "out.csv";
    args.run.method = method;
    args.run.iterations = 60;
    args.run.seed = 3;
    args.run.perplexities = {4.0, 8.0};

    std::ostringstream out, err;
    REQUIRE(embed_command(args, out, err) == 0);
    const std::string first = slurp(dir / "out.csv");

    EmbedArgs replay;
    replay.replay_manifest = dir / "out.csv.manifest";
    replay.output = dir / "replayed.csv";
    std::ostringstream rout, rerr;
    REQUIRE(embed_command(replay, rout, rerr) == 0);
    CHECK(rerr.str().empty());
    CHECK(slurp(dir / "replayed.csv") == first);
  }
}

TEST_CASE("replay warns when the input fingerprint changed") {
  TempDir dir("fingerprint");
  Dataset d = testutil::two_blobs(24, 3, 5.0, 803);
  write_csv(dir / "in.csv", d);

  EmbedArgs args;
  args.input = dir / "in.csv";
  args.output = dir / "out.csv";
  args.run.method = Method::pca;
  std::ostringstream out, err;
  REQUIRE(embed_command(args, out, err) == 0);

  std::ofstream(dir / "in.csv", std::ios::app) << "1,2,3\n";

  EmbedArgs replay;
  replay.replay_manifest = dir / "out.csv.manifest";
  replay.output = dir / "replayed.csv";
  std::ostringstream rout, rerr;
  REQUIRE(embed_command(replay, rout, rerr) == 0);
  CHECK(rerr.str().find("fingerprint") != std::string::npos);
  Embedding emb = load_embedding(dir / "replayed.csv");
  CHECK(emb.n == 25);
}

TEST_CASE("the telemetry flag streams progress without changing results") {
  TempDir dir("telemetry");
  Dataset d = testutil::two_blobs(30, 3, 5.0, 804);
  write_csv(dir / "in.csv", d);

  EmbedArgs args;
  args.input = dir / "in.csv";
  args.output = dir / "a.csv";
  args.run.method = Method::squad_mds;
  args.run.iterations = 100;
  std::ostringstream out1, err1;
  REQUIRE(embed_command(args, out1, err1) == 0);

  args.output = dir / "b.csv";
  args.telemetry = true;
  std::ostringstream out2, err2;
  REQUIRE(embed_command(args, out2, err2) == 0);
  CHECK(err2.str().find("iter:") != std::string::npos);
  CHECK(err2.str().find("stress:") != std::string::npos);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("embed failures map to the documented exit codes") {
  std::ostringstream out, err;

  EmbedArgs missing;
  missing.input = "/tmp/squadmds_cmd_no_such_file.csv";
  missing.output = "/tmp/squadmds_cmd_never_written.csv";
  CHECK(embed_command(missing, out, err) == 2);
  CHECK(err.str().find("error:") != std::string::npos);

  EmbedArgs noout;
  noout.input = "whatever.csv";
  CHECK(embed_command(noout, out, err) == 1);

  TempDir dir("badrun");
  Dataset d = testutil::two_blobs(20, 3, 5.0, 805);
  write_csv(dir / "in.csv", d);
  EmbedArgs bad;
  bad.input = dir / "in.csv";
  bad.output = dir / "out.csv";
  bad.run.method = Method::tsne;
  bad.run.perplexities = {50.0};  // needs n-1 > 2*50
  CHECK(embed_command(bad, out, err) == 2);
}

TEST_CASE("quality reports the auc and writes the curve file") {
  TempDir dir("quality");
  Dataset d = testutil::random_dataset(30, 2, 806);
  write_csv(dir / "hd.csv", d);
  Embedding e = Embedding::zeros(30);
  e.coords = d.points;  // 2-D data used as its own perfect embedding
  save_embedding(dir / "ld.csv", e);

  QualityArgs args;
  args.original = dir / "hd.csv";
  args.embedding = dir / "ld.csv";
  args.output = dir / "curve.csv";
  std::ostringstream out, err;
  REQUIRE(quality_command(args, out, err) == 0);
  CHECK(out.str().find("auc: 1") != std::string::npos);
  CHECK(slurp(dir / "curve.csv").find("# auc:") != std::string::npos);

  // Row mismatch is a data error.
  Embedding short_e = Embedding::zeros(29);
  save_embedding(dir / "short.csv", short_e);
  args.embedding = dir / "short.csv";
  args.output.clear();
  std::ostringstream out2, err2;
  CHECK(quality_command(args, out2, err2) == 2);
}

TEST_CASE("bench prints a timing per size and a slope for several") {
  BenchArgs args;
  args.method = "smacof";
  args.sizes = {60, 120};
  args.iterations = 3;
  std::ostringstream out, err;
  REQUIRE(bench_command(args, out, err) == 0);
  const std::string text = out.str();
  CHECK(text.find("n=60 seconds=") != std::string::npos);
  CHECK(text.find("n=120 seconds=") != std::string::npos);
  CHECK(text.find("slope:") != std::string::npos);

  BenchArgs single;
  single.method = "squad-mds";
  single.sizes = {80};
  single.iterations = 20;
  std::ostringstream out2, err2;
  REQUIRE(bench_command(single, out2, err2) == 0);
  CHECK(out2.str().find("slope:") == std::string::npos);

  BenchArgs bad;
  bad.method = "tsne";
  std::ostringstream out3, err3;
  CHECK(bench_command(bad, out3, err3) == 1);
}

TEST_CASE("plot renders an embedding file to svg") {
  TempDir dir("plot");
  Embedding e = testutil::random_embedding(20, 807);
  std::vector<std::string> labels(20, "x");
  for (std::size_t i = 0; i < 10; ++i) labels[i] = "y";
  save_embedding(dir / "emb.csv", e, labels);

  PlotArgs args;
  args.embedding = dir / "emb.csv";
  args.output = dir / "plot.svg";
  std::ostringstream out, err;
  REQUIRE(plot_command(args, out, err) == 0);
  const std::string svg = slurp(dir / "plot.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(out.str().find("20 points") != std::string::npos);

  PlotArgs missing;
  missing.embedding = dir / "nope.csv";
  missing.output = dir / "x.svg";
  std::ostringstream out2, err2;
  CHECK(plot_command(missing, out2, err2) == 2);
}
