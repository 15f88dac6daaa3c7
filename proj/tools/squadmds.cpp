#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "squadmds/commands.hpp"
#include "squadmds/version.hpp"

namespace {

int default_workers() {
  if (const char* env = std::getenv("SQUADMDS_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

void add_load_options(CLI::App* cmd, squadmds::LoadOptions& load,
                      std::string& delim_name) {
  cmd->add_flag("--header", load.header, "Skip the first non-comment line");
  cmd->add_option("--label-col", load.label_col,
                  "0-based column to read as point labels");
  cmd->add_option("--delimiter", delim_name,
                  "Field delimiter: comma, semicolon, tab or space (default: auto)")
      ->check(CLI::IsMember({"auto", "comma", "semicolon", "tab", "space"}));
  cmd->add_flag("--raw-f64", load.raw_f64,
                "Input is raw little-endian float64 with an n,m uint64 header");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic quartet MDS embeddings, hybrids and quality metrics"};
  app.set_version_flag("--version",
                       std::string(squadmds::kToolName) + " " + squadmds::kVersion);
  app.require_subcommand(1);

  // embed
  squadmds::EmbedArgs embed;
  embed.run.workers = default_workers();
  std::string embed_method = "squad-mds";
  std::string embed_delim = "auto";
  long long embed_seed = 1;
  CLI::App* cmd_embed = app.add_subcommand("embed", "Embed a dataset into 2-D");
  cmd_embed->add_option("input", embed.input, "Input matrix file");
  cmd_embed->add_option("-o,--output", embed.output, "Output embedding file");
  cmd_embed->add_option("--method", embed_method,
                        "squad-mds, tsne, hybrid, smacof or pca")
      ->check(CLI::IsMember({"squad-mds", "tsne", "hybrid", "smacof", "pca"}));
  cmd_embed->add_option("--seed", embed_seed, "Random seed");
  cmd_embed->add_option("--iters", embed.run.iterations,
                        "Iteration count (default: per method)");
  cmd_embed->add_option("--workers", embed.run.workers,
                        "Worker threads (default: SQUADMDS_WORKERS or 1)");
  cmd_embed->add_option("--lr-mds", embed.run.lr_mds,
                        "MDS arm rate: span multiplier for squad-mds, absolute "
                        "for hybrid");
  cmd_embed->add_option("--lr-tsne", embed.run.lr_tsne,
                        "t-SNE arm learning rate (absolute)");
  cmd_embed->add_option("--gamma", embed.run.gamma, "Nesterov momentum");
  std::string embed_init = "pca";
  cmd_embed->add_option("--init", embed_init,
                        "Starting layout: pca or random (default: pca)")
      ->check(CLI::IsMember({"pca", "random"}));
  cmd_embed->add_option("--perplexities", embed.run.perplexities,
                        "Comma-separated perplexity list (default: 4,50)")
      ->delimiter(',');
  cmd_embed->add_flag("--sparse", embed.run.sparse_similarities,
                      "kNN-sparse similarities (k = 3 x max perplexity)");
  cmd_embed->add_option("--exaggeration", embed.run.exaggeration,
                        "Attractive-term factor during the first "
                        "--exaggeration-iters iterations");
  cmd_embed->add_option("--exaggeration-iters", embed.run.exaggeration_iters,
                        "Iterations the exaggeration factor applies for");
  cmd_embed->add_flag("--telemetry", embed.telemetry,
                      "Progress diagnostics on stderr");
  cmd_embed->add_option("--telemetry-every", embed.run.telemetry_every,
                        "Diagnostic cadence in iterations");
  cmd_embed->add_option("--manifest", embed.manifest_out,
                        "Manifest path (default: <output>.manifest)");
  cmd_embed->add_option("--replay", embed.replay_manifest,
                        "Re-run the exact configuration saved in a manifest");
  add_load_options(cmd_embed, embed.load, embed_delim);

  // quality
  squadmds::QualityArgs quality;
  quality.workers = default_workers();
  std::string quality_delim = "auto";
  CLI::App* cmd_quality =
      app.add_subcommand("quality", "Neighborhood preservation of an embedding");
  cmd_quality->add_option("--hd", quality.original, "Original data matrix")
      ->required();
  cmd_quality->add_option("--ld", quality.embedding, "Embedding file")
      ->required();
  cmd_quality->add_option("-o,--output", quality.output,
                          "Write the K,Q_NX,R_NX curve here");
  cmd_quality->add_option("--workers", quality.workers, "Worker threads");
  add_load_options(cmd_quality, quality.load, quality_delim);

  // bench
  squadmds::BenchArgs bench;
  bench.workers = default_workers();
  long long bench_seed = 1;
  CLI::App* cmd_bench =
      app.add_subcommand("bench", "Time a method across dataset sizes");
  cmd_bench->add_option("--method", bench.method, "squad-mds or smacof")
      ->check(CLI::IsMember({"squad-mds", "smacof"}));
  cmd_bench->add_option("--dataset", bench.dataset,
                        "blobs, hierarchical, swiss-roll, hypercube, anisotropic");
  cmd_bench->add_option("--sizes", bench.sizes, "Dataset sizes to time")
      ->delimiter(',');
  cmd_bench->add_option("--iters", bench.iterations,
                        "Iterations per run (default: 1000 squad-mds, 30 smacof)");
  cmd_bench->add_option("--seed", bench_seed, "Random seed");
  cmd_bench->add_option("--workers", bench.workers, "Worker threads");
  cmd_bench->add_option("-o,--output", bench.output, "Write the n,seconds table here");

  // plot
  squadmds::PlotArgs plot;
  CLI::App* cmd_plot = app.add_subcommand("plot", "Render an embedding as SVG");
  cmd_plot->add_option("embedding", plot.embedding, "Embedding file")->required();
  cmd_plot->add_option("-o,--output", plot.output, "Output SVG path")->required();
  cmd_plot->add_option("--size", plot.size_px, "Canvas size in pixels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (cmd_embed->parsed()) {
    if (!squadmds::parse_method(embed_method, embed.run.method)) {
      std::cerr << "error: unknown method " << embed_method << "\n";
      return 1;
    }
    embed.run.seed = static_cast<std::uint64_t>(embed_seed);
    embed.run.init_random = embed_init == "random";
    embed.load.delimiter = squadmds::io_delimiter_from_name(embed_delim);
    return squadmds::embed_command(embed, std::cout, std::cerr);
  }
  if (cmd_quality->parsed()) {
    quality.load.delimiter = squadmds::io_delimiter_from_name(quality_delim);
    return squadmds::quality_command(quality, std::cout, std::cerr);
  }
  if (cmd_bench->parsed()) {
    bench.seed = static_cast<std::uint64_t>(bench_seed);
    return squadmds::bench_command(bench, std::cout, std::cerr);
  }
  if (cmd_plot->parsed()) {
    return squadmds::plot_command(plot, std::cout, std::cerr);
  }
  return 1;
}
