#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "squadmds/io.hpp"
#include "squadmds/types.hpp"

namespace squadmds {

/// Subcommand implementations behind the CLI. Each returns a process exit
/// code (0 on success) and reports problems on the error stream; main()
/// only parses arguments and dispatches. Kept separate so tests can drive
/// full runs without spawning processes.

struct EmbedArgs {
  std::string input;
  std::string output;
  std::string manifest_out;      // empty = alongside output with .manifest suffix
  std::string replay_manifest;   // run from a saved manifest instead of flags
  LoadOptions load;
  RunConfig run;
  bool telemetry = false;        // progress lines on err
};

int embed_command(const EmbedArgs& args, std::ostream& out, std::ostream& err);

struct QualityArgs {
  std::string original;
  std::string embedding;
  std::string output;  // curve file; empty = no file, summary only
  LoadOptions load;
  int workers = 1;
};

int quality_command(const QualityArgs& args, std::ostream& out, std::ostream& err);

struct BenchArgs {
  std::string method = "squad-mds";       // squad-mds | smacof
  std::string dataset = "blobs";
  std::vector<std::size_t> sizes;
  std::size_t iterations = 0;             // 0 = per-method bench default
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output;                      // table file; empty = only on out
};

int bench_command(const BenchArgs& args, std::ostream& out, std::ostream& err);

struct PlotArgs {
  std::string embedding;
  std::string output;
  int size_px = 1000;
};

int plot_command(const PlotArgs& args, std::ostream& out, std::ostream& err);

}  // namespace squadmds
