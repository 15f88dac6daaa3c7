#include "squadmds/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "squadmds/engine.hpp"
#include "squadmds/linalg.hpp"
#include "squadmds/smacof.hpp"
#include "squadmds/svg.hpp"
#include "squadmds/synthetic.hpp"
#include "squadmds/version.hpp"

namespace squadmds {

namespace {

std::string fmt(const char* f, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  return exit_code_for(e.kind);
}

Embedding run_any_method(const Dataset& data, const RunConfig& rc,
                         const TelemetrySink& sink) {
  switch (rc.method) {
    case Method::squad_mds:
      return run_squad_mds(data, rc, sink);
    case Method::tsne:
      return run_tsne(data, rc, sink);
    case Method::hybrid:
      return run_hybrid(data, rc, sink);
    case Method::smacof:
      return run_smacof(data, rc).embedding;
    case Method::pca: {
      RngStream rng(rc.seed);
      return initial_embedding(data, rng);
    }
  }
  throw Error(ErrorKind::bad_config, "unhandled method");
}

}  // namespace

int embed_command(const EmbedArgs& args_in, std::ostream& out, std::ostream& err) {
  try {
    EmbedArgs args = args_in;

    if (!args.replay_manifest.empty()) {
      RunManifest m = load_manifest(args.replay_manifest);
      args.input = m.input_path;
      if (args.output.empty()) args.output = m.output_path;
      args.load.header = m.header;
      args.load.label_col = m.label_col;
      args.load.delimiter = io_delimiter_from_name(m.delimiter);
      args.load.raw_f64 = m.raw_f64;
      if (!parse_method(m.method, args.run.method))
        throw Error(ErrorKind::parse_error,
                    "manifest has unknown method '" + m.method + "'");
      args.run.seed = m.seed;
      args.run.iterations = m.iterations;
      args.run.workers = m.workers;
      args.run.lr_mds = m.lr_mds;
      args.run.lr_tsne = m.lr_tsne;
      args.run.gamma = m.gamma;
      args.run.perplexities = m.perplexities;
      args.run.sparse_similarities = m.sparse_similarities;
      args.run.init_random = m.init == "random";
      std::string fp = file_fingerprint(args.input);
      if (fp != m.input_fingerprint)
        err << "warning: input fingerprint " << fp
            << " does not match the manifest (" << m.input_fingerprint
            << "); the replay will reflect the current file\n";
    }
    if (args.input.empty())
      throw Error(ErrorKind::usage, "embed needs an input file");
    if (args.output.empty())
      throw Error(ErrorKind::usage, "embed needs an output path (-o)");

    auto t0 = std::chrono::steady_clock::now();
    Dataset data = load_matrix(args.input, args.load);
    auto t1 = std::chrono::steady_clock::now();
    RunConfig rc = resolve_run_config(args.run, data.n);
    if (args.telemetry && rc.telemetry_every == 0)
      rc.telemetry_every = std::max<std::size_t>(1, rc.iterations / 20);

    TelemetrySink sink;
    if (rc.telemetry_every > 0) {
      std::size_t total = rc.iterations;
      sink = [&err, total](const TelemetryRecord& r) {
        err << "iter:" << r.iteration << " of:" << total << " eta_mds:"
            << fmt("%.6g", r.eta_mds) << " eta_tsne:" << fmt("%.6g", r.eta_tsne)
            << " grad_mean:" << fmt("%.6g", r.blended_norm_mean) << " grad_max:"
            << fmt("%.6g", r.blended_norm_max) << " stress:"
            << fmt("%.6g", r.stress_sample) << "\n";
      };
    }

    Embedding emb = run_any_method(data, rc, sink);
    auto t2 = std::chrono::steady_clock::now();
    save_embedding(args.output, emb, data.labels);
    auto t3 = std::chrono::steady_clock::now();

    RunManifest m;
    m.version = kVersion;
    m.method = method_name(rc.method);
    m.input_path = args.input;
    m.input_fingerprint = file_fingerprint(args.input);
    m.n = data.n;
    m.m = data.m;
    m.seed = rc.seed;
    m.iterations = rc.iterations;
    m.workers = rc.workers;
    m.lr_mds = rc.lr_mds;
    m.lr_tsne = rc.lr_tsne;
    m.gamma = rc.gamma;
    m.perplexities = rc.perplexities;
    m.sparse_similarities = rc.sparse_similarities;
    m.init = rc.init_random ? "random" : "pca";
    m.header = args.load.header;
    m.label_col = args.load.label_col;
    m.delimiter = io_delimiter_name(args.load.delimiter);
    m.raw_f64 = args.load.raw_f64;
    m.output_path = args.output;
    m.time_load = std::chrono::duration<double>(t1 - t0).count();
    m.time_run = std::chrono::duration<double>(t2 - t1).count();
    m.time_save = std::chrono::duration<double>(t3 - t2).count();
    std::string manifest_path = args.manifest_out.empty()
                                    ? args.output + ".manifest"
                                    : args.manifest_out;
    save_manifest(manifest_path, m);

    out << method_name(rc.method) << ": " << data.n << " points, " << data.m
        << " dims -> " << args.output << " (manifest " << manifest_path << ")\n";
    return 0;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int quality_command(const QualityArgs& args, std::ostream& out, std::ostream& err) {
  try {
    Dataset data = load_matrix(args.original, args.load);
    Embedding emb = load_embedding(args.embedding);
    if (emb.n != data.n)
      throw Error(ErrorKind::row_count_mismatch,
                  "embedding has " + std::to_string(emb.n) +
                      " rows but the original has " + std::to_string(data.n));
    QualityCurve q = quality_curves(data, emb, args.workers);
    if (!args.output.empty()) save_quality_curve(args.output, q);
    out << "n: " << q.n << "\n";
    out << "auc: " << fmt("%.17g", q.auc) << "\n";
    return 0;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int bench_command(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  try {
    Method method;
    if (!parse_method(args.method, method) ||
        (method != Method::squad_mds && method != Method::smacof))
      throw Error(ErrorKind::usage,
                  "bench supports methods squad-mds and smacof");
    std::vector<std::size_t> sizes = args.sizes;
    if (sizes.empty()) {
      sizes = method == Method::squad_mds
                  ? std::vector<std::size_t>{1000, 2000, 4000, 8000, 16000}
                  : std::vector<std::size_t>{500, 1000, 2000};
    }
    // Fixed iteration counts so measured time scales with n alone.
    const std::size_t iters = args.iterations > 0
                                  ? args.iterations
                                  : (method == Method::squad_mds ? 1000 : 30);

    auto run_once = [&](std::size_t n) {
      Dataset data = make_named_dataset(args.dataset, n, args.seed);
      RunConfig rc;
      rc.method = method;
      rc.seed = args.seed;
      rc.iterations = iters;
      rc.workers = args.workers;
      rc.smacof_rel_threshold = 0.0;  // never cut early; uniform work per size
      auto t0 = std::chrono::steady_clock::now();
      if (method == Method::squad_mds) {
        Embedding e = run_squad_mds(data, rc);
        (void)e;
      } else {
        SmacofResult r = run_smacof(data, rc);
        (void)r;
      }
      auto t1 = std::chrono::steady_clock::now();
      return std::chrono::duration<double>(t1 - t0).count();
    };

    run_once(sizes.front());  // warmup, untimed

    std::vector<double> seconds(sizes.size());
    std::string table;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      seconds[s] = run_once(sizes[s]);
      out << "n=" << sizes[s] << " seconds=" << fmt("%.6g", seconds[s]) << "\n";
      table += std::to_string(sizes[s]) + "," + fmt("%.17g", seconds[s]) + "\n";
    }

    double slope = 0.0;
    if (sizes.size() >= 2) {
      // Least-squares slope of log t against log n.
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double cnt = static_cast<double>(sizes.size());
      for (std::size_t s = 0; s < sizes.size(); ++s) {
        double x = std::log(static_cast<double>(sizes[s]));
        double y = std::log(seconds[s]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      out << "slope: " << fmt("%.4f", slope) << "\n";
      table += "# slope: " + fmt("%.17g", slope) + "\n";
    }
    if (!args.output.empty()) {
      std::FILE* f = std::fopen(args.output.c_str(), "wb");
      if (!f)
        throw Error(ErrorKind::io_error,
                    "cannot open " + args.output + " for writing");
      std::fwrite(table.data(), 1, table.size(), f);
      std::fclose(f);
    }
    return 0;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int plot_command(const PlotArgs& args, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> labels;
    Embedding emb = load_embedding(args.embedding, &labels);
    std::string svg = plot_svg(emb, labels, args.size_px);
    save_svg(args.output, svg);
    out << args.output << ": " << emb.n << " points, " << svg.size() << " bytes\n";
    return 0;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace squadmds
