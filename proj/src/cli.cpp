#include "pgsw/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pgsw/chain.hpp"
#include "pgsw/errors.hpp"
#include "pgsw/experiments.hpp"
#include "pgsw/format.hpp"
#include "pgsw/io.hpp"
#include "pgsw/metrics.hpp"
#include "pgsw/parallel.hpp"
#include "pgsw/percolation.hpp"
#include "pgsw/smallworld.hpp"

namespace pgsw {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool quiet = false;
};

struct GenOptions {
  ModelConfig model;
  std::string mode = "swn";
  std::string out;
  std::string points_out;
};

struct PercOptions {
  double n = 64;
  int d = 2;
  std::optional<double> r;
  std::string r_grid;
  std::size_t trials = 100;
  std::string mode = "box";
  std::string out;
};

struct MixOptions {
  std::string graph;
  std::string starts = "all";
  double tol = 1e-10;
  bool timing = false;
  std::string out;
};

struct GraphMetricOptions {
  std::string graph;
  std::string method = "auto";
  std::size_t restarts = 4;
  std::string out;
};

struct ScaleOptions {
  std::string config;
  std::string out_dir;
};

std::string na_or(const std::optional<double>& value) {
  return value ? format_double(*value) : "NA";
}

// Writes `text` to `path` (with a manifest beside it) or to `out` when no path is given.
void emit(const std::string& text, const std::string& path, RunManifest manifest,
          std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  write_text_file(path, text);
  manifest.outputs.push_back(path);
  write_text_file(path + ".manifest", manifest.render());
}

std::vector<double> radius_list(const PercOptions& opts) {
  if (opts.r && !opts.r_grid.empty()) throw InvalidInput("give either --r or --r-grid, not both");
  if (opts.r) return {*opts.r};
  if (opts.r_grid.empty()) throw InvalidInput("perc needs --r or --r-grid a:b:step");
  std::vector<std::string> parts;
  std::stringstream in(opts.r_grid);
  std::string item;
  while (std::getline(in, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw InvalidInput("--r-grid must look like a:b:step");
  const auto a = parse_double(parts[0]), b = parse_double(parts[1]), step = parse_double(parts[2]);
  if (!a || !b || !step || !(*step > 0) || !(*b >= *a)) {
    throw InvalidInput("--r-grid needs numbers a <= b and step > 0");
  }
  std::vector<double> radii;
  for (std::size_t i = 0;; ++i) {
    const double r = *a + static_cast<double>(i) * *step;
    if (r > *b + 1e-9 * *step) break;
    radii.push_back(r);
  }
  return radii;
}

RunManifest base_manifest(const std::string& subcommand, const GlobalOptions& global) {
  RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.seed = global.seed;
  return manifest;
}

int run_gen(const GenOptions& opts, const GlobalOptions& global, std::ostream& out,
            std::ostream& err) {
  if (opts.mode != "gn" && opts.mode != "swn" && opts.mode != "augmented") {
    throw InvalidInput("--mode must be gn, swn or augmented");
  }
  ModelConfig model = opts.model;
  model.seed = global.seed;
  if (!(model.r > 0)) throw InvalidInput("--r must be positive");
  const Instance inst = generate_instance(model);
  GraphFile file = opts.mode == "augmented"
                       ? to_graph_file(attach_minor_clusters(inst.labeling, inst.points, inst.graph))
                       : to_graph_file(inst.graph, opts.mode == "swn");

  RunManifest manifest = base_manifest("gen", global);
  manifest.params = {{"n", format_double(model.n)},         {"d", std::to_string(model.d)},
                     {"r", format_double(model.r)},         {"alpha", format_double(model.alpha)},
                     {"beta", format_double(model.beta)},   {"sigma", format_double(model.sigma)},
                     {"chi", format_double(model.chi)},     {"mode", opts.mode}};
  manifest.streams = {"points/0 (Poisson count and coordinates)",
                      "long_edges/<vertex id> (per-vertex annulus scan)"};
  if (!opts.points_out.empty()) {
    std::ostringstream points;
    write_points(inst.points, model.seed, points);
    write_text_file(opts.points_out, points.str());
    manifest.outputs.push_back(opts.points_out);
  }
  if (!global.quiet) {
    err << "gen: |V|=" << file.vertex_count() << " |E_short|=" << file.edge_count(EdgeTag::short_edge)
        << " |E_long|=" << file.edge_count(EdgeTag::long_edge)
        << " |E_bridge|=" << file.edge_count(EdgeTag::bridge)
        << " p_n=" << format_double(inst.graph.params.p_n)
        << (inst.graph.params.clamped ? " (clamped to 1)" : "") << '\n';
  }
  emit(serialize_graph(file), opts.out, manifest, out);
  return 0;
}

int run_perc(const PercOptions& opts, const GlobalOptions& global, std::ostream& out) {
  if (opts.mode != "box" && opts.mode != "torus") throw InvalidInput("--mode must be box or torus");
  const std::vector<double> radii = radius_list(opts);
  std::ostringstream csv;
  csv << "r,trials,crossing_fraction,crossing_se,theta_tilde_hat,theta_se,secondary_diam_max\n";
  for (double r : radii) {
    const PercolationEstimate est =
        opts.mode == "box" ? crossing_probability(opts.n, opts.d, r, opts.trials, global.seed)
                           : estimate_theta_tilde(opts.n, opts.d, r, opts.trials, global.seed);
    csv << format_double(r) << ',' << est.trials << ',' << na_or(est.crossing_fraction) << ','
        << na_or(est.crossing_se) << ',' << format_double(est.theta_tilde_hat) << ','
        << format_double(est.theta_se) << ',' << format_double(est.secondary_diameter_max)
        << '\n';
  }
  RunManifest manifest = base_manifest("perc", global);
  manifest.params = {{"n", format_double(opts.n)},     {"d", std::to_string(opts.d)},
                     {"r", opts.r ? format_double(*opts.r) : ""}, {"r_grid", opts.r_grid},
                     {"trials", std::to_string(opts.trials)}, {"mode", opts.mode}};
  manifest.streams = {"perc/<trial> (point set of each trial, shared across r)"};
  emit(csv.str(), opts.out, manifest, out);
  return 0;
}

int run_mix(const MixOptions& opts, const GlobalOptions& global, std::ostream& out) {
  const GraphFile file = parse_graph(read_text_file(opts.graph));
  const Graph graph = file.graph();
  ChainOptions chain;
  chain.tol = opts.tol;
  chain.starts.seed = global.seed;
  if (opts.starts == "all") {
    chain.starts.all = true;
  } else if (opts.starts.rfind("sample:", 0) == 0) {
    const auto k = parse_u64(opts.starts.substr(7));
    if (!k || *k == 0) throw InvalidInput("--starts sample:<k> needs k >= 1");
    chain.starts.all = false;
    chain.starts.sampled = *k;
    if (static_cast<double>(graph.vertex_count()) * static_cast<double>(graph.total_degree()) <=
        kDiameterBudget) {
      const DiameterResult diam = exact_diameter(graph);
      chain.starts.extra = {diam.u, diam.v};
    }
  } else {
    throw InvalidInput("--starts must be 'all' or 'sample:<k>'");
  }
  const auto begin = std::chrono::steady_clock::now();
  const ChainReport report = analyze_chain(graph, chain);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - begin)
                           .count();
  const RelationVerdict verdict = check_relations(report);
  std::ostringstream csv;
  csv << "t_mix,mode,lambda1,gap,pi_min,h,h_method,bound_4_6,cheeger_ok,runtime_ms\n";
  csv << *report.t_mix << ',' << (report.t_mix_lower_bound ? "lower_bound" : "exact") << ','
      << format_double(report.lambda1) << ',' << format_double(report.gap) << ','
      << format_double(report.pi_min) << ',' << format_double(report.h) << ','
      << to_string(report.h_method) << ',' << format_double(report.bound_4_6) << ','
      << (verdict.ok() ? "true" : "false") << ','
      << (opts.timing ? std::to_string(elapsed) : std::string("NA")) << '\n';
  RunManifest manifest = base_manifest("mix", global);
  manifest.params = {{"graph", opts.graph}, {"starts", opts.starts}, {"tol", format_double(opts.tol)}};
  manifest.streams = {"mix_starts/0 (sampled start vertices)",
                      "power_iteration/0 with seed 0 (initial vector)"};
  manifest.inputs.push_back(opts.graph);
  emit(csv.str(), opts.out, manifest, out);
  return verdict.ok() ? 0 : 1;
}

std::string metric_header() { return "n,d,seed,diam,method,delta,iota,h,witness_size\n"; }

int run_cuts(const GraphMetricOptions& opts, const GlobalOptions& global, std::ostream& out) {
  const GraphFile file = parse_graph(read_text_file(opts.graph));
  const Graph graph = file.graph();
  const DiameterResult diam = diameter_auto(graph, global.seed, opts.restarts);
  const MaxDegree delta = max_degree(graph);
  CutReport cuts;
  std::size_t witness = 0;
  if (graph.vertex_count() <= kExhaustiveCutVertices) {
    cuts = conductance_exact(graph);
    witness = cuts.iota_witness.size();
  } else {
    const SpectralResult spectral = spectral_gap(LazyKernel(graph));
    cuts = conductance_sweep(graph, spectral.vector);
    witness = cuts.h_witness.size();
  }
  std::ostringstream csv;
  csv << metric_header() << format_double(file.n) << ',' << file.d << ',' << file.seed << ','
      << diam.value << ',' << to_string(diam.method) << ',' << delta.value << ','
      << na_or(cuts.iota) << ',' << na_or(cuts.h) << ',' << witness << '\n';
  RunManifest manifest = base_manifest("cuts", global);
  manifest.params = {{"graph", opts.graph}, {"restarts", std::to_string(opts.restarts)},
                     {"h_method", to_string(cuts.method)}};
  manifest.streams = {"double_sweep/0 (sweep start vertices, large graphs only)"};
  manifest.inputs.push_back(opts.graph);
  emit(csv.str(), opts.out, manifest, out);
  return 0;
}

int run_diam(const GraphMetricOptions& opts, const GlobalOptions& global, std::ostream& out) {
  const GraphFile file = parse_graph(read_text_file(opts.graph));
  const Graph graph = file.graph();
  DiameterResult diam;
  if (opts.method == "exact") {
    diam = exact_diameter(graph);
  } else if (opts.method == "sweep") {
    Stream stream(global.seed, "double_sweep");
    diam = diameter_double_sweep(graph, stream, opts.restarts);
  } else if (opts.method == "auto") {
    diam = diameter_auto(graph, global.seed, opts.restarts);
  } else {
    throw InvalidInput("--method must be auto, exact or sweep");
  }
  std::ostringstream csv;
  csv << metric_header() << format_double(file.n) << ',' << file.d << ',' << file.seed << ','
      << diam.value << ',' << to_string(diam.method) << ',' << max_degree(graph).value
      << ",NA,NA,NA\n";
  RunManifest manifest = base_manifest("diam", global);
  manifest.params = {{"graph", opts.graph}, {"method", opts.method},
                     {"restarts", std::to_string(opts.restarts)}};
  manifest.streams = {"double_sweep/0 (sweep start vertices)"};
  manifest.inputs.push_back(opts.graph);
  emit(csv.str(), opts.out, manifest, out);
  return 0;
}

std::string value_or_na(const std::map<std::string, double>& values, const std::string& key) {
  const auto it = values.find(key);
  return it == values.end() ? "NA" : format_double(it->second);
}

int run_scale(const ScaleOptions& opts, const GlobalOptions& global, std::ostream& out,
              std::ostream& err) {
  ScalingConfig config = parse_scaling_config(read_text_file(opts.config));
  if (!global.quiet) err << scaling_budget(config) << '\n';
  const ScalingReport report = scaling_sweep(config);
  const auto& metrics = config.metrics.empty() ? default_scaling_metrics() : config.metrics;

  std::ostringstream rows;
  rows << "n,trial,seed,ok";
  for (const std::string& m : metrics) rows << ',' << m;
  rows << ",diam_gn_method,diam_swn_method,error\n";
  for (const ScalingRow& row : report.rows) {
    rows << format_double(row.n) << ',' << row.trial << ',' << row.seed << ','
         << (row.ok ? "true" : "false");
    for (const std::string& m : metrics) rows << ',' << value_or_na(row.values, m);
    std::string error = row.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    rows << ',' << (row.diam_gn_method.empty() ? "NA" : row.diam_gn_method) << ','
         << (row.diam_swn_method.empty() ? "NA" : row.diam_swn_method) << ',' << error << '\n';
  }

  std::ostringstream summary;
  summary << "metric,quantity,n,value\n";
  for (const ScalingSummaryRow& s : report.summary) {
    summary << "ok_trials,count," << format_double(s.n) << ',' << s.ok_trials << '\n';
    for (const std::string& m : metrics) {
      summary << m << ",median," << format_double(s.n) << ',' << value_or_na(s.medians, m) << '\n';
    }
  }
  for (const ExponentFit& fit : report.fits) {
    if (!fit.fitted) {
      summary << fit.metric << ",not_fitted,," << fit.reason << '\n';
      continue;
    }
    summary << fit.metric << ",n_exponent,," << format_double(fit.n_exponent) << '\n'
            << fit.metric << ",n_residual,," << format_double(fit.n_residual) << '\n'
            << fit.metric << ",logn_exponent,," << format_double(fit.logn_exponent) << '\n'
            << fit.metric << ",logn_residual,," << format_double(fit.logn_residual) << '\n';
  }

  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  write_text_file(dir / "rows.csv", rows.str());
  write_text_file(dir / "summary.csv", summary.str());

  RunManifest manifest = base_manifest("scale", global);
  manifest.seed = config.seed;
  std::istringstream cfg(format_scaling_config(config));
  std::string line;
  while (std::getline(cfg, line)) {
    const auto eq = line.find('=');
    manifest.params.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  manifest.params.emplace_back("annulus_factor", format_double(report.flags.annulus_factor));
  manifest.params.emplace_back("chi_above_one", report.flags.chi_above_one ? "true" : "false");
  manifest.params.emplace_back("chi_at_most_1/(1-d)",
                               report.flags.chi_at_most_lower ? "true" : "false");
  for (const ScalingRow& row : report.rows) {
    manifest.streams.push_back("scale/n=" + format_double(row.n) + "/" + std::to_string(row.trial) +
                               " -> instance seed " + std::to_string(row.seed));
  }
  manifest.inputs.push_back(opts.config);
  manifest.outputs = {dir / "rows.csv", dir / "summary.csv"};
  write_text_file(dir / "manifest.txt", manifest.render());

  if (!global.quiet) {
    for (const ExponentFit& fit : report.fits) {
      out << fit.metric << ": ";
      if (fit.fitted) {
        out << "n-exponent " << format_double(fit.n_exponent) << ", (ln n)-exponent "
            << format_double(fit.logn_exponent) << '\n';
      } else {
        out << "not fitted (" << fit.reason << ")\n";
      }
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small world random graph simulator and analysis toolkit", "pgsw"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Master seed (u64)");
  app.add_option("--threads", global.threads, "Worker threads (speed only, never results)")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--quiet", global.quiet, "Suppress progress and summary output");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate G_n, the small world graph, or its augmentation");
  gen_cmd->add_option("--n", gen.model.n, "Torus side length")->required();
  gen_cmd->add_option("--d", gen.model.d, "Dimension")->check(CLI::Range(1, 16));
  gen_cmd->add_option("--r", gen.model.r, "Ball radius (adjacency within 2r)");
  gen_cmd->add_option("--alpha", gen.model.alpha, "Inner annulus fraction");
  gen_cmd->add_option("--beta", gen.model.beta, "Outer annulus fraction");
  gen_cmd->add_option("--sigma", gen.model.sigma, "Long-edge scale");
  gen_cmd->add_option("--chi", gen.model.chi, "Long-edge log exponent");
  gen_cmd->add_option("--mode", gen.mode, "gn | swn | augmented");
  gen_cmd->add_option("--out", gen.out, "Graph file (stdout if omitted)");
  gen_cmd->add_option("--points-out", gen.points_out, "Also write the Poisson point set");

  PercOptions perc;
  auto* perc_cmd = app.add_subcommand("perc", "Percolation crossing and largest-cluster density");
  perc_cmd->add_option("--n", perc.n, "Box side length");
  perc_cmd->add_option("--d", perc.d, "Dimension")->check(CLI::Range(1, 16));
  perc_cmd->add_option("--r", perc.r, "Radius");
  perc_cmd->add_option("--r-grid", perc.r_grid, "Radius grid a:b:step");
  perc_cmd->add_option("--trials", perc.trials, "Trials per radius")->check(CLI::PositiveNumber);
  perc_cmd->add_option("--mode", perc.mode, "box | torus");
  perc_cmd->add_option("--out", perc.out, "CSV output (stdout if omitted)");

  MixOptions mix;
  auto* mix_cmd = app.add_subcommand("mix", "Mixing time, spectral gap and conductance of a graph file");
  mix_cmd->add_option("--graph", mix.graph, "Graph file")->required();
  mix_cmd->add_option("--starts", mix.starts, "all | sample:<k>");
  mix_cmd->add_option("--tol", mix.tol, "Power iteration tolerance");
  mix_cmd->add_flag("--timing", mix.timing, "Fill runtime_ms (otherwise NA, keeping output reproducible)");
  mix_cmd->add_option("--out", mix.out, "CSV output (stdout if omitted)");

  GraphMetricOptions cuts;
  auto* cuts_cmd = app.add_subcommand("cuts", "Isoperimetric constant and conductance of a graph file");
  cuts_cmd->add_option("--graph", cuts.graph, "Graph file")->required();
  cuts_cmd->add_option("--restarts", cuts.restarts, "Double-sweep restarts for large graphs");
  cuts_cmd->add_option("--out", cuts.out, "CSV output (stdout if omitted)");

  GraphMetricOptions diam;
  auto* diam_cmd = app.add_subcommand("diam", "Diameter of a graph file");
  diam_cmd->add_option("--graph", diam.graph, "Graph file")->required();
  diam_cmd->add_option("--method", diam.method, "auto | exact | sweep");
  diam_cmd->add_option("--restarts", diam.restarts, "Double-sweep restarts");
  diam_cmd->add_option("--out", diam.out, "CSV output (stdout if omitted)");

  ScaleOptions scale;
  auto* scale_cmd = app.add_subcommand("scale", "Multi-n scaling sweep with exponent fits");
  scale_cmd->add_option("--config", scale.config, "key=value config file")->required();
  scale_cmd->add_option("--out-dir", scale.out_dir, "Output directory")->required();

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the built-in invariant and oracle checks");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    set_default_threads(global.threads);
    if (gen_cmd->parsed()) return run_gen(gen, global, out, err);
    if (perc_cmd->parsed()) return run_perc(perc, global, out);
    if (mix_cmd->parsed()) return run_mix(mix, global, out);
    if (cuts_cmd->parsed()) return run_cuts(cuts, global, out);
    if (diam_cmd->parsed()) return run_diam(diam, global, out);
    if (scale_cmd->parsed()) return run_scale(scale, global, out, err);
    if (selftest_cmd->parsed()) return run_selftest(out) ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace pgsw
