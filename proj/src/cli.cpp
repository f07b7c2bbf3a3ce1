// SPDX-License-Identifier: Apache-2.0
#include "rfp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include "rfp/diagnostics.hpp"
#include "rfp/engine.hpp"
#include "rfp/errors.hpp"
#include "rfp/feature_io.hpp"
#include "rfp/trace_counting.hpp"

namespace rfp::cli {

namespace {

/// Failure with a chosen exit status.
struct Exit {
  int code;
  std::string message;
};

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Exit{kIo, "cannot open graph file " + path};
  try {
    return load_edge_list(in);
  } catch (const Error& e) {
    throw Exit{kIo, path + ": " + e.what()};
  }
}

PropagationOperator make_operator(const std::string& name, const Graph& g) {
  if (name == "adj-norm") return sym_norm_adjacency(g);
  if (name == "lap-norm") return sym_norm_laplacian(g);
  return raw_adjacency(g);
}

Normalization parse_norm(const std::string& s) {
  if (s == "l2") return Normalization::L2;
  if (s == "none") return Normalization::None;
  return Normalization::QR;
}

Distribution parse_dist(const std::string& s) {
  return s == "rademacher" ? Distribution::Rademacher : Distribution::StandardNormal;
}

// Maps library errors onto exit statuses.
int report_error(std::ostream& err, int code, const std::string& what) {
  err << "error: " << what << "\n";
  return code;
}

// ---------------------------------------------------------------------------
// pe

struct PeOptions {
  std::string graph;
  std::string op = "adj-norm";
  Index k = 1;
  Index steps = 1;
  std::string norm = "qr";
  Index norm_every = 1;
  std::string dist = "normal";
  Index trajectories = 1;
  std::uint64_t seed = 0;
  std::string features;
  std::string out;
  std::string format = "rfpf";
  unsigned workers = 0;
  bool strict_rank = false;
};

void add_pe_options(CLI::App& cmd, PeOptions& o) {
  cmd.add_option("--graph", o.graph, "Edge-list file")->required();
  cmd.add_option("--operator", o.op, "Propagation operator")
      ->check(CLI::IsMember({"adj-norm", "lap-norm", "adj-raw"}));
  cmd.add_option("--k", o.k, "Channels per trajectory")->required();
  cmd.add_option("--steps", o.steps, "Propagation steps P")->required();
  cmd.add_option("--norm", o.norm, "Normalization")->check(CLI::IsMember({"l2", "qr", "none"}));
  cmd.add_option("--norm-every", o.norm_every, "Normalization frequency w");
  cmd.add_option("--dist", o.dist, "Initial distribution")->check(CLI::IsMember({"normal", "rademacher"}));
  cmd.add_option("--trajectories", o.trajectories, "Number of trajectories B");
  cmd.add_option("--seed", o.seed, "Random seed");
  cmd.add_option("--features", o.features, "Input node features (CSV or RFPF)");
  cmd.add_option("--out", o.out, "Output feature file")->required();
  cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"rfpf", "csv"}));
  cmd.add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  cmd.add_flag("--strict-rank", o.strict_rank, "Fail (exit 4) when a QR step loses rank");
}

int run_pe(const PeOptions& o, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  std::vector<unsigned char> graph_bytes;
  try {
    graph_bytes = io::read_file(o.graph);
  } catch (const IoError& e) {
    return report_error(err, kIo, e.what());
  }
  const Graph g = load_graph_file(o.graph);
  const PropagationOperator op = make_operator(o.op, g);

  RfpConfig cfg;
  cfg.k = o.k;
  cfg.steps = o.steps;
  cfg.norm_every = o.norm_every;
  cfg.normalization = parse_norm(o.norm);
  cfg.distribution = parse_dist(o.dist);
  cfg.seed = o.seed;
  cfg.trajectories = o.trajectories;
  cfg.rank_deficiency = o.strict_rank ? RankDeficiency::Fail : RankDeficiency::Complete;
  try {
    cfg.validate_for(op.size());
  } catch (const ConfigError& e) {
    return report_error(err, kUsage, e.what());
  }

  std::optional<FeatureBlock> f_in;
  std::string features_hash;
  if (!o.features.empty()) {
    try {
      f_in = io::read_features(o.features);
      features_hash = hex64(io::fnv1a64(io::read_file(o.features)));
    } catch (const Error& e) {
      return report_error(err, kIo, o.features + ": " + e.what());
    }
    if (f_in->rows() != g.num_nodes()) {
      return report_error(err, kUsage, "input features have " + std::to_string(f_in->rows()) +
                                           " rows but the graph has " +
                                           std::to_string(g.num_nodes()) + " nodes");
    }
  }

  FeatureBlock features;
  try {
    const TrajectorySet set = run_trajectory_set(op, cfg, o.workers);
    features = assemble_features(f_in, set);
  } catch (const NumericError& e) {
    return report_error(err, kNumeric, e.what());
  }

  try {
    if (o.format == "csv") {
      io::write_file_atomic(o.out, io::encode_csv(features));
    } else {
      const auto bytes = io::encode_rfpf(features);
      io::write_file_atomic(o.out, std::span<const unsigned char>(bytes));
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    io::Manifest m;
    m["toolkit_version"] = kToolkitVersion;
    m["graph"] = o.graph;
    m["graph_fnv1a64"] = hex64(io::fnv1a64(graph_bytes));
    m["operator"] = o.op;
    m["k"] = std::to_string(cfg.k);
    m["steps"] = std::to_string(cfg.steps);
    m["norm"] = o.norm;
    m["norm_every"] = std::to_string(cfg.norm_every);
    m["dist"] = o.dist;
    m["trajectories"] = std::to_string(cfg.trajectories);
    m["seed"] = std::to_string(cfg.seed);
    m["features"] = o.features;
    m["features_fnv1a64"] = features_hash;
    m["strict_rank"] = o.strict_rank ? "true" : "false";
    m["format"] = o.format;
    m["outputs"] = o.out;
    m["rows"] = std::to_string(features.rows());
    m["cols"] = std::to_string(features.cols());
    m["wall_time_s"] = num(wall);
    io::write_file_atomic(o.out + ".manifest", io::encode_manifest(m));
  } catch (const IoError& e) {
    return report_error(err, kIo, e.what());
  }
  out << "wrote " << o.out << " (" << features.rows() << " x " << features.cols() << ")\n";
  return kOk;
}

int run_replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out,
               std::ostream& err) {
  io::Manifest m;
  try {
    const auto bytes = io::read_file(manifest_path);
    m = io::decode_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } catch (const Error& e) {
    return report_error(err, kIo, manifest_path + ": " + e.what());
  }
  std::vector<std::string> args = {"pe"};
  auto forward = [&](const char* key, const char* flag) {
    const auto it = m.find(key);
    if (it != m.end() && !it->second.empty()) {
      args.push_back(flag);
      args.push_back(it->second);
    }
  };
  forward("graph", "--graph");
  forward("operator", "--operator");
  forward("k", "--k");
  forward("steps", "--steps");
  forward("norm", "--norm");
  forward("norm_every", "--norm-every");
  forward("dist", "--dist");
  forward("trajectories", "--trajectories");
  forward("seed", "--seed");
  forward("features", "--features");
  forward("format", "--format");
  if (const auto it = m.find("strict_rank"); it != m.end() && it->second == "true") {
    args.push_back("--strict-rank");
  }
  if (!out_override.empty()) {
    args.push_back("--out");
    args.push_back(out_override);
  } else {
    forward("outputs", "--out");
  }
  if (const auto it = m.find("graph_fnv1a64"); it != m.end()) {
    try {
      if (hex64(io::fnv1a64(io::read_file(m["graph"]))) != it->second) {
        return report_error(err, kIo, "graph file content changed since the manifest was written");
      }
    } catch (const IoError& e) {
      return report_error(err, kIo, e.what());
    }
  }
  return run(args, out, err);
}

// ---------------------------------------------------------------------------
// eigcheck

struct EigOptions {
  std::string graph;
  std::string op = "adj-norm";
  Index k = 1;
  Index steps = 100;
  std::uint64_t seed = 0;
  double tolerance = kDefaultAngleTolerance;
  Index oracle_cap = kOracleCap;
};

int run_eigcheck(const EigOptions& o, std::ostream& out, std::ostream& err) {
  const Graph g = load_graph_file(o.graph);
  const PropagationOperator op = make_operator(o.op, g);
  if (op.size() > o.oracle_cap) {
    return report_error(err, kOracleCapExceeded, "graph has " + std::to_string(op.size()) +
                                             " nodes, above the oracle cap " +
                                             std::to_string(o.oracle_cap));
  }
  RfpConfig cfg;
  cfg.k = o.k;
  cfg.steps = o.steps;
  cfg.normalization = Normalization::QR;
  cfg.seed = o.seed;
  try {
    cfg.validate_for(op.size());
  } catch (const ConfigError& e) {
    return report_error(err, kUsage, e.what());
  }
  ConvergenceReport report;
  try {
    const Trajectory t = run_trajectory(op, cfg, 0);
    report = convergence_report(op, t, o.tolerance, o.oracle_cap);
  } catch (const NumericError& e) {
    return report_error(err, kNumeric, e.what());
  }

  out << "p\tmax_angle\tresidual\n";
  for (const auto& row : report.per_step) {
    out << row.step << '\t' << num(row.max_principal_angle.value_or(0.0)) << '\t'
        << num(row.eigen_residual) << '\n';
  }
  out << "oracle_gap=" << (report.oracle_gap ? num(*report.oracle_gap) : std::string("n/a")) << '\n';
  out << "degenerate=" << (report.degenerate ? "true" : "false") << '\n';
  out << "converged_at="
      << (report.converged_at ? std::to_string(*report.converged_at) : std::string("none")) << '\n';
  return report.converged_at ? kOk : kNotConverged;
}

// ---------------------------------------------------------------------------
// count

struct CountOptions {
  std::string graph;
  std::string what = "triangles";
  Index walk_length = 0;
  std::string mode = "exact";
  Index samples = 1000;
  double epsilon = 0.5;
  double delta = 0.1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  Index oracle_cap = kOracleCap;
};

double standard_error(const std::vector<double>& samples, double mean) {
  if (samples.size() < 2) return 0.0;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  return std::sqrt(ss / static_cast<double>(samples.size() - 1) / static_cast<double>(samples.size()));
}

int run_count(const CountOptions& o, std::ostream& out, std::ostream& err) {
  const Graph g = load_graph_file(o.graph);
  if (o.what == "walks" && o.walk_length < 1) {
    return report_error(err, kUsage, "--what walks needs --walk-length >= 1");
  }
  if (o.mode != "exact" && o.samples < 1) return report_error(err, kUsage, "--samples must be >= 1");
  if (o.mode == "guaranteed" && o.what != "triangles") {
    return report_error(err, kUsage, "guaranteed mode supports --what triangles only");
  }

  std::ostringstream lines;
  lines << "what=" << o.what << "\nmode=" << o.mode << '\n';
  try {
    if (o.mode == "exact") {
      std::int64_t exact = 0;
      if (o.what == "triangles") {
        exact = triangle_exact(g, o.oracle_cap);
      } else if (o.what == "quadrangles") {
        exact = quadrangle_exact(g, o.oracle_cap);
      } else {
        exact = closed_walks(g, o.walk_length, o.oracle_cap);
      }
      lines << "exact=" << exact << '\n';
    } else if (o.mode == "estimate") {
      double estimate = 0.0, se = 0.0;
      if (o.what == "triangles") {
        const CountResult r = triangle_estimate(g, o.samples, o.seed, o.workers);
        estimate = r.estimate;
        se = standard_error(r.per_sample, r.estimate);
      } else if (o.what == "quadrangles") {
        const TraceEstimate t4 = hutchinson_trace(raw_adjacency(g), 4, o.samples, o.seed, o.workers);
        double deg_sq = 0.0;
        for (Index v = 0; v < g.num_nodes(); ++v) deg_sq += static_cast<double>(g.degree(v) * g.degree(v));
        estimate = (t4.value + 2.0 * static_cast<double>(g.num_edges()) - 2.0 * deg_sq) / 8.0;
        se = standard_error(t4.per_sample, t4.value) / 8.0;
      } else {
        const TraceEstimate t = hutchinson_trace(raw_adjacency(g), o.walk_length, o.samples, o.seed, o.workers);
        estimate = t.value;
        se = standard_error(t.per_sample, t.value);
      }
      lines << "estimate=" << num(estimate) << "\nstderr=" << num(se) << "\nm_used=" << o.samples << '\n';
    } else {
      const CountResult r = count_with_guarantee(g, o.epsilon, o.delta, o.seed, o.samples, o.workers,
                                                 o.oracle_cap);
      lines << "estimate=" << num(r.estimate) << "\nexact=" << r.exact.value_or(0)
            << "\nm_used=" << r.m_used << "\nepsilon=" << num(o.epsilon) << "\ndelta=" << num(o.delta)
            << '\n';
      if (r.m_required) lines << "m_required=" << *r.m_required << '\n';
      if (r.rho) lines << "rho=" << num(*r.rho) << '\n';
      if (r.rank) lines << "rank=" << *r.rank << '\n';
      if (r.warning) lines << "warning=" << *r.warning << '\n';
    }
  } catch (const OracleCapError& e) {
    return report_error(err, kOracleCapExceeded, e.what());
  } catch (const DomainError& e) {
    return report_error(err, kUsage, e.what());
  } catch (const NumericError& e) {
    return report_error(err, kNumeric, e.what());
  }
  out << lines.str();
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::vector<std::string> sizes;
  Index k = 8;
  Index steps = 10;
  int repeats = 3;
  std::uint64_t seed = 0;
};

int run_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  if (o.k < 1 || o.steps < 1 || o.repeats < 1) {
    return report_error(err, kUsage, "--k, --steps and --repeats must be positive");
  }
  std::vector<std::pair<Index, Index>> sizes;
  for (const auto& s : o.sizes) {
    std::vector<std::string> parts;
    std::string field;
    std::istringstream fields(s);
    while (std::getline(fields, field, ',')) parts.push_back(field);
    for (const auto& p : parts) {
      const auto sep = p.find(':');
      Index n = 0, m = 0;
      if (sep == std::string::npos ||
          std::from_chars(p.data(), p.data() + sep, n).ec != std::errc{} ||
          std::from_chars(p.data() + sep + 1, p.data() + p.size(), m).ec != std::errc{} || n < 2 ||
          m < 1 || (2 * m) % n != 0) {
        return report_error(err, kUsage, "bad size '" + p + "': expected n:m with 2m divisible by n");
      }
      sizes.emplace_back(n, m);
    }
  }
  if (sizes.empty()) return report_error(err, kUsage, "--sizes is required");

  std::vector<BenchRow> rows;
  try {
    for (const auto& [n, m] : sizes) rows.push_back(bench_propagation(n, 2 * m / n, o.k, o.steps, o.repeats, o.seed));
  } catch (const ValidationError& e) {
    return report_error(err, kUsage, e.what());
  }
  out << "n\tm\td\tseconds\tns_per_step_edge\n";
  for (const auto& r : rows) {
    out << r.nodes << '\t' << r.edges << '\t' << r.degree << '\t' << num(r.seconds) << '\t'
        << num(r.seconds_per_step_edge * 1e9) << '\n';
  }
  if (rows.size() > 1) {
    double lo = rows.front().seconds_per_step_edge, hi = lo;
    for (const auto& r : rows) {
      lo = std::min(lo, r.seconds_per_step_edge);
      hi = std::max(hi, r.seconds_per_step_edge);
    }
    out << "per_edge_time_ratio=" << num(hi / lo) << '\n';
    for (std::size_t i = 1; i < rows.size(); ++i) {
      out << "total_time_ratio[" << i << "]=" << num(rows[i].seconds / rows[i - 1].seconds)
          << " edge_ratio[" << i << "]="
          << num(static_cast<double>(rows[i].edges) / static_cast<double>(rows[i - 1].edges)) << '\n';
    }
  }
  return kOk;
}

}  // namespace

BenchRow bench_propagation(Index n, Index d, Index k, Index steps, int repeats, std::uint64_t seed) {
  const Graph g = random_regular_graph(n, d, seed);
  const PropagationOperator op = sym_norm_adjacency(g);
  RfpConfig cfg;
  cfg.k = k;
  cfg.normalization = Normalization::None;
  cfg.seed = seed;
  const FeatureBlock init = sample_init(cfg, n, 0);

  double best = std::numeric_limits<double>::infinity();
  double sink = 0.0;
  for (int r = 0; r < repeats; ++r) {
    FeatureBlock x = init;
    const auto t0 = std::chrono::steady_clock::now();
    for (Index p = 0; p < steps; ++p) x = spmm(op, x);
    const auto t1 = std::chrono::steady_clock::now();
    sink += x(0, 0);
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  if (!std::isfinite(sink)) throw NumericOverflowError(static_cast<std::size_t>(steps));
  BenchRow row;
  row.nodes = n;
  row.edges = g.num_edges();
  row.degree = d;
  row.seconds = best;
  row.seconds_per_step_edge = best / static_cast<double>(steps) / static_cast<double>(row.edges);
  return row;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random feature propagation toolkit", "rfp"};
  app.require_subcommand(1);

  PeOptions pe;
  add_pe_options(*app.add_subcommand("pe", "Compute propagation trajectories and export features"), pe);

  std::string manifest, replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run a pe invocation from its manifest");
  replay->add_option("manifest", manifest, "Manifest written by pe")->required();
  replay->add_option("--out", replay_out, "Override the output path");

  EigOptions eig;
  auto* eigcheck = app.add_subcommand("eigcheck", "Check subspace-iteration convergence against a dense oracle");
  eigcheck->add_option("--graph", eig.graph)->required();
  eigcheck->add_option("--operator", eig.op)->check(CLI::IsMember({"adj-norm", "lap-norm", "adj-raw"}));
  eigcheck->add_option("--k", eig.k)->required();
  eigcheck->add_option("--steps", eig.steps);
  eigcheck->add_option("--seed", eig.seed);
  eigcheck->add_option("--tolerance", eig.tolerance);
  eigcheck->add_option("--oracle-cap", eig.oracle_cap);

  CountOptions cnt;
  auto* count = app.add_subcommand("count", "Count triangles, quadrangles or closed walks");
  count->add_option("--graph", cnt.graph)->required();
  count->add_option("--what", cnt.what)->check(CLI::IsMember({"triangles", "quadrangles", "walks"}));
  count->add_option("--walk-length", cnt.walk_length);
  count->add_option("--mode", cnt.mode)->check(CLI::IsMember({"exact", "estimate", "guaranteed"}));
  count->add_option("--samples", cnt.samples);
  count->add_option("--epsilon", cnt.epsilon);
  count->add_option("--delta", cnt.delta);
  count->add_option("--seed", cnt.seed);
  count->add_option("--workers", cnt.workers);
  count->add_option("--oracle-cap", cnt.oracle_cap);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time sparse propagation on random regular graphs");
  bench_cmd->add_option("--sizes", bench.sizes, "Comma separated n:m pairs")->required();
  bench_cmd->add_option("--k", bench.k);
  bench_cmd->add_option("--steps", bench.steps);
  bench_cmd->add_option("--repeats", bench.repeats);
  bench_cmd->add_option("--seed", bench.seed);

  std::vector<const char*> argv{"rfp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, kUsage, e.what());
  }

  try {
    if (app.got_subcommand("pe")) return run_pe(pe, out, err);
    if (app.got_subcommand("replay")) return run_replay(manifest, replay_out, out, err);
    if (app.got_subcommand("eigcheck")) return run_eigcheck(eig, out, err);
    if (app.got_subcommand("count")) return run_count(cnt, out, err);
    return run_bench(bench, out, err);
  } catch (const Exit& e) {
    return report_error(err, e.code, e.message);
  } catch (const IoError& e) {
    return report_error(err, kIo, e.what());
  } catch (const NumericError& e) {
    return report_error(err, kNumeric, e.what());
  } catch (const Error& e) {
    return report_error(err, kUsage, e.what());
  }
}

}  // namespace rfp::cli
