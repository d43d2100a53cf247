#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sda/anonymizer.hpp"
#include "sda/audit.hpp"
#include "sda/datagen.hpp"
#include "sda/exact.hpp"
#include "sda/io.hpp"
#include "sda/metrics.hpp"

namespace sda::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  const char* raw = std::getenv("SDA_LOG_LEVEL");
  if (raw == nullptr) return Level::Warn;
  const std::string s(raw);
  if (s == "error") return Level::Error;
  if (s == "info") return Level::Info;
  if (s == "debug") return Level::Debug;
  return Level::Warn;
}

void log(Level level, const std::string& msg) {
  static const Level threshold = log_level();
  if (level > threshold) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << '[' << names[static_cast<int>(level)] << "] " << msg << '\n';
}

struct GraphPaths {
  std::string edges;
  std::string communities;
  std::string provenance;
};

void add_graph_options(CLI::App* cmd, GraphPaths& p, const std::string& prefix = "") {
  cmd->add_option("--" + prefix + "edges", p.edges, "edge list, one 'u v' per line")->required()->check(CLI::ExistingFile);
  cmd->add_option("--" + prefix + "communities", p.communities, "community labels, one 'v c' per line")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--" + prefix + "provenance", p.provenance, "edge tags, one 'u v O|A|S' per line")->check(CLI::ExistingFile);
}

Graph load(const GraphPaths& p) {
  std::ifstream edges(p.edges);
  std::ifstream communities(p.communities);
  if (!edges || !communities) throw std::runtime_error("cannot open graph files");
  if (p.provenance.empty()) return load_graph(edges, communities);
  std::ifstream provenance(p.provenance);
  if (!provenance) throw std::runtime_error("cannot open " + p.provenance);
  return load_graph(edges, communities, &provenance);
}

std::vector<SplitRecord> load_splits(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_split_map(in);
}

void check_k(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.community_count()) {
    throw UsageError("k must lie in [1, " + std::to_string(g.community_count()) + "], got " + std::to_string(k));
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

std::string fixed(double x, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

// --- anonymize -----------------------------------------------------------------------

struct AnonymizeArgs {
  GraphPaths in;
  std::string alg = "fs";
  std::size_t k = 0;
  std::optional<std::uint64_t> omega;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_anonymize(const AnonymizeArgs& a) {
  const auto start = Clock::now();
  const Graph g = load(a.in);
  check_k(g, a.k);
  if (a.omega && *a.omega == 0) throw UsageError("omega must be positive");
  const auto alg = parse_algorithm(a.alg);
  if (!alg) throw UsageError("unknown algorithm " + a.alg);

  AnonymizerConfig cfg;
  cfg.k = a.k;
  cfg.omega = a.omega;
  cfg.seed = a.seed;
  cfg.algorithm = *alg;
  log(Level::Info, "anonymizing " + std::to_string(g.vertex_count()) + " vertices with " + a.alg);
  const AnonymizationResult r = anonymize(g, cfg);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  const GraphText text = save_graph(r.graph);
  std::string log_text;
  for (const std::string& line : r.log) log_text += line + '\n';
  const std::vector<std::pair<std::string, std::string>> artifacts = {
      {"anonymized.edges", text.edges},
      {"anonymized.communities", text.communities},
      {"anonymized.provenance", text.provenance},
      {"split_map.txt", save_split_map(r.splits)},
      {"run.log", log_text},
      {"cost.txt", format_cost_summary(r, a.alg, a.k)},
  };
  nlohmann::json manifest;
  manifest["command"] = "anonymize";
  manifest["inputs"] = {{"edges", a.in.edges}, {"communities", a.in.communities}, {"provenance", a.in.provenance}};
  manifest["algorithm"] = a.alg;
  manifest["k"] = a.k;
  manifest["omega"] = r.omega;
  manifest["seed"] = a.seed;
  manifest["output_dir"] = a.out;
  manifest["success"] = r.success;
  manifest["artifacts"] = nlohmann::json::array();
  for (const auto& [name, body] : artifacts) {
    write_file(dir / name, body);
    manifest["artifacts"].push_back(name);
  }
  manifest["artifacts"].push_back("manifest.json");
  manifest["duration_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  write_file(dir / "manifest.json", manifest.dump(2) + '\n');

  std::cout << format_cost_summary(r, a.alg, a.k);
  if (!r.success) {
    log(Level::Warn, a.alg + " could not anonymize the graph at k=" + std::to_string(a.k));
    return kExitInfeasible;
  }
  return kExitOk;
}

// --- audit ---------------------------------------------------------------------------

struct AuditArgs {
  GraphPaths in;
  std::size_t k = 0;
  std::string split_map;
  std::optional<std::uint64_t> omega;
  std::string out;
};

int cmd_audit(const AuditArgs& a) {
  const Graph g = load(a.in);
  check_k(g, a.k);
  std::string text = format_audit(audit(g, a.k));
  if (!a.split_map.empty() || !a.in.provenance.empty()) {
    const CostLedger ledger = recompute_ledger(g, load_splits(a.split_map), a.omega.value_or(1));
    text += "\n# ledger\nadded_edges: " + std::to_string(ledger.added_edges) +
            "\nsplit_vertices: " + std::to_string(ledger.split_vertices) + '\n';
    if (a.omega) text += "cost: " + std::to_string(ledger.cost) + '\n';
  }
  emit(a.out, text);
  return kExitOk;
}

// --- metrics -------------------------------------------------------------------------

struct MetricsArgs {
  GraphPaths in;
  GraphPaths before;
  std::string split_map;
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  bool skip_betweenness = false;
  std::string out;
};

int cmd_metrics(const MetricsArgs& a) {
  const Graph g = load(a.in);
  MetricsOptions opt;
  opt.aspl_sample = a.sample;
  opt.seed = a.seed;
  opt.betweenness = !a.skip_betweenness;
  MetricsReport report;
  if (!a.before.edges.empty()) {
    const Graph before = load(a.before);
    report = compare_metrics(before, g, load_splits(a.split_map), opt);
  } else {
    report = compute_metrics(g, opt);
  }
  emit(a.out, format_metrics(report));
  return kExitOk;
}

// --- gen -----------------------------------------------------------------------------

struct GenArgs {
  RmatParams rmat;
  std::size_t communities = 20;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  const auto start = Clock::now();
  Graph g;
  try {
    g = generate_community_graph(a.rmat, a.communities);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  const GraphText text = save_graph(g);
  write_file(dir / "graph.edges", text.edges);
  write_file(dir / "graph.communities", text.communities);
  nlohmann::json manifest;
  manifest["command"] = "gen";
  manifest["rmat"] = {{"n", a.rmat.n}, {"m", a.rmat.m}, {"a", a.rmat.a}, {"b", a.rmat.b},
                      {"c", a.rmat.c}, {"d", a.rmat.d}};
  manifest["communities"] = a.communities;
  manifest["seed"] = a.rmat.seed;
  manifest["output_dir"] = a.out;
  manifest["vertices"] = g.vertex_count();
  manifest["edges"] = g.edge_count();
  manifest["artifacts"] = {"graph.edges", "graph.communities", "manifest.json"};
  manifest["duration_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  write_file(dir / "manifest.json", manifest.dump(2) + '\n');
  log(Level::Info, "generated " + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.edge_count()) + " edges");
  return kExitOk;
}

// --- export-ip -----------------------------------------------------------------------

struct ExportArgs {
  GraphPaths in;
  std::size_t k = 0;
  std::string model = "add-edge";
  std::optional<std::uint64_t> omega;
  std::optional<std::size_t> budget;
  bool oracle = false;
  std::string out;
};

int cmd_export_ip(const ExportArgs& a) {
  const Graph g = load(a.in);
  check_k(g, a.k);
  IpModel m;
  if (a.model == "add-edge") {
    m = build_add_edge_model(g, a.k);
  } else {
    const std::uint64_t n = g.vertex_count();
    std::vector<std::size_t> budget;
    if (a.budget) {
      if (*a.budget == 0) throw UsageError("budget must be positive");
      budget.assign(g.id_bound(), 0);
      for (VertexId v : g.vertices()) budget[v] = std::min(*a.budget, g.degree(v));
    }
    m = build_full_model(g, a.k, a.omega.value_or(n * n), budget);
  }
  emit(a.out, export_lp(m));
  log(Level::Info, std::to_string(m.variables().size()) + " variables, " + std::to_string(m.constraints().size()) +
                       " constraints");
  if (a.oracle) {
    try {
      std::cerr << format_oracle(brute_force_add_edge_optimum(g, a.k));
    } catch (const std::invalid_argument& e) {
      log(Level::Warn, std::string("oracle skipped: ") + e.what());
    }
  }
  return kExitOk;
}

// --- compare -------------------------------------------------------------------------

struct CompareArgs {
  GraphPaths in;
  std::vector<std::string> algs{"ec", "cbs", "mbs", "fs"};
  std::vector<std::size_t> ks{2, 3, 4};
  std::optional<std::uint64_t> omega;
  std::uint64_t seed = 0;
  std::size_t sample = 0;
  std::string out;
};

int cmd_compare(const CompareArgs& a) {
  const Graph g = load(a.in);
  for (std::size_t k : a.ks) check_k(g, k);
  std::vector<Algorithm> algs;
  for (const std::string& s : a.algs) {
    const auto alg = parse_algorithm(s);
    if (!alg) throw UsageError("unknown algorithm " + s);
    algs.push_back(*alg);
  }
  const double base_cc = clustering_coefficient(g);
  const double base_aspl = average_shortest_path_length(g, a.sample, a.seed);
  std::ostringstream table;
  table << "# original cc " << fixed(base_cc) << " aspl " << fixed(base_aspl) << '\n';
  table << "# alg k success n_a_pct n_s_pct cc aspl dc ec_corr disconnected_pairs nmi\n";
  for (Algorithm alg : algs) {
    for (std::size_t k : a.ks) {
      AnonymizerConfig cfg;
      cfg.k = k;
      cfg.omega = a.omega;
      cfg.seed = a.seed;
      cfg.algorithm = alg;
      const AnonymizationResult r = anonymize(g, cfg);
      MetricsOptions opt;
      opt.aspl_sample = a.sample;
      opt.seed = a.seed;
      opt.betweenness = false;
      const MetricsReport m = compare_metrics(g, r.graph, r.splits, opt);
      table << algorithm_name(alg) << ' ' << k << ' ' << (r.success ? "true" : "false") << ' '
            << fixed(100.0 * static_cast<double>(r.added_edges) / static_cast<double>(g.edge_count()), 4) << ' '
            << fixed(100.0 * static_cast<double>(r.split_vertices) / static_cast<double>(g.vertex_count()), 4) << ' '
            << fixed(m.cc) << ' ' << fixed(m.aspl) << ' ' << fixed(m.dc.value_or(0.0)) << ' ' << fixed(*m.ec_corr) << ' '
            << fixed(*m.disconnected_pair_fraction) << ' ' << fixed(*m.community_agreement) << '\n';
      log(Level::Info, std::string(algorithm_name(alg)) + " k=" + std::to_string(k) + " done");
    }
  }
  emit(a.out, table.str());
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"k-structural diversity anonymization toolkit"};
  app.require_subcommand(1);

  AnonymizeArgs anon;
  auto* c_anon = app.add_subcommand("anonymize", "anonymize a community-labeled graph");
  add_graph_options(c_anon, anon.in);
  c_anon->add_option("--alg", anon.alg, "ec | cbs | mbs | fs | iec | sonly")
      ->check(CLI::IsMember({"ec", "cbs", "mbs", "fs", "iec", "sonly"}))
      ->capture_default_str();
  c_anon->add_option("--k", anon.k, "required number of communities per degree")->required();
  c_anon->add_option("--omega", anon.omega, "split penalty (default |V|^2)");
  c_anon->add_option("--seed", anon.seed)->capture_default_str();
  c_anon->add_option("--out", anon.out, "output directory")->required();

  AuditArgs aud;
  auto* c_audit = app.add_subcommand("audit", "report vertices whose degree class spans fewer than k communities");
  add_graph_options(c_audit, aud.in);
  c_audit->add_option("--k", aud.k)->required();
  c_audit->add_option("--split-map", aud.split_map, "split map of an anonymized graph")->check(CLI::ExistingFile);
  c_audit->add_option("--omega", aud.omega, "split penalty used to price the recomputed ledger");
  c_audit->add_option("--out", aud.out, "report file (default stdout)");

  MetricsArgs met;
  auto* c_metrics = app.add_subcommand("metrics", "utility metrics, optionally against the original graph");
  add_graph_options(c_metrics, met.in);
  c_metrics->add_option("--before-edges", met.before.edges)->check(CLI::ExistingFile);
  c_metrics->add_option("--before-communities", met.before.communities)->check(CLI::ExistingFile);
  c_metrics->add_option("--split-map", met.split_map)->check(CLI::ExistingFile);
  c_metrics->add_option("--sample", met.sample, "ASPL source sample (0 = all)")->capture_default_str();
  c_metrics->add_option("--seed", met.seed)->capture_default_str();
  c_metrics->add_flag("--no-betweenness", met.skip_betweenness);
  c_metrics->add_option("--out", met.out, "report file (default stdout)");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "R-MAT graph with balanced BFS communities");
  c_gen->add_option("--n", gen.rmat.n)->capture_default_str();
  c_gen->add_option("--m", gen.rmat.m)->capture_default_str();
  c_gen->add_option("--a", gen.rmat.a)->capture_default_str();
  c_gen->add_option("--b", gen.rmat.b)->capture_default_str();
  c_gen->add_option("--c", gen.rmat.c)->capture_default_str();
  c_gen->add_option("--d", gen.rmat.d)->capture_default_str();
  c_gen->add_option("--communities", gen.communities)->capture_default_str();
  c_gen->add_option("--seed", gen.rmat.seed)->capture_default_str();
  c_gen->add_option("--out", gen.out, "output directory")->required();

  ExportArgs exp;
  auto* c_export = app.add_subcommand("export-ip", "write the integer program in LP format");
  add_graph_options(c_export, exp.in);
  c_export->add_option("--k", exp.k)->required();
  c_export->add_option("--model", exp.model)->check(CLI::IsMember({"add-edge", "full"}))->capture_default_str();
  c_export->add_option("--omega", exp.omega, "split penalty for the full model (default |V|^2)");
  c_export->add_option("--budget", exp.budget, "substitutes per vertex in the full model (default min(|E_v|, 3))");
  c_export->add_flag("--oracle", exp.oracle, "also print the exhaustive add-edge optimum to stderr");
  c_export->add_option("--out", exp.out, "LP file (default stdout)");

  CompareArgs cmp;
  auto* c_compare = app.add_subcommand("compare", "sweep algorithms and k, one table row per run");
  add_graph_options(c_compare, cmp.in);
  c_compare->add_option("--algs", cmp.algs)->delimiter(',')->capture_default_str();
  c_compare->add_option("--ks", cmp.ks)->delimiter(',')->capture_default_str();
  c_compare->add_option("--omega", cmp.omega);
  c_compare->add_option("--seed", cmp.seed)->capture_default_str();
  c_compare->add_option("--sample", cmp.sample)->capture_default_str();
  c_compare->add_option("--out", cmp.out, "table file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_anon) return cmd_anonymize(anon);
    if (*c_audit) return cmd_audit(aud);
    if (*c_metrics) {
      if (met.before.edges.empty() != met.before.communities.empty())
        throw UsageError("--before-edges and --before-communities go together");
      return cmd_metrics(met);
    }
    if (*c_gen) return cmd_gen(gen);
    if (*c_export) return cmd_export_ip(exp);
    if (*c_compare) return cmd_compare(cmp);
  } catch (const UsageError& e) {
    log(Level::Error, e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sda::cli
