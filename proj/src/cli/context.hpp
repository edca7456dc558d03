#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wgpt/generators.hpp"
#include "wgpt/graph.hpp"
#include "wgpt/metric.hpp"
#include "wgpt/potential.hpp"

namespace wgpt::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAuditFailure = 2;
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Column table written by --csv.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Global flags and I/O shared by every command.
struct Context {
  bool exact = false;
  double tol = 1e-9;
  bool tol_set = false;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::string json_path;
  std::string csv_path;

  std::istream* in = nullptr;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  /// Set by the selected subcommand; returns the exit code.
  std::function<int()> action;

  void warn(const std::string& msg) const;
  /// Report skeleton with schema version, command and seed.
  Json report(const std::string& command) const;
  /// Writes the report (to --json or stdout) and the table (to --csv).
  void emit(const Json& report, const Table* table = nullptr) const;
};

/// Where the input graph comes from.
struct GraphSource {
  std::string file;  // "-" for stdin
  std::string generator;
  std::vector<std::string> params;
  int window = -1;
  int halo = 1;
};

void add_graph_options(CLI::App* cmd, GraphSource& src);

struct LoadedGraph {
  WeightedGraph graph;
  std::optional<ScalarField> field;
  std::optional<ExactField> exact_field;
  Json window;
};

/// Reads or generates the graph; `needed_radius` (if set) grows generator
/// windows until the chosen metric certifies balls of that radius.
LoadedGraph load_graph(const Context& ctx, const GraphSource& src);
/// Generator-backed family by name; InvalidGraph for unknown names.
GraphGenerator make_generator(const std::string& name, const std::map<std::string, std::string>& params);
/// Finite graph families (path, random, random-tree); nullopt for generator names.
std::optional<WeightedGraph> make_finite(const std::string& name, const std::map<std::string, std::string>& params,
                                         std::uint64_t seed);
std::map<std::string, std::string> parse_params(const std::vector<std::string>& kv);

/// Metric by kind name: natural, delta, delta-trunc (needs trunc), or
/// file (edge-length file of `id id length` lines).
PseudoMetric make_metric(const WeightedGraph& g, const std::string& kind, Index base, double trunc = 0.0,
                         const std::string& lengths_file = {});

/// Generator window large enough for rho-balls of radius `radius` (doubling the hop radius).
LoadedGraph load_graph_for_radius(const Context& ctx, const GraphSource& src, const std::string& metric_kind,
                                  VertexId base, double radius, double trunc = 0.0);

/// Region syntax: `all` (complete vertices), `|x|<=N`, `a..b`, or `id,id,...`.
std::vector<Index> parse_region(const WeightedGraph& g, const std::string& text);
/// `a,b,c`, `a..b` (unit step) or `a..b:step`.
std::vector<double> parse_list(const std::string& text);
/// `hops:n1,n2,...` or `balls:r1,r2,...` (balls need a metric).
Exhaustion parse_exhaustion(const WeightedGraph& g, const std::string& text, Index base, const PseudoMetric* rho);

/// Named fields: abs, pos, const:c, harmonic, abs-harmonic, id; `graph` uses the file's #field.
ScalarField make_field(const LoadedGraph& lg, const std::string& name);

Json number(double v);
Json numbers(const std::vector<double>& v);
Json id_list(const WeightedGraph& g, const std::vector<Index>& v);

void register_graph_commands(CLI::App& app, Context& ctx);
void register_metric_commands(CLI::App& app, Context& ctx);
void register_potential_commands(CLI::App& app, Context& ctx);
void register_liouville_commands(CLI::App& app, Context& ctx);
void register_example_commands(CLI::App& app, Context& ctx);
void register_hmap_commands(CLI::App& app, Context& ctx);

}  // namespace wgpt::cli
