#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "wgpt/graph.hpp"

namespace wgpt {

/// Generator selection from a `#generator` block: a name plus key=value pairs.
struct GeneratorSpec {
  std::string name;
  std::map<std::string, std::string> params;
};

struct GraphFile {
  std::optional<WeightedGraph> graph;
  std::optional<ScalarField> field;
  std::optional<ExactField> exact_field;
  std::optional<GeneratorSpec> generator;
};

/// Reads the text graph format:
///
///   #vertices          one `id m` line per vertex
///   #edges             one `id id mu` line per undirected edge
///   #field             optional `id value` lines
///   #halo              optional `id full-row-sum` lines for window-boundary vertices
///   #window            optional `family root core-hops halo-hops`
///   #generator         optional `name key=value ...`
///
/// Numbers are decimal literals or fractions `p/q` and are kept exactly.
/// Lines starting with `%` are comments.
GraphFile read_graph(std::istream& in);
GraphFile read_graph_file(const std::string& path);

struct WriteOptions {
  /// Write rationals `p/q` from the exact data instead of doubles.
  bool exact = false;
};

void write_graph(std::ostream& out, const WeightedGraph& g, const ScalarField* f = nullptr,
                 const ExactField* f_exact = nullptr, const WriteOptions& opts = {});

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

}  // namespace wgpt
