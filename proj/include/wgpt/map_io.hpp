#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wgpt/graph.hpp"
#include "wgpt/hadamard.hpp"

namespace wgpt {

/// Tree file: one `u v length` line per edge, nodes numbered 0..n-1; edge ids
/// follow line order. `%` and `#` start comments.
MetricTree read_tree(std::istream& in);
MetricTree read_tree_file(const std::string& path);

/// Map file: `vertex-id coordinates...` per line.
std::map<VertexId, std::vector<double>> read_map_rows(std::istream& in);
std::map<VertexId, std::vector<double>> read_map_rows_file(const std::string& path);

/// Rows with exactly `dim` coordinates.
VertexMap<EuclideanSpace::Point> euclidean_map(const WeightedGraph& g, const std::map<VertexId, std::vector<double>>& rows,
                                               std::size_t dim);
/// Rows `edge-id offset`.
VertexMap<TreePoint> tree_map(const WeightedGraph& g, const std::map<VertexId, std::vector<double>>& rows,
                              const MetricTree& tree);
/// Rows `re im` with |z| < 1.
VertexMap<PoincareDisk::Point> disk_map(const WeightedGraph& g, const std::map<VertexId, std::vector<double>>& rows);

void write_map(std::ostream& out, const WeightedGraph& g, const VertexMap<EuclideanSpace::Point>& u);
void write_map(std::ostream& out, const WeightedGraph& g, const VertexMap<TreePoint>& u);
void write_map(std::ostream& out, const WeightedGraph& g, const VertexMap<PoincareDisk::Point>& u);

}  // namespace wgpt
