#include "wgpt/map_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wgpt/graph_io.hpp"

namespace wgpt {

namespace {

// Splits a line into tokens, dropping comments.
std::vector<std::string> tokens(std::string line) {
  const auto cut = line.find_first_of("%#");
  if (cut != std::string::npos) line.resize(cut);
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

double to_number(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(Errc::ParseError, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
}

long long to_integer(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(Errc::ParseError, "line " + std::to_string(line_no) + ": bad integer '" + s + "'");
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path);
  return in;
}

template <class P, class Convert>
VertexMap<P> build_map(const WeightedGraph& g, const std::map<VertexId, std::vector<double>>& rows, Convert convert) {
  VertexMap<P> u(g.size());
  for (const auto& [id, coords] : rows) {
    const auto x = g.find(id);
    if (!x) fail(Errc::UnknownVertex, "map row for vertex " + std::to_string(id) + " outside the graph");
    u.set(*x, convert(id, coords));
  }
  return u;
}

void need(std::size_t have, std::size_t want, VertexId id) {
  if (have != want)
    fail(Errc::ParseError, "vertex " + std::to_string(id) + ": expected " + std::to_string(want) + " coordinates");
}

}  // namespace

MetricTree read_tree(std::istream& in) {
  std::vector<MetricTree::Edge> edges;
  std::size_t nodes = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() != 3) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'u v length'");
    const long long u = to_integer(t[0], line_no), v = to_integer(t[1], line_no);
    if (u < 0 || v < 0) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": negative node id");
    edges.push_back({std::size_t(u), std::size_t(v), to_number(t[2], line_no)});
    nodes = std::max({nodes, std::size_t(u) + 1, std::size_t(v) + 1});
  }
  return MetricTree(nodes, std::move(edges));
}

MetricTree read_tree_file(const std::string& path) {
  auto in = open(path);
  return read_tree(in);
}

std::map<VertexId, std::vector<double>> read_map_rows(std::istream& in) {
  std::map<VertexId, std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = tokens(line);
    if (t.empty()) continue;
    const VertexId id = to_integer(t[0], line_no);
    std::vector<double> coords;
    for (std::size_t i = 1; i < t.size(); ++i) coords.push_back(to_number(t[i], line_no));
    if (!rows.emplace(id, std::move(coords)).second)
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": duplicate vertex " + std::to_string(id));
  }
  return rows;
}

std::map<VertexId, std::vector<double>> read_map_rows_file(const std::string& path) {
  auto in = open(path);
  return read_map_rows(in);
}

VertexMap<EuclideanSpace::Point> euclidean_map(const WeightedGraph& g, const std::map<VertexId, std::vector<double>>& rows,
                                               std::size_t dim) {
  return build_map<EuclideanSpace::Point>(g, rows, [&](VertexId id, const std::vector<double>& c) {
    need(c.size(), dim, id);
    return c;
  });
}

VertexMap<TreePoint> tree_map(const WeightedGraph& g, const std::map<VertexId, std::vector<double>>& rows,
                              const MetricTree& tree) {
  return build_map<TreePoint>(g, rows, [&](VertexId id, const std::vector<double>& c) {
    need(c.size(), 2, id);
    if (c[0] < 0 || c[0] != std::floor(c[0])) fail(Errc::ParseError, "tree edge id must be a non-negative integer");
    TreePoint p{std::size_t(c[0]), c[1]};
    tree.validate(p);
    return p;
  });
}

VertexMap<PoincareDisk::Point> disk_map(const WeightedGraph& g, const std::map<VertexId, std::vector<double>>& rows) {
  PoincareDisk disk;
  return build_map<PoincareDisk::Point>(g, rows, [&](VertexId id, const std::vector<double>& c) {
    need(c.size(), 2, id);
    PoincareDisk::Point z{c[0], c[1]};
    disk.validate(z);
    return z;
  });
}

void write_map(std::ostream& out, const WeightedGraph& g, const VertexMap<EuclideanSpace::Point>& u) {
  for (Index x = 0; x < g.size(); ++x) {
    if (!u.defined(x)) continue;
    out << g.id(x);
    for (double c : u(x)) out << ' ' << format_double(c);
    out << '\n';
  }
}

void write_map(std::ostream& out, const WeightedGraph& g, const VertexMap<TreePoint>& u) {
  for (Index x = 0; x < g.size(); ++x)
    if (u.defined(x)) out << g.id(x) << ' ' << u(x).edge << ' ' << format_double(u(x).offset) << '\n';
}

void write_map(std::ostream& out, const WeightedGraph& g, const VertexMap<PoincareDisk::Point>& u) {
  for (Index x = 0; x < g.size(); ++x)
    if (u.defined(x))
      out << g.id(x) << ' ' << format_double(u(x).real()) << ' ' << format_double(u(x).imag()) << '\n';
}

}  // namespace wgpt
