#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wgpt/rational.hpp"

namespace wgpt {

using VertexId = std::int64_t;
using Index = std::uint32_t;

/// Compressed adjacency of an undirected graph; every edge appears in both rows.
struct Csr {
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<Index> targets;
  std::vector<double> weights;

  std::size_t rows() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

/// Marks a graph as a finite truncation of a generated infinite family.
struct WindowInfo {
  std::string family;
  VertexId root = 0;
  int core_hops = 0;
  int halo_hops = 0;
};

/// A weighted graph (X, mu, m) restricted to a finite vertex window.
///
/// Vertices whose full neighbourhood lies inside the window are `complete`.
/// For a finite graph every vertex is complete; for generator windows the
/// outermost hop layer is not, and operations that read neighbours of such a
/// vertex raise NeighborOutsideWindow.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return adj_.targets.size() / 2; }

  VertexId id(Index x) const { return ids_[x]; }
  std::span<const VertexId> ids() const { return ids_; }
  std::optional<Index> find(VertexId v) const;
  /// Throws UnknownVertex.
  Index index(VertexId v) const;

  double measure(Index x) const { return m_[x]; }
  std::span<const double> measures() const { return m_; }

  std::span<const Index> neighbors(Index x) const {
    return {adj_.targets.data() + adj_.offsets[x], adj_.offsets[x + 1] - adj_.offsets[x]};
  }
  std::span<const double> weights(Index x) const {
    return {adj_.weights.data() + adj_.offsets[x], adj_.offsets[x + 1] - adj_.offsets[x]};
  }
  /// mu(x, y), zero when not adjacent inside the window.
  double weight(Index x, Index y) const;
  const Csr& adjacency() const { return adj_; }

  bool complete(Index x) const { return complete_[x] != 0; }
  bool all_complete() const;
  std::vector<Index> complete_vertices() const;
  /// Throws NeighborOutsideWindow for an incomplete vertex.
  void require_complete(Index x, const char* context) const;

  /// Sum_y mu(x, y) over the full (possibly infinite) graph when known; for
  /// complete vertices it equals the window row sum.
  double row_sum(Index x) const { return row_sum_[x]; }
  bool row_sum_known(Index x) const { return row_sum_known_[x] != 0; }
  /// Sum_y mu(x, y) restricted to the window.
  double window_row_sum(Index x) const;

  const std::optional<WindowInfo>& window() const { return window_; }

  bool has_exact() const { return !exact_m_.empty(); }
  const Rational& exact_measure(Index x) const { return exact_m_[x]; }
  std::span<const Rational> exact_weights(Index x) const {
    return {exact_w_.data() + adj_.offsets[x], adj_.offsets[x + 1] - adj_.offsets[x]};
  }

  /// Component label per vertex, labels are 0..k-1 in order of first vertex.
  std::vector<Index> components() const;
  bool connected() const;

  /// Same graph with the vertex measure replaced (exact data dropped).
  WeightedGraph with_measure(std::vector<double> m) const;

 private:
  friend class GraphBuilder;

  std::vector<VertexId> ids_;
  std::unordered_map<VertexId, Index> lookup_;
  std::vector<double> m_;
  Csr adj_;
  std::vector<char> complete_;
  std::vector<double> row_sum_;
  std::vector<char> row_sum_known_;
  std::vector<Rational> exact_m_;
  std::vector<Rational> exact_w_;
  std::optional<WindowInfo> window_;
};

/// Assembles and validates a WeightedGraph. Edges are undirected and keyed by
/// the unordered vertex pair; adding the same pair twice with different
/// weights is an error.
class GraphBuilder {
 public:
  GraphBuilder() = default;
  explicit GraphBuilder(bool exact) : exact_(exact) {}

  void add_vertex(VertexId v, double m);
  void add_vertex(VertexId v, const Rational& m);
  void add_edge(VertexId a, VertexId b, double mu);
  void add_edge(VertexId a, VertexId b, const Rational& mu);
  void set_incomplete(VertexId v, double full_row_sum, bool row_sum_known);
  void set_window(WindowInfo info) { window_ = std::move(info); }
  bool has_vertex(VertexId v) const { return lookup_.count(v) != 0; }

  WeightedGraph build() const;

 private:
  struct PendingEdge {
    Index a, b;
    double mu;
    Rational exact;
  };
  Index require(VertexId v) const;

  bool exact_ = false;
  std::vector<VertexId> ids_;
  std::unordered_map<VertexId, Index> lookup_;
  std::vector<double> m_;
  std::vector<Rational> exact_m_;
  std::vector<PendingEdge> edges_;
  std::unordered_map<Index, std::pair<double, bool>> incomplete_;
  std::optional<WindowInfo> window_;
};

/// A real function on the vertices of one graph, with an explicit domain.
/// Reading a value outside the domain throws OutsideDomain.
class ScalarField {
 public:
  ScalarField() = default;
  /// Defined everywhere.
  explicit ScalarField(std::vector<double> values);
  ScalarField(std::vector<double> values, std::vector<char> defined);

  static ScalarField constant(std::size_t n, double c) { return ScalarField(std::vector<double>(n, c)); }
  static ScalarField undefined(std::size_t n);
  static ScalarField from_ids(const WeightedGraph& g, const std::function<double(VertexId)>& fn);

  std::size_t size() const { return values_.size(); }
  bool defined(Index x) const { return defined_[x] != 0; }
  bool fully_defined() const;
  double operator()(Index x) const;
  void set(Index x, double v) {
    values_[x] = v;
    defined_[x] = 1;
  }
  void unset(Index x) {
    values_[x] = std::numeric_limits<double>::quiet_NaN();
    defined_[x] = 0;
  }
  /// Raw storage; entries outside the domain hold NaN.
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
  std::vector<char> defined_;
};

/// Rational-valued counterpart of ScalarField for exact evaluation.
class ExactField {
 public:
  ExactField() = default;
  explicit ExactField(std::vector<Rational> values);
  static ExactField from_ids(const WeightedGraph& g, const std::function<Rational(VertexId)>& fn);

  std::size_t size() const { return values_.size(); }
  bool defined(Index x) const { return defined_[x] != 0; }
  const Rational& operator()(Index x) const;
  void unset(Index x) { defined_[x] = 0; }
  ScalarField to_double() const;

 private:
  std::vector<Rational> values_;
  std::vector<char> defined_;
};

/// Indices of the given vertex ids (UnknownVertex if absent).
std::vector<Index> indices_of(const WeightedGraph& g, std::span<const VertexId> ids);

}  // namespace wgpt
