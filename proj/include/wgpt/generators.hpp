#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wgpt/graph.hpp"
#include "wgpt/rational.hpp"

namespace wgpt {

/// Local data of one vertex of an infinite graph family.
struct LocalData {
  Rational m;
  std::vector<std::pair<VertexId, Rational>> neighbors;
};

/// Deterministic producer of hop windows of a (possibly infinite) graph.
///
/// Windows are built by breadth-first search from the root; enlarging a
/// window never changes data produced for a smaller one because every value
/// comes from the local rule alone.
class GraphGenerator {
 public:
  using Rule = std::function<LocalData(VertexId)>;

  GraphGenerator(std::string name, VertexId root, Rule rule, bool exact = true);

  const std::string& name() const { return name_; }
  VertexId root() const { return root_; }
  LocalData local(VertexId v) const { return rule_(v); }

  /// Optional caller-supplied bound on Sum_y mu(x, y); windows whose rows
  /// exceed it raise FormalDomainViolation.
  void set_row_sum_bound(std::function<double(VertexId)> bound) { row_sum_bound_ = std::move(bound); }

  /// Vertices within core_hops + halo_hops hops of the root. Vertices strictly
  /// inside that radius are complete.
  WeightedGraph window(int core_hops, int halo_hops = 1) const;

 private:
  std::string name_;
  VertexId root_;
  Rule rule_;
  bool exact_;
  std::function<double(VertexId)> row_sum_bound_;
};

/// Z with constant edge weight and constant measure.
GraphGenerator line_generator(const Rational& mu = 1, const Rational& m = 1);

/// The line graph with mu(x, x+1) = 2^{1 - max(|x|, |x+1|)} and
/// m(x) = (|x|+1)^{-2} 2^{-|x|}; it has finite total measure and carries the
/// non-constant harmonic function sign(x)(2^{|x|} - 1).
GraphGenerator decaying_line_generator();

/// Rooted binary tree in heap numbering: root 0, children 2k+1 and 2k+2.
GraphGenerator binary_tree_generator(const Rational& mu = 1, const Rational& m = 1);

/// Identifies `attachment_root` of `attachment` with `base_vertex` of `base`.
/// Other attachment vertices v are renamed to id_offset + v.
GraphGenerator glue_generators(const GraphGenerator& base, VertexId base_vertex, const GraphGenerator& attachment,
                               VertexId id_offset);

/// Identifier offset used for attachments of the infinite-volume example.
inline constexpr VertexId kAttachmentIdOffset = 1'000'000'000;

/// The harmonic function sign(x)(2^{|x|} - 1) of the decaying line graph.
Rational decaying_line_harmonic(VertexId x);

struct ExampleInstance {
  WeightedGraph graph;
  ScalarField f;
  ExactField f_exact;
};

/// Window |x| <= N+1 of the decaying line graph with its harmonic function.
ExampleInstance finite_volume_example(int n);

/// The decaying line graph with `attachment` glued at x = 0, window of hop
/// radius n + 1; f is extended by zero to the attachment.
ExampleInstance infinite_volume_example(int n, const GraphGenerator& attachment);

// Finite graphs -------------------------------------------------------------

/// Path 0 - 1 - ... - (n-1) with constant weights.
WeightedGraph path_graph(int n, double mu = 1.0, double m = 1.0);

struct RandomGraphOptions {
  double mu_min = 1e-3, mu_max = 2.0;
  double m_min = 1e-3, m_max = 2.0;
  double extra_edge_probability = 0.05;
};

/// Random spanning tree plus random chords; always connected.
WeightedGraph random_connected_graph(int n, std::uint64_t seed, const RandomGraphOptions& opts = {});

/// Random recursive tree on n vertices.
WeightedGraph random_tree(int n, std::uint64_t seed, const RandomGraphOptions& opts = {});

}  // namespace wgpt
