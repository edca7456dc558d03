#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wgpt/graph.hpp"

namespace wgpt {

enum class MetricKind { natural, delta, delta_truncated, path, explicit_function };
const char* to_string(MetricKind k);

/// Relative slack used when testing rho(x, o) <= r, so that radii computed in
/// closed form (e.g. k / sqrt 2) include vertices whose path sums round up.
inline constexpr double kBallSlack = 1e-12;

/// A pseudo metric on the vertices of a graph window with a base point o.
///
/// Path metrics are shortest-path closures of positive edge lengths computed
/// by Dijkstra on the window. Inside a truncated window they are upper bounds
/// of the metric of the full graph; they are exact on every ball that avoids
/// the window boundary, which is what ball() certifies.
class PseudoMetric {
 public:
  /// Path metric with lengths aligned with g.adjacency() entries.
  static PseudoMetric path(const WeightedGraph& g, std::vector<double> edge_lengths, Index base,
                           MetricKind kind = MetricKind::path, std::optional<double> declared_jump = std::nullopt);
  /// Arbitrary pseudo metric given pointwise; not a path metric.
  static PseudoMetric from_function(const WeightedGraph& g, std::function<double(Index, Index)> distance,
                                    Index base);

  MetricKind kind() const { return kind_; }
  bool is_path_metric() const { return kind_ != MetricKind::explicit_function; }
  Index base() const { return base_; }
  std::size_t size() const { return complete_.size(); }

  double distance(Index x, Index y) const;
  /// rho(., o) for every window vertex.
  std::span<const double> from_base() const { return from_base_; }
  /// rho(x, y) for every adjacency entry (x, y).
  std::span<const double> neighbor_distances() const { return neighbor_dist_; }
  /// Stored edge lengths (path metrics only).
  std::span<const double> edge_lengths() const { return lengths_; }
  const Csr& adjacency() const { return *adj_; }

  /// Jump size s: sup of rho over edges, or the declared cap of a truncation.
  double jump_size() const { return jump_; }
  /// Largest r such that B_r avoids the window boundary (infinite for finite graphs).
  double certified_radius() const { return certified_radius_; }
  /// Distances on a truncated window only bound the full-graph metric from above.
  bool window_truncated() const { return truncated_; }

  bool in_ball(Index x, double r) const { return from_base_[x] <= r * (1.0 + kBallSlack) + 1e-300; }
  /// B_r = {x : rho(x, o) <= r}; WindowTooSmall if B_r reaches the window boundary.
  std::vector<Index> ball(double r) const;
  /// Same set without the boundary check.
  std::vector<Index> ball_unchecked(double r) const;

  PseudoMetric rebased(Index new_base) const;

 private:
  PseudoMetric() = default;
  void finalize();
  std::vector<double> dijkstra(Index source, double cutoff) const;

  MetricKind kind_ = MetricKind::path;
  Index base_ = 0;
  std::shared_ptr<const Csr> adj_;
  std::vector<char> complete_;
  std::vector<double> lengths_;
  std::function<double(Index, Index)> fn_;
  std::vector<double> from_base_;
  std::vector<double> neighbor_dist_;
  std::vector<Index> order_;  // vertices sorted by rho(., o)
  double jump_ = 0.0;
  std::optional<double> declared_jump_;
  double certified_radius_ = std::numeric_limits<double>::infinity();
  bool truncated_ = false;

  struct Cache {
    std::mutex mutex;
    std::unordered_map<Index, std::vector<double>> rows;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Natural graph distance scaled by `scale` (every edge has length scale).
PseudoMetric natural_metric(const WeightedGraph& g, Index base, double scale = 1.0);

/// Path metric with edge lengths (Deg(x) v Deg(y))^{-1/2}; intrinsic for
/// every graph. DisconnectedWindow if the window is not connected.
PseudoMetric path_metric_delta(const WeightedGraph& g, Index base);

/// Path metric with edge lengths min(length, r); jump size becomes r.
/// NotAPathMetric for metrics without stored edge lengths.
PseudoMetric truncate_metric(const PseudoMetric& rho, double r, const WeightedGraph& g);

struct IntrinsicReport {
  double max_ratio = 0.0;
  std::vector<Index> offending;
  std::optional<Index> worst;
  bool intrinsic = true;
  std::size_t checked = 0;
  double tol = 0.0;
};

inline constexpr double kDefaultIntrinsicTol = 1e-12;

/// Sum_y mu(x,y) rho^2(x,y) <= m(x) for every x in `window` (relative tol).
IntrinsicReport verify_intrinsic(const WeightedGraph& g, const PseudoMetric& rho, std::span<const Index> window,
                                 double tol = kDefaultIntrinsicTol);

/// m(x) = Sum_y mu(x,y) rho^2(x,y); ZeroRow for a vertex with no edges.
std::vector<double> minimal_measure(const WeightedGraph& g, const PseudoMetric& rho, std::span<const Index> window);

double jump_size(const WeightedGraph& g, const PseudoMetric& rho);

struct CompatibilityReport {
  double jump_size = 0.0;
  std::vector<double> radii;
  /// max Deg on B_r per radius.
  std::vector<double> degree_bounds;
  bool compatible = false;
  /// Largest checked radius; compatibility is certified on [0, this].
  double certified_up_to = 0.0;
};

/// Finite jump size and bounded Deg on each B_r for the given radii.
/// WindowTooSmall when B_{r+s} reaches the window boundary.
CompatibilityReport verify_compatible(const WeightedGraph& g, const PseudoMetric& rho, std::span<const double> radii);

/// eta = 1 ^ ((R - rho(., o)) / (R - r))_+ ; BadRadii unless 0 <= r < R.
ScalarField cutoff(const PseudoMetric& rho, double r, double R);

struct CutoffAudit {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;
  std::optional<Index> worst;
};

/// Vertexwise check of Sum_y mu(x,y)|nabla eta|^2 <= m(x)/(R-r)^2 1_{B_{R+s} \ B_{r-s}}(x)
/// on every complete vertex.
CutoffAudit audit_cutoff(const WeightedGraph& g, const PseudoMetric& rho, double r, double R, double tol = 1e-12);

}  // namespace wgpt
