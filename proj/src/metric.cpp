#include "wgpt/metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "wgpt/error.hpp"
#include "wgpt/laplacian.hpp"

namespace wgpt {

const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::natural: return "natural";
    case MetricKind::delta: return "delta";
    case MetricKind::delta_truncated: return "delta-trunc";
    case MetricKind::path: return "path";
    case MetricKind::explicit_function: return "explicit";
  }
  return "path";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using HeapItem = std::pair<double, Index>;
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;

// Dijkstra restricted to distances <= cutoff, sparse bookkeeping.
std::unordered_map<Index, double> local_dijkstra(const Csr& adj, const std::vector<double>& len, Index source,
                                                 double cutoff) {
  std::unordered_map<Index, double> dist{{source, 0.0}};
  MinHeap heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
      const double nd = d + len[k];
      if (nd > cutoff) continue;
      const Index y = adj.targets[k];
      const auto it = dist.find(y);
      if (it == dist.end() || nd < it->second) {
        dist[y] = nd;
        heap.emplace(nd, y);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> PseudoMetric::dijkstra(Index source, double cutoff) const {
  const Csr& adj = *adj_;
  std::vector<double> dist(adj.rows(), kInf);
  dist[source] = 0.0;
  MinHeap heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
      const double nd = d + lengths_[k];
      if (nd > cutoff) continue;
      const Index y = adj.targets[k];
      if (nd < dist[y]) {
        dist[y] = nd;
        heap.emplace(nd, y);
      }
    }
  }
  return dist;
}

PseudoMetric PseudoMetric::path(const WeightedGraph& g, std::vector<double> edge_lengths, Index base,
                                MetricKind kind, std::optional<double> declared_jump) {
  const Csr& adj = g.adjacency();
  if (edge_lengths.size() != adj.targets.size()) fail(Errc::UsageError, "edge length vector has wrong size");
  if (base >= g.size()) fail(Errc::UnknownVertex, "base point outside the graph");
  for (Index x = 0; x < g.size(); ++x) {
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
      const double l = edge_lengths[k];
      if (!(l >= 0.0) || !std::isfinite(l)) fail(Errc::UsageError, "edge lengths must be finite and non-negative");
      const Index y = adj.targets[k];
      const auto nb = g.neighbors(y);
      const auto pos = static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), x) - nb.begin());
      if (edge_lengths[adj.offsets[y] + pos] != l) fail(Errc::UsageError, "edge lengths must be symmetric");
    }
  }
  PseudoMetric rho;
  rho.kind_ = kind;
  rho.base_ = base;
  rho.adj_ = std::make_shared<const Csr>(adj);
  rho.complete_.resize(g.size());
  for (Index x = 0; x < g.size(); ++x) rho.complete_[x] = g.complete(x) ? 1 : 0;
  rho.lengths_ = std::move(edge_lengths);
  rho.declared_jump_ = declared_jump;
  rho.truncated_ = !g.all_complete();
  rho.finalize();
  return rho;
}

PseudoMetric PseudoMetric::from_function(const WeightedGraph& g, std::function<double(Index, Index)> distance,
                                         Index base) {
  if (base >= g.size()) fail(Errc::UnknownVertex, "base point outside the graph");
  PseudoMetric rho;
  rho.kind_ = MetricKind::explicit_function;
  rho.base_ = base;
  rho.adj_ = std::make_shared<const Csr>(g.adjacency());
  rho.complete_.resize(g.size());
  for (Index x = 0; x < g.size(); ++x) rho.complete_[x] = g.complete(x) ? 1 : 0;
  rho.fn_ = std::move(distance);
  rho.truncated_ = !g.all_complete();
  rho.finalize();
  return rho;
}

void PseudoMetric::finalize() {
  const Csr& adj = *adj_;
  const std::size_t n = adj.rows();
  if (is_path_metric()) {
    from_base_ = dijkstra(base_, kInf);
    neighbor_dist_.assign(adj.targets.size(), 0.0);
    for (Index x = 0; x < n; ++x) {
      double reach = 0.0;
      for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) reach = std::max(reach, lengths_[k]);
      const auto local = local_dijkstra(adj, lengths_, x, reach);
      for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k)
        neighbor_dist_[k] = local.at(adj.targets[k]);
    }
  } else {
    from_base_.resize(n);
    for (Index x = 0; x < n; ++x) from_base_[x] = fn_(x, base_);
    neighbor_dist_.assign(adj.targets.size(), 0.0);
    for (Index x = 0; x < n; ++x)
      for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) neighbor_dist_[k] = fn_(x, adj.targets[k]);
  }
  double measured = 0.0;
  for (double d : neighbor_dist_) measured = std::max(measured, d);
  jump_ = declared_jump_ ? *declared_jump_ : measured;

  order_.resize(n);
  for (Index x = 0; x < n; ++x) order_[x] = x;
  std::stable_sort(order_.begin(), order_.end(), [&](Index a, Index b) { return from_base_[a] < from_base_[b]; });
  certified_radius_ = kInf;
  for (Index x = 0; x < n; ++x)
    if (!complete_[x]) certified_radius_ = std::min(certified_radius_, from_base_[x]);
}

double PseudoMetric::distance(Index x, Index y) const {
  if (x >= size() || y >= size()) fail(Errc::UnknownVertex, "distance query outside the window");
  if (!is_path_metric()) return fn_(x, y);
  if (x == base_) return from_base_[y];
  if (y == base_) return from_base_[x];
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->rows.find(x);
  if (it == cache_->rows.end()) it = cache_->rows.emplace(x, dijkstra(x, kInf)).first;
  return it->second[y];
}

std::vector<Index> PseudoMetric::ball_unchecked(double r) const {
  std::vector<Index> out;
  for (Index x : order_) {
    if (!in_ball(x, r)) break;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> PseudoMetric::ball(double r) const {
  auto out = ball_unchecked(r);
  for (Index x : out)
    if (!complete_[x])
      fail(Errc::WindowTooSmall, "ball of radius " + std::to_string(r) + " reaches the window boundary (certified up to " +
                                     std::to_string(certified_radius_) + ")");
  return out;
}

PseudoMetric PseudoMetric::rebased(Index new_base) const {
  if (new_base >= size()) fail(Errc::UnknownVertex, "base point outside the graph");
  PseudoMetric rho = *this;
  rho.base_ = new_base;
  rho.cache_ = std::make_shared<Cache>();
  rho.finalize();
  return rho;
}

PseudoMetric natural_metric(const WeightedGraph& g, Index base, double scale) {
  if (!(scale > 0.0)) fail(Errc::UsageError, "metric scale must be positive");
  return PseudoMetric::path(g, std::vector<double>(g.adjacency().targets.size(), scale), base, MetricKind::natural);
}

PseudoMetric path_metric_delta(const WeightedGraph& g, Index base) {
  if (!g.connected()) fail(Errc::DisconnectedWindow, "delta metric needs a connected window");
  const Csr& adj = g.adjacency();
  std::vector<double> deg(g.size());
  for (Index x = 0; x < g.size(); ++x) {
    if (!g.row_sum_known(x))
      fail(Errc::NeighborOutsideWindow, "Deg unknown at window vertex " + std::to_string(g.id(x)));
    deg[x] = weighted_degree(g, x);
  }
  std::vector<double> len(adj.targets.size());
  for (Index x = 0; x < g.size(); ++x)
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k)
      len[k] = 1.0 / std::sqrt(std::max(deg[x], deg[adj.targets[k]]));
  return PseudoMetric::path(g, std::move(len), base, MetricKind::delta);
}

PseudoMetric truncate_metric(const PseudoMetric& rho, double r, const WeightedGraph& g) {
  if (!rho.is_path_metric()) fail(Errc::NotAPathMetric, "truncation needs stored edge lengths");
  if (!(r >= 0.0)) fail(Errc::BadRadii, "truncation radius must be non-negative");
  std::vector<double> len(rho.edge_lengths().begin(), rho.edge_lengths().end());
  for (double& l : len) l = std::min(l, r);
  const MetricKind kind = rho.kind() == MetricKind::delta ? MetricKind::delta_truncated : rho.kind();
  return PseudoMetric::path(g, std::move(len), rho.base(), kind, r);
}

IntrinsicReport verify_intrinsic(const WeightedGraph& g, const PseudoMetric& rho, std::span<const Index> window,
                                 double tol) {
  IntrinsicReport rep;
  rep.tol = tol;
  const Csr& adj = g.adjacency();
  const auto nd = rho.neighbor_distances();
  for (Index x : window) {
    g.require_complete(x, "verify_intrinsic");
    double s = 0.0;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) s += adj.weights[k] * nd[k] * nd[k];
    const double ratio = s / g.measure(x);
    if (ratio > rep.max_ratio || !rep.worst) {
      if (ratio >= rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.worst = x;
      }
    }
    if (ratio > 1.0 + tol) rep.offending.push_back(x);
    ++rep.checked;
  }
  rep.intrinsic = rep.offending.empty();
  return rep;
}

std::vector<double> minimal_measure(const WeightedGraph& g, const PseudoMetric& rho, std::span<const Index> window) {
  std::vector<double> m(g.size(), 0.0);
  const Csr& adj = g.adjacency();
  const auto nd = rho.neighbor_distances();
  for (Index x : window) {
    g.require_complete(x, "minimal_measure");
    double s = 0.0;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) s += adj.weights[k] * nd[k] * nd[k];
    if (!(s > 0.0)) fail(Errc::ZeroRow, "vertex " + std::to_string(g.id(x)) + " has zero minimal measure");
    m[x] = s;
  }
  return m;
}

double jump_size(const WeightedGraph&, const PseudoMetric& rho) { return rho.jump_size(); }

CompatibilityReport verify_compatible(const WeightedGraph& g, const PseudoMetric& rho, std::span<const double> radii) {
  CompatibilityReport rep;
  rep.jump_size = rho.jump_size();
  rep.radii.assign(radii.begin(), radii.end());
  bool ok = std::isfinite(rep.jump_size);
  for (double r : radii) {
    if (!(r >= 0.0)) fail(Errc::BadRadii, "radii must be non-negative");
    rho.ball(r + rep.jump_size);  // coverage check
    double bound = 0.0;
    for (Index x : rho.ball(r)) bound = std::max(bound, weighted_degree(g, x));
    rep.degree_bounds.push_back(bound);
    ok = ok && std::isfinite(bound);
    rep.certified_up_to = std::max(rep.certified_up_to, r);
  }
  rep.compatible = ok;
  return rep;
}

ScalarField cutoff(const PseudoMetric& rho, double r, double R) {
  if (!(r >= 0.0) || !(r < R)) fail(Errc::BadRadii, "cut-off needs 0 <= r < R");
  const auto d = rho.from_base();
  std::vector<double> eta(d.size());
  for (std::size_t x = 0; x < d.size(); ++x) eta[x] = std::min(1.0, std::max(0.0, (R - d[x]) / (R - r)));
  return ScalarField(std::move(eta));
}

CutoffAudit audit_cutoff(const WeightedGraph& g, const PseudoMetric& rho, double r, double R, double tol) {
  const ScalarField eta = cutoff(rho, r, R);
  const double s = rho.jump_size();
  const Csr& adj = g.adjacency();
  CutoffAudit audit;
  for (Index x = 0; x < g.size(); ++x) {
    if (!g.complete(x)) continue;
    double lhs = 0.0;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
      const double grad = eta(x) - eta(adj.targets[k]);
      lhs += adj.weights[k] * grad * grad;
    }
    const bool in_annulus = rho.in_ball(x, R + s) && !(r - s >= 0.0 && rho.from_base()[x] < (r - s) * (1.0 - kBallSlack));
    const double bound = in_annulus ? g.measure(x) / ((R - r) * (R - r)) : 0.0;
    const double excess = lhs - bound;
    if (excess > tol * std::max(bound, lhs)) {
      ++audit.violations;
    }
    if (excess > audit.max_excess || !audit.worst) {
      audit.max_excess = std::max(audit.max_excess, excess);
      audit.worst = x;
    }
    ++audit.checked;
  }
  return audit;
}

}  // namespace wgpt
