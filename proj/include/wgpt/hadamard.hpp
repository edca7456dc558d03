#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wgpt/error.hpp"
#include "wgpt/graph.hpp"
#include "wgpt/laplacian.hpp"

namespace wgpt {

/// Finitely supported probability measure on a point type.
template <class P>
struct PointMeasure {
  std::vector<std::pair<P, double>> atoms;

  void add(P p, double w) { atoms.emplace_back(std::move(p), w); }
  double total() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.second;
    return s;
  }
  /// Rescales weights to sum 1; EmptyMeasure when nothing carries mass.
  void normalize() {
    const double t = total();
    if (atoms.empty() || !(t > 0)) fail(Errc::EmptyMeasure, "measure has no mass");
    for (auto& a : atoms) a.second /= t;
  }
};

inline constexpr double kMeasureNormTol = 1e-12;

template <class P>
void require_probability(const PointMeasure<P>& nu) {
  if (nu.atoms.empty()) fail(Errc::EmptyMeasure, "empty measure");
  for (const auto& a : nu.atoms)
    if (!(a.second > 0)) fail(Errc::UsageError, "atom weights must be positive");
  if (std::abs(nu.total() - 1.0) > kMeasureNormTol) fail(Errc::UsageError, "measure is not normalized");
}

/// A complete CAT(0) space exposing what the harmonic-map machinery needs.
template <class S>
concept HadamardSpace = requires(const S& s, const typename S::Point& p, const PointMeasure<typename S::Point>& nu) {
  { s.distance(p, p) } -> std::convertible_to<double>;
  { s.geodesic(p, p, 0.5) } -> std::same_as<typename S::Point>;
  { s.barycenter(nu) } -> std::same_as<typename S::Point>;
  { s.name() } -> std::convertible_to<std::string>;
};

/// Weighted variance y -> Sum w_i d^2(y, y_i).
template <HadamardSpace S>
double variance(const S& space, const typename S::Point& y, const PointMeasure<typename S::Point>& nu) {
  double v = 0.0;
  for (const auto& [p, w] : nu.atoms) {
    const double d = space.distance(y, p);
    v += w * d * d;
  }
  return v;
}

// Models ---------------------------------------------------------------------

class EuclideanSpace {
 public:
  using Point = std::vector<double>;
  explicit EuclideanSpace(std::size_t dim) : dim_(dim) {}
  std::size_t dim() const { return dim_; }
  std::string name() const { return "euclidean:" + std::to_string(dim_); }
  double distance(const Point& a, const Point& b) const;
  Point geodesic(const Point& a, const Point& b, double t) const;
  /// Sum w_i y_i.
  Point barycenter(const PointMeasure<Point>& nu) const;

 private:
  std::size_t dim_;
};

/// Point of a metric tree: position `offset` along edge `edge`, measured from
/// the edge's first endpoint.
struct TreePoint {
  std::size_t edge = 0;
  double offset = 0.0;
};

/// Finite combinatorial tree with positive edge lengths.
class MetricTree {
 public:
  using Point = TreePoint;
  struct Edge {
    std::size_t u, v;
    double length;
  };

  /// InvalidGraph unless the edges form a tree on nodes 0..n-1 with positive lengths.
  MetricTree(std::size_t nodes, std::vector<Edge> edges);

  std::string name() const { return "tree"; }
  std::size_t node_count() const { return parent_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  /// Throws UsageError for an invalid edge id or an offset outside [0, length].
  void validate(const Point& p) const;
  /// A canonical point at a node.
  Point node_point(std::size_t node) const;
  double node_distance(std::size_t a, std::size_t b) const;

  double distance(const Point& a, const Point& b) const;
  Point geodesic(const Point& a, const Point& b, double t) const;
  /// Convex descent over edges: minimise the edge quadratic, move through a
  /// node along the steepest descending edge, stop at a local (hence global) minimum.
  Point barycenter(const PointMeasure<Point>& nu) const;
  /// Minimum over every edge of the variance restricted to that edge.
  Point barycenter_exhaustive(const PointMeasure<Point>& nu) const;
  /// d(a, z) + d(z, b) - d(a, b) <= tol.
  bool on_geodesic(const Point& a, const Point& b, const Point& z, double tol = 1e-9) const;

  /// The tripod: three edges of the given length from centre node 0.
  static MetricTree tripod(double length = 1.0);

 private:
  double to_node(const Point& p, std::size_t node) const;
  std::size_t lca(std::size_t a, std::size_t b) const;
  std::vector<std::size_t> node_path(std::size_t a, std::size_t b) const;
  double edge_minimizer(std::size_t e, const PointMeasure<Point>& nu, double* value) const;

  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> incident_;  // (neighbour, edge)
  std::vector<std::size_t> parent_, parent_edge_, depth_;
  std::vector<double> root_dist_;
  std::vector<std::vector<std::size_t>> up_;  // binary lifting table
};

/// Poincare disk model of the hyperbolic plane (curvature -1).
class PoincareDisk {
 public:
  using Point = std::complex<double>;
  std::string name() const { return "disk"; }
  /// UsageError unless |z| < 1.
  void validate(const Point& z) const;
  double distance(const Point& a, const Point& b) const;
  Point geodesic(const Point& a, const Point& b, double t) const;
  /// Tangent vector at `base` (in the orthonormal frame carried from the
  /// origin by the isometry moving base to 0) pointing to `target`.
  Point log(const Point& base, const Point& target) const;
  Point exp(const Point& base, const Point& v) const;
  /// Karcher iteration y <- exp_y(Sum w_i log_y y_i) with backtracking,
  /// stopping when the variance gradient has norm <= 1e-12.
  Point barycenter(const PointMeasure<Point>& nu) const;
};

// Harmonic maps ----------------------------------------------------------------

/// Random-walk measure P_x(y) = mu(x,y) / Sum_z mu(x,z) as (vertex, weight) pairs.
/// IsolatedVertex for a vertex without edges; NeighborOutsideWindow if x is incomplete.
std::vector<std::pair<Index, double>> random_walk_measure(const WeightedGraph& g, Index x);

/// Vertex-indexed map into a Hadamard space, defined on a subset of the window.
template <class P>
class VertexMap {
 public:
  VertexMap() = default;
  explicit VertexMap(std::size_t n) : values_(n), defined_(n, 0) {}
  VertexMap(std::size_t n, const P& c) : values_(n, c), defined_(n, 1) {}

  std::size_t size() const { return values_.size(); }
  bool defined(Index x) const { return x < defined_.size() && defined_[x] != 0; }
  const P& operator()(Index x) const {
    if (!defined(x)) fail(Errc::OutsideDomain, "map undefined at vertex index " + std::to_string(x));
    return values_[x];
  }
  void set(Index x, P p) {
    values_[x] = std::move(p);
    defined_[x] = 1;
  }

 private:
  std::vector<P> values_;
  std::vector<char> defined_;
};

/// u_* P_x.
template <HadamardSpace S>
PointMeasure<typename S::Point> pushforward(const WeightedGraph& g, const VertexMap<typename S::Point>& u, Index x) {
  PointMeasure<typename S::Point> nu;
  for (const auto& [y, w] : random_walk_measure(g, x)) {
    if (!u.defined(y))
      fail(Errc::NeighborOutsideWindow, "map undefined at neighbour " + std::to_string(g.id(y)));
    nu.add(u(y), w);
  }
  return nu;
}

struct HarmonicMapCheck {
  bool harmonic = true;
  double max_defect = 0.0;
  /// d(u(x), b(u_* P_x)) per region vertex, in region order.
  std::vector<double> defects;
  std::optional<Index> worst;
};

template <HadamardSpace S>
HarmonicMapCheck is_harmonic_map(const WeightedGraph& g, const S& space, const VertexMap<typename S::Point>& u,
                                 std::span<const Index> region, double tol) {
  HarmonicMapCheck out;
  for (Index x : region) {
    const auto b = space.barycenter(pushforward<S>(g, u, x));
    const double d = space.distance(u(x), b);
    out.defects.push_back(d);
    if (d > out.max_defect || !out.worst) {
      out.max_defect = std::max(out.max_defect, d);
      out.worst = x;
    }
  }
  out.harmonic = out.max_defect <= tol;
  return out;
}

struct HarmonicMapOptions {
  std::size_t max_iters = 200000;
  /// Stop when the largest displacement of a sweep is at most this.
  double tol = 1e-13;
  /// Sequential in-place updates instead of synchronous Jacobi sweeps.
  bool gauss_seidel = false;
  /// Distribute Jacobi sweeps over OpenMP threads.
  bool parallel = true;
  /// Raise MaxItersExceeded instead of returning the last iterate.
  bool throw_on_stall = false;
};

template <class P>
struct HarmonicMapResult {
  VertexMap<P> map;
  std::size_t iterations = 0;
  double last_displacement = 0.0;
  bool converged = false;
};

/// Barycenter relaxation u <- b(u_* P_x) on `region` with `boundary` fixed.
/// The boundary map must be defined on every neighbour of the region outside
/// it; region vertices start from the boundary value found first by
/// breadth-first search.
template <HadamardSpace S>
HarmonicMapResult<typename S::Point> solve_harmonic_map(const WeightedGraph& g, const S& space,
                                                        std::span<const Index> region,
                                                        const VertexMap<typename S::Point>& boundary,
                                                        const HarmonicMapOptions& opts = {}) {
  using P = typename S::Point;
  std::vector<Index> reg(region.begin(), region.end());
  std::sort(reg.begin(), reg.end());
  reg.erase(std::unique(reg.begin(), reg.end()), reg.end());
  std::vector<char> in_region(g.size(), 0);
  for (Index x : reg) {
    g.require_complete(x, "harmonic map");
    in_region[x] = 1;
  }
  VertexMap<P> u(g.size());
  for (Index x = 0; x < g.size(); ++x)
    if (!in_region[x] && boundary.defined(x)) u.set(x, boundary(x));
  for (Index x : reg)
    for (Index y : g.neighbors(x))
      if (!in_region[y] && !u.defined(y))
        fail(Errc::OutsideDomain, "boundary map missing at vertex " + std::to_string(g.id(y)));

  // Initial values: spread boundary values inward by breadth-first search.
  std::vector<Index> frontier;
  for (Index x = 0; x < g.size(); ++x)
    if (u.defined(x)) frontier.push_back(x);
  if (frontier.empty() && !reg.empty()) fail(Errc::OutsideDomain, "harmonic map needs boundary values");
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const Index x = frontier[i];
    for (Index y : g.neighbors(x)) {
      if (in_region[y] && !u.defined(y)) {
        u.set(y, u(x));
        frontier.push_back(y);
      }
    }
  }
  for (Index x : reg)
    if (!u.defined(x)) fail(Errc::SingularSystem, "region component without boundary");
  // Surface isolated vertices and missing neighbours before any parallel sweep.
  for (Index x : reg) (void)pushforward<S>(g, u, x);

  HarmonicMapResult<P> res;
  std::vector<P> next(reg.size());
  std::vector<double> moved(reg.size());
  const auto n = static_cast<std::ptrdiff_t>(reg.size());
  for (res.iterations = 0; res.iterations < opts.max_iters;) {
    ++res.iterations;
    double disp = 0.0;
    if (opts.gauss_seidel) {
      for (Index x : reg) {
        P b = space.barycenter(pushforward<S>(g, u, x));
        disp = std::max(disp, space.distance(b, u(x)));
        u.set(x, std::move(b));
      }
    } else {
      if (opts.parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
          next[std::size_t(i)] = space.barycenter(pushforward<S>(g, u, reg[std::size_t(i)]));
          moved[std::size_t(i)] = space.distance(next[std::size_t(i)], u(reg[std::size_t(i)]));
        }
      } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
          next[std::size_t(i)] = space.barycenter(pushforward<S>(g, u, reg[std::size_t(i)]));
          moved[std::size_t(i)] = space.distance(next[std::size_t(i)], u(reg[std::size_t(i)]));
        }
      }
      for (std::size_t i = 0; i < reg.size(); ++i) {
        disp = std::max(disp, moved[i]);
        u.set(reg[i], next[i]);
      }
    }
    res.last_displacement = disp;
    if (disp <= opts.tol) {
      res.converged = true;
      break;
    }
  }
  if (reg.empty()) res.converged = true;
  if (!res.converged && opts.throw_on_stall)
    fail(Errc::MaxItersExceeded, "no convergence after " + std::to_string(res.iterations) + " sweeps (displacement " +
                                     std::to_string(res.last_displacement) + ")");
  res.map = std::move(u);
  return res;
}

/// 1/2 Sum_{x,y} mu(x,y) d^2(u(x), u(y)) over window edges.
template <HadamardSpace S>
double map_energy(const WeightedGraph& g, const S& space, const VertexMap<typename S::Point>& u) {
  double e = 0.0;
  for (Index x = 0; x < g.size(); ++x) {
    const auto nb = g.neighbors(x);
    if (nb.empty()) continue;
    if (!u.defined(x)) fail(Errc::NeighborOutsideWindow, "map undefined at edge endpoint " + std::to_string(g.id(x)));
    const auto w = g.weights(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (!u.defined(nb[k]))
        fail(Errc::NeighborOutsideWindow, "map undefined at edge endpoint " + std::to_string(g.id(nb[k])));
      const double d = space.distance(u(x), u(nb[k]));
      e += w[k] * d * d;
    }
  }
  return 0.5 * e;
}

/// x -> d(u(x), y) wherever u is defined.
template <HadamardSpace S>
ScalarField distance_field(const S& space, const VertexMap<typename S::Point>& u, const typename S::Point& y) {
  ScalarField f = ScalarField::undefined(u.size());
  for (Index x = 0; x < u.size(); ++x)
    if (u.defined(x)) f.set(x, space.distance(u(x), y));
  return f;
}

/// Classification of x -> d(u(x), y) on the region; a harmonic u makes it subharmonic.
template <HadamardSpace S>
Classification subharmonicity_audit(const WeightedGraph& g, const S& space, const VertexMap<typename S::Point>& u,
                                    const typename S::Point& y, std::span<const Index> region,
                                    double tol = kDefaultClassifyTol) {
  return classify(g, distance_field(space, u, y), region, tol);
}

/// Sum w_i d(y_i, y0) - d(b(nu), y0); non-negative in a Hadamard space.
template <HadamardSpace S>
double jensen_audit(const S& space, const PointMeasure<typename S::Point>& nu, const typename S::Point& y0) {
  require_probability(nu);
  double s = 0.0;
  for (const auto& [p, w] : nu.atoms) s += w * space.distance(p, y0);
  return s - space.distance(space.barycenter(nu), y0);
}

}  // namespace wgpt
