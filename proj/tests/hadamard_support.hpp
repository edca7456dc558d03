#pragma once

// Samplers and solved-map instances shared by the Hadamard unit tests and the
// acceptance binary.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "wgpt/generators.hpp"
#include "wgpt/hadamard.hpp"
#include "wgpt/laplacian.hpp"

namespace wgpt::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline EuclideanSpace::Point random_point(const EuclideanSpace& s, Rng& rng) {
  EuclideanSpace::Point p(s.dim());
  for (double& c : p) c = uniform(rng, -5.0, 5.0);
  return p;
}

inline TreePoint random_point(const MetricTree& t, Rng& rng) {
  const std::size_t e = std::uniform_int_distribution<std::size_t>(0, t.edges().size() - 1)(rng);
  return {e, uniform(rng, 0.0, t.edges()[e].length)};
}

inline std::complex<double> random_point(const PoincareDisk&, Rng& rng) {
  const double r = 0.95 * std::sqrt(uniform(rng, 0.0, 1.0));
  return std::polar(r, uniform(rng, 0.0, 2.0 * std::numbers::pi));
}

/// Random recursive tree on `nodes` nodes with edge lengths in [0.2, 2].
inline MetricTree random_metric_tree(std::size_t nodes, Rng& rng) {
  std::vector<MetricTree::Edge> edges;
  for (std::size_t i = 1; i < nodes; ++i)
    edges.push_back({std::uniform_int_distribution<std::size_t>(0, i - 1)(rng), i, uniform(rng, 0.2, 2.0)});
  return MetricTree(nodes, std::move(edges));
}

template <class S>
PointMeasure<typename S::Point> random_measure(const S& s, Rng& rng, std::size_t max_atoms = 6) {
  PointMeasure<typename S::Point> nu;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_atoms)(rng);
  for (std::size_t i = 0; i < k; ++i) nu.add(random_point(s, rng), uniform(rng, 0.05, 1.0));
  nu.normalize();
  return nu;
}

/// Probe points for barycenter optimality: half uniform over the space, half
/// on short geodesics leaving b, where a wrong minimiser shows first.
template <class S>
std::size_t barycenter_probe_violations(const S& s, const PointMeasure<typename S::Point>& nu,
                                        const typename S::Point& b, std::size_t probes, Rng& rng, double tol = 1e-9) {
  const double vb = variance(s, b, nu);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < probes; ++i) {
    typename S::Point z = random_point(s, rng);
    if (i % 2 == 1) z = s.geodesic(b, z, std::pow(10.0, -uniform(rng, 0.0, 6.0)));
    if (variance(s, z, nu) < vb - tol) ++bad;
  }
  return bad;
}

/// A graph with a region and boundary vertices, the latter of degree one.
struct MapDomain {
  WeightedGraph graph;
  std::vector<Index> region;
  std::vector<Index> boundary;
};

/// Random path (even seeds) or random tree (odd seeds); leaves form the boundary.
inline MapDomain random_map_domain(int n, std::uint64_t seed) {
  MapDomain d;
  if (seed % 2 == 0) {
    Rng rng(seed);
    GraphBuilder b;
    for (int i = 0; i < n; ++i) b.add_vertex(i, uniform(rng, 0.1, 2.0));
    for (int i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1, uniform(rng, 0.1, 2.0));
    d.graph = b.build();
  } else {
    RandomGraphOptions opts;
    opts.mu_min = 0.1;
    d.graph = random_tree(n, seed, opts);
  }
  for (Index x = 0; x < d.graph.size(); ++x)
    (d.graph.neighbors(x).size() <= 1 ? d.boundary : d.region).push_back(x);
  return d;
}

template <class S>
VertexMap<typename S::Point> random_boundary(const S& s, const MapDomain& d, Rng& rng) {
  VertexMap<typename S::Point> u(d.graph.size());
  for (Index x : d.boundary) u.set(x, random_point(s, rng));
  return u;
}

/// Largest violation of E(d(u, y)) <= map_energy(u) over `samples` random y.
template <class S>
double energy_comparison_excess(const WeightedGraph& g, const S& s, const VertexMap<typename S::Point>& u,
                                std::size_t samples, Rng& rng) {
  const double e_map = map_energy(g, s, u);
  double worst = -kInfinity;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto y = random_point(s, rng);
    const double e = energy(g, distance_field(s, u, y)).value;
    worst = std::max(worst, e - e_map);
  }
  return worst;
}

}  // namespace wgpt::test
