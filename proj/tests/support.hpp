#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "wgpt/error.hpp"
#include "wgpt/generators.hpp"
#include "wgpt/graph.hpp"

namespace wgpt::test {

/// Error code raised by `fn`, or nullopt if it returns normally.
template <class F>
std::optional<Errc> error_code(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

inline std::vector<double> random_values(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

/// Finite graph with the given ids and unit path edges between consecutive ids.
inline WeightedGraph finite_line(VertexId lo, VertexId hi, double mu = 1.0, double m = 1.0) {
  GraphBuilder b;
  for (VertexId x = lo; x <= hi; ++x) b.add_vertex(x, m);
  for (VertexId x = lo; x < hi; ++x) b.add_edge(x, x + 1, mu);
  return b.build();
}

}  // namespace wgpt::test
