#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgpt/graph.hpp"
#include "wgpt/rational.hpp"

namespace wgpt {

/// Delta f(x) = (1/m(x)) Sum_y mu(x,y) (f(x) - f(y)).
double laplacian_apply(const WeightedGraph& g, const ScalarField& f, Index x);
/// Exact counterpart; requires rational graph data (NoExactData otherwise).
Rational laplacian_apply(const WeightedGraph& g, const ExactField& f, Index x);

/// Delta f on every vertex of `region`, in region order.
std::vector<double> laplacian_on(const WeightedGraph& g, const ScalarField& f, std::span<const Index> region);

/// nabla_xy f = f(x) - f(y).
double gradient(const ScalarField& f, Index x, Index y);

struct EnergyReport {
  double value = 0.0;
  /// Only edges inside a truncated window were summed.
  bool truncated = false;
};

/// E(f) = 1/2 Sum_{x,y} mu(x,y) (f(x) - f(y))^2 over window edges.
EnergyReport energy(const WeightedGraph& g, const ScalarField& f);

/// Deg(x) = (1/m(x)) Sum_y mu(x,y); uses the full row sum when known.
double weighted_degree(const WeightedGraph& g, Index x);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LpOptions {
  /// Extra positive vertex weight multiplying m (e.g. rho_1^{-2}).
  std::span<const double> weight = {};
  /// Permits 0 < p < 1, where the result is only a quasi-norm.
  bool quasi = false;
  /// Restricts the sum to these vertices; empty means the whole domain.
  std::span<const Index> subset = {};
};

/// (Sum_x |f(x)|^p m(x) w(x))^{1/p}, or sup |f| for p = infinity.
double lp_norm(const WeightedGraph& g, const ScalarField& f, double p, const LpOptions& opts = {});
/// Sum_x |f(x)|^p m(x) w(x) without the root.
double lp_power_sum(const WeightedGraph& g, const ScalarField& f, double p, const LpOptions& opts = {});

enum class Harmonicity { harmonic, subharmonic, superharmonic, none };
const char* to_string(Harmonicity h);

struct Classification {
  Harmonicity verdict = Harmonicity::none;
  /// Residual matching the verdict: max |Df| (harmonic), max (Df)_+
  /// (subharmonic), max (Df)_- (superharmonic), max |Df| otherwise.
  double residual = 0.0;
  double max_abs = 0.0;
  double max_positive = 0.0;
  double max_negative = 0.0;
  std::optional<Index> witness;
  bool exact = false;
  std::size_t checked = 0;
};

inline constexpr double kDefaultClassifyTol = 1e-9;

Classification classify(const WeightedGraph& g, const ScalarField& f, std::span<const Index> region,
                        double tol = kDefaultClassifyTol);
/// Exact sign pattern of Delta f; residuals are reported as doubles.
Classification classify(const WeightedGraph& g, const ExactField& f, std::span<const Index> region);

/// Checks Sum_y mu(x,y)|f(y)| < infinity at x on the window.
bool in_formal_domain(const WeightedGraph& g, const ScalarField& f, Index x);

}  // namespace wgpt
