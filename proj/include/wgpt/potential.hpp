#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgpt/graph.hpp"
#include "wgpt/growth_fit.hpp"
#include "wgpt/metric.hpp"

namespace wgpt {

/// Nested finite vertex sets K_0 ⊆ K_1 ⊆ ... with the scale that produced each.
struct Exhaustion {
  std::vector<std::vector<Index>> levels;  // each sorted
  std::vector<double> scales;
  std::string rule;
};

/// K_n = {x : hop(x, o) < n} for each n in `hops` (strictly increasing, n >= 1).
/// WindowTooSmall if a level contains an incomplete vertex.
Exhaustion hop_exhaustion(const WeightedGraph& g, Index o, std::span<const int> hops);
/// K_n = B_{r_n} of rho (certified balls).
Exhaustion ball_exhaustion(const PseudoMetric& rho, std::span<const double> radii);

/// Vertices outside `region` adjacent to it.
std::vector<Index> outer_boundary(const WeightedGraph& g, std::span<const Index> region);

/// Factorization of the Dirichlet problem on one finite region.
///
/// Rows are multiplied by m(x), which turns the restricted Laplacian into the
/// symmetric positive definite matrix n(x) - mu(x, y) whenever every component
/// of the region is joined to the outside.
class DirichletSolver {
 public:
  /// NeighborOutsideWindow for incomplete region vertices; SingularSystem if a
  /// component of the region has no edge leaving it.
  DirichletSolver(const WeightedGraph& g, std::span<const Index> region);
  ~DirichletSolver();
  DirichletSolver(DirichletSolver&&) noexcept;
  DirichletSolver& operator=(DirichletSolver&&) noexcept;

  std::span<const Index> region() const { return region_; }
  std::span<const Index> boundary() const { return boundary_; }
  /// Position of x inside region(), if any.
  std::optional<std::size_t> position(Index x) const;

  /// Solution of Delta f = rhs on the region with f = data on the boundary.
  /// `data` and `rhs` are full-length vertex vectors (rhs may be empty).
  /// The result is defined on region and boundary.
  std::vector<double> solve(std::span<const double> data, std::span<const double> rhs = {}) const;
  /// Solution of the symmetric system A u = b on the region (b indexed like region()).
  std::vector<double> solve_symmetric(std::span<const double> b) const;
  bool used_iterative() const { return iterative_; }

 private:
  struct Impl;
  const WeightedGraph* g_;
  std::vector<Index> region_;
  std::vector<Index> boundary_;
  std::vector<std::int64_t> slot_;  // vertex -> region position or -1
  std::unique_ptr<Impl> impl_;
  bool iterative_ = false;
};

struct DirichletSolution {
  ScalarField f;
  /// max over the region of |Delta f - rhs|.
  double residual = 0.0;
  /// With zero rhs: region values stay within [min, max] of the boundary data.
  bool maximum_principle = true;
};

/// `boundary` must be defined on the outer boundary of `region`.
DirichletSolution solve_dirichlet(const WeightedGraph& g, std::span<const Index> region, const ScalarField& boundary,
                                  const ScalarField* rhs = nullptr);

/// G_K(x, .) with L_K G = delta_x / m(x) on K and G = 0 outside K; symmetric in
/// its two arguments. VertexOutsideSet if x is not in K.
ScalarField dirichlet_green(const WeightedGraph& g, std::span<const Index> region, Index x);

enum class Evidence { recurrent, transient, inconclusive };
const char* to_string(Evidence e);

struct MonotoneSequence {
  std::vector<double> scales;
  std::vector<double> values;
  SequenceDiagnosis diagnosis;
  /// The expected monotonicity held (up to 1e-12 relative).
  bool monotone = true;
  Evidence evidence = Evidence::inconclusive;
};

/// G_n(x, y) along the exhaustion; expected non-decreasing.
MonotoneSequence green_exhaustion(const WeightedGraph& g, const Exhaustion& ex, Index x, Index y);
/// cap_n(x) = E(phi_n) for the equilibrium potential phi_n of {x} in K_n;
/// expected non-increasing. A level without boundary has capacity 0.
MonotoneSequence capacity(const WeightedGraph& g, Index x, const Exhaustion& ex);

struct VolumeTest {
  std::vector<double> radii;
  std::vector<double> volumes;
  IntegralEvidence integral;
  Evidence evidence = Evidence::inconclusive;
};

/// Tabulates m(B_r) and estimates Int r / m(B_r) dr; divergence is recurrence evidence.
VolumeTest volume_recurrence_test(const WeightedGraph& g, const PseudoMetric& rho, std::span<const double> radii);

/// Partial sums Sum_{n <= k} P^n(x, y) for k = 0..steps.
/// WindowTooSmall unless every vertex within steps - 1 hops of x is complete.
std::vector<double> transition_green(const WeightedGraph& g, Index x, Index y, int steps);

struct RoydenLevel {
  ScalarField harmonic;   // h_n
  ScalarField remainder;  // g_n = f - h_n, supported in K_n
  double energy_f = 0.0;
  double energy_g = 0.0;
  double energy_h = 0.0;
  /// E(f) - E(g_n) - E(h_n).
  double residual = 0.0;
};

/// Per level: h_n harmonic on K_n with h_n = f outside K_n, g_n = f - h_n.
std::vector<RoydenLevel> royden_decompose(const WeightedGraph& g, const Exhaustion& ex, const ScalarField& f);

struct HeatOptions {
  /// Largest region handled by the dense matrix exponential.
  std::size_t dense_limit = 3000;
};

/// e^{-t L_K} f with Dirichlet condition outside K; zero outside K.
/// NonPositiveTime for t < 0; t = 0 returns f restricted to K.
ScalarField heat_probe(const WeightedGraph& g, std::span<const Index> region, double t, const ScalarField& f,
                       const HeatOptions& opts = {});

/// e^{-t L_n} 1 (o) along the exhaustion; expected non-decreasing and <= 1.
MonotoneSequence stochastic_completeness_probe(const WeightedGraph& g, const Exhaustion& ex, Index o, double t,
                                               const HeatOptions& opts = {});

struct RecurrenceReport {
  std::optional<VolumeTest> volume;
  MonotoneSequence capacity;
  MonotoneSequence green;
  std::vector<double> transition_sums;
  SequenceDiagnosis transition_diagnosis;
  Evidence verdict = Evidence::inconclusive;
};

/// Combines the volume criterion, capacities, Green's functions and return
/// sums of the walk into one evidence label.
RecurrenceReport recurrence_report(const WeightedGraph& g, Index o, const Exhaustion& ex,
                                   const PseudoMetric* rho = nullptr, std::span<const double> radii = {},
                                   int walk_steps = 0);

}  // namespace wgpt
