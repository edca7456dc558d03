#include "wgpt/potential.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "wgpt/error.hpp"
#include "wgpt/kernels.hpp"
#include "wgpt/laplacian.hpp"

namespace wgpt {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

std::vector<Index> sorted_unique(std::span<const Index> v) {
  std::vector<Index> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> hop_distances(const WeightedGraph& g, Index o) {
  std::vector<int> hop(g.size(), -1);
  std::deque<Index> queue{o};
  hop[o] = 0;
  while (!queue.empty()) {
    const Index x = queue.front();
    queue.pop_front();
    for (Index y : g.neighbors(x)) {
      if (hop[y] < 0) {
        hop[y] = hop[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return hop;
}

bool contains(std::span<const Index> sorted, Index x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

Evidence evidence_from(const SequenceDiagnosis& d) {
  switch (d.trend) {
    case SequenceTrend::growing: return Evidence::recurrent;
    case SequenceTrend::saturating: return Evidence::transient;
    default: return Evidence::inconclusive;
  }
}

bool levels_stationary(const Exhaustion& ex) {
  for (std::size_t i = 1; i < ex.levels.size(); ++i)
    if (ex.levels[i] != ex.levels[0]) return false;
  return true;
}

bool check_monotone(std::span<const double> v, bool increasing) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double slack = 1e-12 * std::max(std::abs(v[i]), std::abs(v[i - 1]));
    if (increasing ? v[i] < v[i - 1] - slack : v[i] > v[i - 1] + slack) return false;
  }
  return true;
}

}  // namespace

const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::recurrent: return "recurrent-evidence";
    case Evidence::transient: return "transient-evidence";
    case Evidence::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Exhaustion hop_exhaustion(const WeightedGraph& g, Index o, std::span<const int> hops) {
  if (o >= g.size()) fail(Errc::UnknownVertex, "exhaustion base outside the graph");
  const auto hop = hop_distances(g, o);
  Exhaustion ex;
  ex.rule = "hops";
  int prev = 0;
  for (int n : hops) {
    if (n <= prev) fail(Errc::UsageError, "hop schedule must be strictly increasing and positive");
    prev = n;
    std::vector<Index> level;
    for (Index x = 0; x < g.size(); ++x) {
      if (hop[x] >= 0 && hop[x] < n) {
        if (!g.complete(x))
          fail(Errc::WindowTooSmall, "hop ball of radius " + std::to_string(n) + " reaches the window boundary");
        level.push_back(x);
      }
    }
    ex.levels.push_back(std::move(level));
    ex.scales.push_back(n);
  }
  return ex;
}

Exhaustion ball_exhaustion(const PseudoMetric& rho, std::span<const double> radii) {
  Exhaustion ex;
  ex.rule = "balls";
  double prev = -1.0;
  for (double r : radii) {
    if (!(r > prev)) fail(Errc::UsageError, "ball schedule must be strictly increasing");
    prev = r;
    ex.levels.push_back(rho.ball(r));
    ex.scales.push_back(r);
  }
  return ex;
}

std::vector<Index> outer_boundary(const WeightedGraph& g, std::span<const Index> region) {
  const auto sorted = sorted_unique(region);
  std::vector<Index> out;
  for (Index x : sorted)
    for (Index y : g.neighbors(x))
      if (!contains(sorted, y)) out.push_back(y);
  return sorted_unique(out);
}

struct DirichletSolver::Impl {
  SpMat a;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
};

DirichletSolver::~DirichletSolver() = default;
DirichletSolver::DirichletSolver(DirichletSolver&&) noexcept = default;
DirichletSolver& DirichletSolver::operator=(DirichletSolver&&) noexcept = default;

DirichletSolver::DirichletSolver(const WeightedGraph& g, std::span<const Index> region)
    : g_(&g), region_(sorted_unique(region)), impl_(std::make_unique<Impl>()) {
  slot_.assign(g.size(), -1);
  for (std::size_t i = 0; i < region_.size(); ++i) {
    const Index x = region_[i];
    if (x >= g.size()) fail(Errc::UnknownVertex, "region vertex outside the graph");
    g.require_complete(x, "dirichlet");
    slot_[x] = std::int64_t(i);
  }
  boundary_ = outer_boundary(g, region_);

  // Every component of the region must leak to the outside.
  std::vector<char> seen(region_.size(), 0);
  for (std::size_t s = 0; s < region_.size(); ++s) {
    if (seen[s]) continue;
    bool leaks = false;
    std::deque<std::size_t> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      const Index x = region_[queue.front()];
      queue.pop_front();
      const auto nb = g.neighbors(x);
      const auto w = g.weights(x);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (w[k] <= 0) continue;
        const auto j = slot_[nb[k]];
        if (j < 0) {
          leaks = true;
        } else if (!seen[std::size_t(j)]) {
          seen[std::size_t(j)] = 1;
          queue.push_back(std::size_t(j));
        }
      }
    }
    if (!leaks)
      fail(Errc::SingularSystem, "component of vertex " + std::to_string(g.id(region_[s])) +
                                     " touches no boundary vertex");
  }

  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < region_.size(); ++i) {
    const Index x = region_[i];
    trip.emplace_back(int(i), int(i), g.row_sum(x));
    const auto nb = g.neighbors(x);
    const auto w = g.weights(x);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (const auto j = slot_[nb[k]]; j >= 0) trip.emplace_back(int(i), int(j), -w[k]);
  }
  const auto n = Eigen::Index(region_.size());
  impl_->a.resize(n, n);
  impl_->a.setFromTriplets(trip.begin(), trip.end());
  impl_->ldlt.compute(impl_->a);
  if (impl_->ldlt.info() != Eigen::Success) {
    iterative_ = true;
    impl_->cg.setTolerance(1e-12);
    impl_->cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * n));
    impl_->cg.compute(impl_->a);
  }
}

std::optional<std::size_t> DirichletSolver::position(Index x) const {
  if (x >= slot_.size() || slot_[x] < 0) return std::nullopt;
  return std::size_t(slot_[x]);
}

std::vector<double> DirichletSolver::solve_symmetric(std::span<const double> b) const {
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), Eigen::Index(b.size()));
  Eigen::VectorXd u;
  if (!iterative_) {
    u = impl_->ldlt.solve(rhs);
  } else {
    u = impl_->cg.solve(rhs);
    if (impl_->cg.info() != Eigen::Success) fail(Errc::SingularSystem, "conjugate gradient did not converge");
  }
  return {u.data(), u.data() + u.size()};
}

std::vector<double> DirichletSolver::solve(std::span<const double> data, std::span<const double> rhs) const {
  const WeightedGraph& g = *g_;
  if (data.size() != g.size() || (!rhs.empty() && rhs.size() != g.size()))
    fail(Errc::UsageError, "dirichlet data must cover the window");
  std::vector<double> b(region_.size(), 0.0);
  for (std::size_t i = 0; i < region_.size(); ++i) {
    const Index x = region_[i];
    double acc = rhs.empty() ? 0.0 : g.measure(x) * rhs[x];
    const auto nb = g.neighbors(x);
    const auto w = g.weights(x);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (slot_[nb[k]] < 0) acc += w[k] * data[nb[k]];
    b[i] = acc;
  }
  const auto u = solve_symmetric(b);
  std::vector<double> out(g.size(), std::numeric_limits<double>::quiet_NaN());
  for (Index y : boundary_) out[y] = data[y];
  for (std::size_t i = 0; i < region_.size(); ++i) out[region_[i]] = u[i];
  return out;
}

DirichletSolution solve_dirichlet(const WeightedGraph& g, std::span<const Index> region, const ScalarField& boundary,
                                  const ScalarField* rhs) {
  DirichletSolver solver(g, region);
  std::vector<double> data(g.size(), 0.0);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Index y : solver.boundary()) {
    if (!boundary.defined(y))
      fail(Errc::OutsideDomain, "boundary data missing at vertex " + std::to_string(g.id(y)));
    data[y] = boundary(y);
    lo = std::min(lo, data[y]);
    hi = std::max(hi, data[y]);
  }
  std::vector<double> rhs_values;
  if (rhs) {
    rhs_values.resize(g.size(), 0.0);
    for (Index x : solver.region()) rhs_values[x] = (*rhs)(x);
  }
  const auto values = solver.solve(data, rhs_values);
  std::vector<char> mask(g.size(), 0);
  for (Index x : solver.region()) mask[x] = 1;
  for (Index y : solver.boundary()) mask[y] = 1;
  DirichletSolution sol{ScalarField(values, mask)};
  const auto lap = laplacian_on(g, sol.f, solver.region());
  for (std::size_t i = 0; i < lap.size(); ++i)
    sol.residual = std::max(sol.residual, std::abs(lap[i] - (rhs ? rhs_values[solver.region()[i]] : 0.0)));
  if (!rhs) {
    const double slack = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
    for (Index x : solver.region())
      if (values[x] < lo - slack || values[x] > hi + slack) sol.maximum_principle = false;
  }
  return sol;
}

ScalarField dirichlet_green(const WeightedGraph& g, std::span<const Index> region, Index x) {
  const auto sorted = sorted_unique(region);
  if (!contains(sorted, x)) fail(Errc::VertexOutsideSet, "source vertex is not in the region");
  DirichletSolver solver(g, sorted);
  std::vector<double> b(solver.region().size(), 0.0);
  b[*solver.position(x)] = 1.0;
  const auto u = solver.solve_symmetric(b);
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) out[solver.region()[i]] = u[i];
  return ScalarField(std::move(out));
}

MonotoneSequence green_exhaustion(const WeightedGraph& g, const Exhaustion& ex, Index x, Index y) {
  MonotoneSequence seq;
  seq.scales = ex.scales;
  if (!ex.levels.empty() && (!contains(ex.levels[0], x) || !contains(ex.levels[0], y)))
    fail(Errc::VertexOutsideSet, "Green's function endpoints must lie in the first level");
  for (const auto& level : ex.levels) seq.values.push_back(dirichlet_green(g, level, x)(y));
  seq.monotone = check_monotone(seq.values, true);
  seq.diagnosis = diagnose_sequence(seq.scales, seq.values);
  seq.evidence = levels_stationary(ex) ? Evidence::inconclusive : evidence_from(seq.diagnosis);
  return seq;
}

MonotoneSequence capacity(const WeightedGraph& g, Index x, const Exhaustion& ex) {
  MonotoneSequence seq;
  seq.scales = ex.scales;
  for (const auto& level : ex.levels) {
    if (!contains(level, x)) fail(Errc::VertexOutsideSet, "capacity vertex must lie in every level");
    // Restrict to the component of x inside the level; other components carry phi = 0.
    std::vector<Index> comp{x};
    std::vector<char> seen(g.size(), 0);
    seen[x] = 1;
    bool leaks = false;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      g.require_complete(comp[i], "capacity");
      for (Index y : g.neighbors(comp[i])) {
        if (!contains(level, y)) {
          leaks = true;
        } else if (!seen[y]) {
          seen[y] = 1;
          comp.push_back(y);
        }
      }
    }
    if (!leaks) {
      seq.values.push_back(0.0);
      continue;
    }
    const ScalarField green = dirichlet_green(g, comp, x);
    std::vector<double> phi(green.values().begin(), green.values().end());
    const double gxx = phi[x];
    for (double& v : phi) v /= gxx;
    seq.values.push_back(kernels::parallel::energy(g.adjacency(), phi));
  }
  seq.monotone = check_monotone(seq.values, false);
  seq.diagnosis = diagnose_sequence(seq.scales, seq.values);
  seq.evidence = levels_stationary(ex) ? Evidence::inconclusive : evidence_from(seq.diagnosis);
  return seq;
}

VolumeTest volume_recurrence_test(const WeightedGraph& g, const PseudoMetric& rho, std::span<const double> radii) {
  VolumeTest t;
  t.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    double vol = 0.0;
    for (Index x : rho.ball(r)) vol += g.measure(x);
    t.volumes.push_back(vol);
  }
  t.integral = integral_evidence(t.radii, t.volumes);
  t.evidence = t.integral.verdict == IntegralVerdict::divergent ? Evidence::recurrent : Evidence::inconclusive;
  return t;
}

std::vector<double> transition_green(const WeightedGraph& g, Index x, Index y, int steps) {
  if (x >= g.size() || y >= g.size()) fail(Errc::UnknownVertex, "walk endpoints outside the graph");
  if (steps < 0) fail(Errc::UsageError, "number of steps must be non-negative");
  const auto hop = hop_distances(g, x);
  for (Index z = 0; z < g.size(); ++z)
    if (hop[z] >= 0 && hop[z] < steps && !g.complete(z))
      fail(Errc::WindowTooSmall, "window does not cover " + std::to_string(steps) + " steps of the walk");
  std::vector<double> inv(g.size());
  for (Index z = 0; z < g.size(); ++z) inv[z] = g.row_sum(z) > 0 ? 1.0 / g.row_sum(z) : 0.0;
  std::vector<double> cur(g.size(), 0.0), next(g.size());
  cur[x] = 1.0;
  std::vector<double> sums{cur[y]};
  for (int n = 1; n <= steps; ++n) {
    kernels::parallel::transition_step(g.adjacency(), inv, cur, next);
    std::swap(cur, next);
    sums.push_back(sums.back() + cur[y]);
  }
  return sums;
}

std::vector<RoydenLevel> royden_decompose(const WeightedGraph& g, const Exhaustion& ex, const ScalarField& f) {
  if (!f.fully_defined()) fail(Errc::OutsideDomain, "royden decomposition needs f on the whole window");
  const auto fv = f.values();
  const double ef = kernels::parallel::energy(g.adjacency(), fv);
  std::vector<RoydenLevel> out;
  for (const auto& level : ex.levels) {
    DirichletSolver solver(g, level);
    auto h = solver.solve(fv);
    std::vector<double> rem(g.size(), 0.0);
    for (Index x = 0; x < g.size(); ++x) {
      if (!solver.position(x)) h[x] = fv[x];
      rem[x] = fv[x] - h[x];
    }
    RoydenLevel lvl;
    lvl.energy_f = ef;
    lvl.energy_h = kernels::parallel::energy(g.adjacency(), h);
    lvl.energy_g = kernels::parallel::energy(g.adjacency(), rem);
    lvl.residual = ef - lvl.energy_g - lvl.energy_h;
    lvl.harmonic = ScalarField(std::move(h));
    lvl.remainder = ScalarField(std::move(rem));
    out.push_back(std::move(lvl));
  }
  return out;
}

namespace {

// exp(-t S) v for sparse symmetric S by Taylor series on short time steps.
Eigen::VectorXd taylor_expmv(const SpMat& s, double t, Eigen::VectorXd v) {
  double bound = 0.0;
  for (int k = 0; k < s.outerSize(); ++k) {
    double row = 0.0;
    for (SpMat::InnerIterator it(s, k); it; ++it) row += std::abs(it.value());
    bound = std::max(bound, row);
  }
  const int steps = std::max(1, int(std::ceil(t * bound)));
  const double h = t / steps;
  for (int st = 0; st < steps; ++st) {
    Eigen::VectorXd term = v, acc = v;
    for (int k = 1; k < 100; ++k) {
      term = (-h / k) * (s * term);
      acc += term;
      if (term.lpNorm<Eigen::Infinity>() <= 1e-17 * acc.lpNorm<Eigen::Infinity>()) break;
    }
    v = std::move(acc);
  }
  return v;
}

}  // namespace

ScalarField heat_probe(const WeightedGraph& g, std::span<const Index> region, double t, const ScalarField& f,
                       const HeatOptions& opts) {
  if (t < 0) fail(Errc::NonPositiveTime, "time must be non-negative");
  const auto reg = sorted_unique(region);
  std::vector<double> out(g.size(), 0.0);
  const auto n = Eigen::Index(reg.size());
  Eigen::VectorXd u0(n), sq(n);
  std::vector<std::int64_t> slot(g.size(), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Index x = reg[std::size_t(i)];
    g.require_complete(x, "heat");
    slot[x] = i;
    sq[i] = std::sqrt(g.measure(x));
    u0[i] = sq[i] * f(x);
  }
  if (t == 0) {
    for (Index x : reg) out[x] = f(x);
    return ScalarField(std::move(out));
  }
  // Symmetric form S = M^{-1/2} A M^{-1/2} of L on the region.
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Index x = reg[std::size_t(i)];
    trip.emplace_back(i, i, g.row_sum(x) / g.measure(x));
    const auto nb = g.neighbors(x);
    const auto w = g.weights(x);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (const auto j = slot[nb[k]]; j >= 0) trip.emplace_back(i, j, -w[k] / (sq[i] * sq[j]));
  }
  SpMat s(n, n);
  s.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd u;
  if (std::size_t(n) <= opts.dense_limit) {
    const Eigen::MatrixXd e = (-t * Eigen::MatrixXd(s)).exp();
    u = e * u0;
  } else {
    u = taylor_expmv(s, t, u0);
  }
  for (Eigen::Index i = 0; i < n; ++i) out[reg[std::size_t(i)]] = u[i] / sq[i];
  return ScalarField(std::move(out));
}

MonotoneSequence stochastic_completeness_probe(const WeightedGraph& g, const Exhaustion& ex, Index o, double t,
                                               const HeatOptions& opts) {
  MonotoneSequence seq;
  seq.scales = ex.scales;
  const ScalarField one = ScalarField::constant(g.size(), 1.0);
  bool bounded = true;
  for (const auto& level : ex.levels) {
    if (!contains(level, o)) fail(Errc::VertexOutsideSet, "probe vertex must lie in every level");
    const double v = heat_probe(g, level, t, one, opts)(o);
    bounded = bounded && v <= 1.0 + 1e-12;
    seq.values.push_back(v);
  }
  seq.monotone = bounded && check_monotone(seq.values, true);
  seq.diagnosis = diagnose_sequence(seq.scales, seq.values);
  return seq;
}

RecurrenceReport recurrence_report(const WeightedGraph& g, Index o, const Exhaustion& ex, const PseudoMetric* rho,
                                   std::span<const double> radii, int walk_steps) {
  RecurrenceReport rep;
  if (rho && !radii.empty()) rep.volume = volume_recurrence_test(g, *rho, radii);
  rep.capacity = capacity(g, o, ex);
  rep.green = green_exhaustion(g, ex, o, o);
  if (walk_steps > 0) {
    rep.transition_sums = transition_green(g, o, o, walk_steps);
    std::vector<double> idx(rep.transition_sums.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = double(i);
    rep.transition_diagnosis = diagnose_sequence(idx, rep.transition_sums);
  }
  int rec = 0, tra = 0;
  auto count = [&](Evidence e) {
    rec += e == Evidence::recurrent;
    tra += e == Evidence::transient;
  };
  if (rep.volume) count(rep.volume->evidence);
  count(rep.capacity.evidence);
  count(rep.green.evidence);
  if (walk_steps > 0) count(evidence_from(rep.transition_diagnosis));
  if (rec > 0 && tra == 0) rep.verdict = Evidence::recurrent;
  else if (tra > 0 && rec == 0) rep.verdict = Evidence::transient;
  return rep;
}

}  // namespace wgpt
