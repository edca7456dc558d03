// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hadamard_support.hpp"
#include "support.hpp"
#include "wgpt/audit_suite.hpp"
#include "wgpt/kernels.hpp"
#include "wgpt/laplacian.hpp"
#include "wgpt/liouville.hpp"
#include "wgpt/metric.hpp"
#include "wgpt/potential.hpp"

using namespace wgpt;
using namespace wgpt::test;

namespace {

/// Accumulates failure notes; a criterion passes when none were recorded.
struct Verdict {
  std::ostringstream notes;
  int failures = 0;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) notes << (failures > 1 ? "; " : "") << what;
  }
};

std::vector<Index> ids_between(const WeightedGraph& g, VertexId lo, VertexId hi) {
  std::vector<Index> out;
  for (VertexId x = lo; x <= hi; ++x) out.push_back(g.index(x));
  return out;
}

std::vector<int> int_range(int lo, int hi, int step = 1) {
  std::vector<int> out;
  for (int n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

void finite_volume_example_golden(Verdict& v) {
  const auto ex = finite_volume_example(40);
  const Classification c = classify(ex.graph, ex.f_exact, ids_between(ex.graph, -40, 40));
  v.require(c.exact && c.verdict == Harmonicity::harmonic && c.residual == 0.0, "exact Laplacian not zero on |x|<=40");

  double oracle = 0.0, previous = -1.0;
  for (int n = 0; n <= 40; ++n) {
    if (n > 0) oracle += 2.0 * (1.0 - std::ldexp(1.0, -n)) / double((n + 1) * (n + 1));
    const auto ball = ids_between(ex.graph, -n, n);
    LpOptions opts;
    opts.subset = ball;
    const double s = lp_norm(ex.graph, ex.f, 1.0, opts);
    v.require(std::abs(s - oracle) <= 1e-10, "l1 partial sum differs from the oracle at N=" + std::to_string(n));
    v.require(n == 0 || s > previous, "l1 partial sums not monotone at N=" + std::to_string(n));
    previous = s;
  }
  const auto big = finite_volume_example(60);
  const auto ball = ids_between(big.graph, -60, 60);
  LpOptions opts;
  opts.subset = ball;
  const double s15 = lp_power_sum(big.graph, big.f, 1.5, opts);
  v.require(s15 > 1e6, "p=1.5 power sum " + std::to_string(s15) + " <= 1e6 at N=60");
}

void greens_formula(Verdict& v) {
  Rng rng(2);
  RandomGraphOptions opts;
  opts.mu_min = 1e-6;
  opts.m_min = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 100)(rng);
    const WeightedGraph g = random_connected_graph(n, 10'000 + std::uint64_t(trial), opts);
    const ScalarField f(random_values(g.size(), rng)), h(random_values(g.size(), rng));
    double lhs = 0.0;
    for (Index x = 0; x < g.size(); ++x) lhs += laplacian_apply(g, f, x) * h(x) * g.measure(x);
    const double rhs = kernels::serial::pairing(g.adjacency(), f.values(), h.values());
    worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
  }
  v.require(worst <= 1e-12, "relative residual " + std::to_string(worst));
}

void mean_value_inequalities(Verdict& v) {
  const MviGridReport r = mvi_grid(100'000, 20240601);
  v.require(r.samples == 100'000, "wrong sample count");
  v.require(r.violations_a == 0, std::to_string(r.violations_a) + " violations of the p >= 2 form");
  v.require(r.violations_b == 0, std::to_string(r.violations_b) + " violations of the p > 1 form");
}

void cutoff_bound(Verdict& v) {
  const auto ex = finite_volume_example(200);
  const PseudoMetric rho = path_metric_delta(ex.graph, ex.graph.index(0));
  const double top = rho.certified_radius() - rho.jump_size();
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    double r = uniform(rng, 0.0, top), R = uniform(rng, 0.0, top);
    if (r > R) std::swap(r, R);
    if (R - r < 1e-3) R = std::min(top, r + 1e-3);
    const CutoffAudit a = audit_cutoff(ex.graph, rho, r, R);
    v.require(a.violations == 0, std::to_string(a.violations) + " violations at r=" + std::to_string(r));
  }
}

void recurrence_cross_validation(Verdict& v) {
  const WeightedGraph z = line_generator().window(201);
  const Index o = z.index(0);
  const auto hops = int_range(10, 200);
  const Exhaustion ex = hop_exhaustion(z, o, hops);
  const MonotoneSequence G = green_exhaustion(z, ex, o, o);
  const MonotoneSequence cap = capacity(z, o, ex);
  for (std::size_t i = 0; i < hops.size(); ++i) {
    const double n = hops[i];
    v.require(std::abs(cap.values[i] - 2.0 / n) <= 1e-9, "cap_n(0) != 2/n at n=" + std::to_string(hops[i]));
    v.require(std::abs(G.values[i] - n / 2.0) <= 1e-9, "G_n(0,0) != n/2 at n=" + std::to_string(hops[i]));
  }
  const WeightedGraph wide = line_generator().window(300);
  const PseudoMetric d = path_metric_delta(wide, wide.index(0));
  std::vector<double> radii;
  for (double r = 10; r <= 200; r += 10) radii.push_back(r);
  const VolumeTest vol = volume_recurrence_test(wide, d, radii);
  v.require(vol.integral.verdict == IntegralVerdict::divergent, "volume criterion not divergent on Z");

  const WeightedGraph t = binary_tree_generator().window(13);
  const Index root = t.index(0);
  const Exhaustion depths = hop_exhaustion(t, root, int_range(6, 12));
  const MonotoneSequence tc = capacity(t, root, depths);
  const MonotoneSequence tg = green_exhaustion(t, depths, root, root);
  v.require(tc.monotone, "tree capacities not non-increasing");
  v.require(tc.values.back() > 0.5, "tree capacity not bounded below");
  for (std::size_t i = 1; i < tc.values.size(); ++i)
    v.require(tc.values[i - 1] - tc.values[i] < 0.1, "consecutive capacity gap >= 0.1");
  const double inc = (tg.values.back() - tg.values[tg.values.size() - 2]) / tg.values.back();
  v.require(inc < 1e-3, "tree Green kernel relative increment " + std::to_string(inc) + " at depth 12");
}

std::vector<SuiteRow> suite_rows() {
  static const std::vector<SuiteRow> rows = run_audit_suite(audit_suite());
  return rows;
}

void caccioppoli_suite(Verdict& v) {
  std::ifstream in(WGPT_GOLDEN_DIR "/caccioppoli_ratios.json");
  v.require(bool(in), "golden ratios missing");
  if (!in) return;
  const auto golden = nlohmann::json::parse(in)["rows"];
  const auto rows = suite_rows();
  v.require(golden.size() == rows.size(), "golden table has a different shape");
  for (std::size_t i = 0; i < rows.size() && i < golden.size(); ++i) {
    const SuiteRow& r = rows[i];
    if (r.kind == AuditKind::key_estimate) continue;
    const std::string tag = r.instance + " p=" + std::to_string(r.p) + " " + to_string(r.kind);
    v.require(r.pairs > 0, tag + ": no admissible pairs");
    v.require(r.failures == 0, tag + ": " + std::to_string(r.failures) + " failing pairs");
    v.require(r.max_ratio <= golden[i]["max_ratio"].get<double>() * 1.01, tag + ": ratio regressed");
  }
}

void key_estimate_suite(Verdict& v) {
  for (const SuiteRow& r : suite_rows()) {
    if (r.kind != AuditKind::key_estimate) continue;
    const std::string tag = r.instance + " p=" + std::to_string(r.p);
    v.require(r.constant == 2.0 / std::min(r.p - 1.0, 1.0), tag + ": wrong constant");
    v.require(r.pairs > 0 && r.failures == 0, tag + ": " + std::to_string(r.failures) + " violations");
  }
}

void karp_consistency(Verdict& v) {
  {
    const auto ex = finite_volume_example(150);
    const PseudoMetric d = path_metric_delta(ex.graph, ex.graph.index(0));
    std::vector<double> radii;
    for (double r = 0.25; r <= 2.5; r += 0.25) radii.push_back(r);
    const KarpProfile k = karp_profile(ex.graph, d, ScalarField::constant(ex.graph.size(), 1.0), 2.0, radii);
    v.require(k.verdict == IntegralVerdict::divergent, "(i) bounded f not divergent");
  }
  {
    const WeightedGraph z = line_generator().window(160);
    const PseudoMetric d = path_metric_delta(z, z.index(0));
    std::vector<double> radii;
    for (double r = 10; r <= 100; r += 5) radii.push_back(r);
    const ScalarField f = ScalarField::from_ids(z, [](VertexId x) { return std::abs(double(x)); });
    const KarpProfile k = karp_profile(z, d, f, 2.0, radii);
    v.require(k.verdict == IntegralVerdict::convergent, "(ii) |x| not convergent");
    v.require(k.exponent && std::abs(*k.exponent - 3.0) <= 0.1, "(ii) exponent not 3 +- 0.1");
  }
  std::size_t implied = 0;
  for (const auto& inst : audit_suite()) {
    std::vector<double> radii;
    const double top = std::min(inst.rho.certified_radius() - inst.rho.jump_size(), 60.0) * 0.95;
    for (int i = 1; i <= 12; ++i) radii.push_back(top * i / 12.0);
    const std::vector<ScalarField> fields{inst.f, ScalarField::constant(inst.graph.size(), 1.0)};
    for (const auto& f : fields)
      for (double p : {1.5, 2.0, 3.0}) {
        const WeightedLpTest w = weighted_lp_test(inst.graph, inst.rho, f, p, radii);
        if (w.verdict != LpVerdict::constancy_implied) continue;
        ++implied;
        const KarpProfile k = karp_profile(inst.graph, inst.rho, f, p, radii);
        v.require(k.verdict == IntegralVerdict::divergent, "(iii) inconsistency on " + inst.name);
      }
  }
  v.require(implied > 0, "(iii) no constancy-implied case exercised");
}

struct MapTally {
  std::size_t maps = 0, subharmonic_failures = 0, energy_violations = 0, unconverged = 0;
};

template <class S>
void hadamard_model(const S& s, Rng& rng, Verdict& v, MapTally& tally, bool energy_only) {
  const std::string name = s.name();
  if (!energy_only) {
    std::size_t probe_violations = 0;
    for (int i = 0; i < 100; ++i) {
      const auto nu = random_measure(s, rng);
      probe_violations += barycenter_probe_violations(s, nu, s.barycenter(nu), 1000, rng);
    }
    v.require(probe_violations == 0, name + ": " + std::to_string(probe_violations) + " probe violations");
    double worst = kInfinity;
    for (int i = 0; i < 10'000; ++i) worst = std::min(worst, jensen_audit(s, random_measure(s, rng), random_point(s, rng)));
    v.require(worst >= -1e-9, name + ": Jensen residual " + std::to_string(worst));
  }
  for (int i = 0; i < 10; ++i) {
    const MapDomain d = random_map_domain(10 + i, 7000 + std::uint64_t(i));
    HarmonicMapOptions opts;
    opts.max_iters = 1'000'000;
    const auto res = solve_harmonic_map(d.graph, s, d.region, random_boundary(s, d, rng), opts);
    ++tally.maps;
    if (!res.converged) ++tally.unconverged;
    if (!energy_only)
      for (int k = 0; k < 5; ++k) {
        const auto c = subharmonicity_audit(d.graph, s, res.map, random_point(s, rng), d.region, 1e-8);
        if (c.verdict != Harmonicity::subharmonic && c.verdict != Harmonicity::harmonic) ++tally.subharmonic_failures;
      }
    if (energy_comparison_excess(d.graph, s, res.map, 10, rng) > 1e-9 * (1 + map_energy(d.graph, s, res.map)))
      ++tally.energy_violations;
  }
}

void hadamard_properties(Verdict& v) {
  Rng rng(9);
  MapTally tally;
  hadamard_model(EuclideanSpace(3), rng, v, tally, false);
  hadamard_model(random_metric_tree(30, rng), rng, v, tally, false);
  hadamard_model(PoincareDisk(), rng, v, tally, false);

  const EuclideanSpace line(1);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const MapDomain d = random_map_domain(5 + i % 30, 8000 + std::uint64_t(i));
    const auto bd = random_boundary(line, d, rng);
    ScalarField data = ScalarField::undefined(d.graph.size());
    for (Index x : d.boundary) data.set(x, bd(x)[0]);
    const DirichletSolution ref = solve_dirichlet(d.graph, d.region, data);
    HarmonicMapOptions opts;
    opts.max_iters = 2'000'000;
    const auto res = solve_harmonic_map(d.graph, line, d.region, bd, opts);
    if (!res.converged) ++tally.unconverged;
    for (Index x : d.region) worst = std::max(worst, std::abs(res.map(x)[0] - ref.f(x)));
  }
  v.require(worst <= 1e-9, "euclidean(1) solver off by " + std::to_string(worst));
  v.require(tally.unconverged == 0, std::to_string(tally.unconverged) + " unconverged solves");
  v.require(tally.subharmonic_failures == 0, std::to_string(tally.subharmonic_failures) + " subharmonicity failures");
}

void energy_comparison(Verdict& v) {
  Rng rng(10);
  MapTally tally;
  hadamard_model(EuclideanSpace(2), rng, v, tally, true);
  hadamard_model(random_metric_tree(20, rng), rng, v, tally, true);
  hadamard_model(PoincareDisk(), rng, v, tally, true);
  v.require(tally.maps == 30, "expected 30 solved maps");
  v.require(tally.energy_violations == 0, std::to_string(tally.energy_violations) + " maps violate the comparison");
}

void stochastic_completeness(Verdict& v) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const WeightedGraph g = random_connected_graph(60, seed);
    std::vector<Index> all(g.size());
    std::iota(all.begin(), all.end(), Index(0));
    for (double t : {0.1, 1.0, 10.0}) {
      const ScalarField one = heat_probe(g, all, t, ScalarField::constant(g.size(), 1.0));
      double err = 0.0;
      for (Index x = 0; x < g.size(); ++x) err = std::max(err, std::abs(one(x) - 1.0));
      v.require(err <= 1e-9, "finite graph: e^{-tL}1 off by " + std::to_string(err) + " at t=" + std::to_string(t));
    }
  }
  const WeightedGraph z = line_generator().window(61);
  const Index o = z.index(0);
  const auto hops = int_range(1, 60);
  const MonotoneSequence p = stochastic_completeness_probe(z, hop_exhaustion(z, o, hops), o, 1.0);
  for (std::size_t i = 1; i < p.values.size(); ++i)
    v.require(p.values[i] >= p.values[i - 1], "probe decreases at n=" + std::to_string(hops[i]));
  for (std::size_t i = 0; i < hops.size(); ++i)
    if (hops[i] >= 50) v.require(p.values[i] >= 0.99, "probe below 0.99 at n=" + std::to_string(hops[i]));
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "decaying line example: exact harmonicity and partial sums", 1.0, finite_volume_example_golden},
      {2, "Green's formula on random graphs", 10.0, greens_formula},
      {3, "mean-value inequalities on random triples", 5.0, mean_value_inequalities},
      {4, "cut-off gradient bound on the decaying line", 0.0, cutoff_bound},
      {5, "recurrence cross-validation on Z and the binary tree", 30.0, recurrence_cross_validation},
      {6, "Caccioppoli audit suite and ratio regression", 0.0, caccioppoli_suite},
      {7, "key-estimate audit suite", 0.0, key_estimate_suite},
      {8, "Karp profile consistency", 0.0, karp_consistency},
      {9, "Hadamard barycenters, Jensen, solver and subharmonicity", 60.0, hadamard_properties},
      {10, "energy comparison for solved maps", 0.0, energy_comparison},
      {11, "stochastic-completeness probe", 0.0, stochastic_completeness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds)
      v.require(false, "took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_seconds) + " s");
    const bool ok = v.failures == 0;
    failed += !ok;
    std::printf("%s  %2d  %-58s %8.3f s", ok ? "PASS" : "FAIL", c.id, c.name, secs);
    if (!ok) std::printf("  (%s)", v.notes.str().c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
