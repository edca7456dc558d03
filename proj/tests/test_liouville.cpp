#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "support.hpp"
#include "wgpt/audit_suite.hpp"
#include "wgpt/laplacian.hpp"
#include "wgpt/liouville.hpp"
#include "wgpt/metric.hpp"

using namespace wgpt;
using wgpt::test::error_code;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (double r = lo; r <= hi + 1e-12; r += step) out.push_back(r);
  return out;
}

ScalarField abs_field(const ScalarField& f) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& a : v) a = std::abs(a);
  return ScalarField(std::move(v));
}

}  // namespace

TEST_SUITE("liouville") {

TEST_CASE("Karp profile: bounded f on a finite-volume graph") {
  const auto ex = finite_volume_example(150);
  const PseudoMetric d = path_metric_delta(ex.graph, ex.graph.index(0));
  const auto radii = grid(0.25, 2.5, 0.25);
  const KarpProfile k = karp_profile(ex.graph, d, ScalarField::constant(ex.graph.size(), 1.0), 2.0, radii);
  REQUIRE(k.verdict);
  CHECK(*k.verdict == IntegralVerdict::divergent);
  CHECK(std::is_sorted(k.v.begin(), k.v.end()));
}

TEST_CASE("Karp profile: |x| on Z with p = 2") {
  const WeightedGraph z = line_generator().window(160);
  const PseudoMetric d = path_metric_delta(z, z.index(0));
  const auto radii = grid(10, 100, 5);
  const ScalarField f = ScalarField::from_ids(z, [](VertexId x) { return std::abs(double(x)); });
  const KarpProfile k = karp_profile(z, d, f, 2.0, radii);
  // Power-sum oracle: v(r) = 2 Sum_{k <= r sqrt 2} k^2.
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const long n = long(std::floor(radii[i] * std::sqrt(2.0) + 1e-9));
    CHECK(k.v[i] == doctest::Approx(2.0 * double(n * (n + 1) * (2 * n + 1)) / 6.0));
  }
  REQUIRE(k.verdict);
  CHECK(*k.verdict == IntegralVerdict::convergent);
  REQUIRE(k.exponent);
  CHECK(std::abs(*k.exponent - 3.0) <= 0.1);
  CHECK(k.integral >= 0);
}

TEST_CASE("Karp profile: zero function and precondition failures") {
  const WeightedGraph z = line_generator().window(60);
  const PseudoMetric d = path_metric_delta(z, z.index(0));
  const auto radii = grid(5, 30, 5);
  const KarpProfile k = karp_profile(z, d, ScalarField::constant(z.size(), 0.0), 2.0, radii);
  CHECK(std::isinf(k.integral));
  CHECK(*k.verdict == IntegralVerdict::divergent);

  const ScalarField neg = ScalarField::from_ids(z, [](VertexId x) { return 5.0 - std::abs(double(x)); });
  CHECK(error_code([&] { (void)karp_profile(z, d, neg, 2.0, radii); }).has_value());
  const ScalarField concave = ScalarField::from_ids(z, [](VertexId x) { return 100.0 - double(x * x); });
  CHECK(error_code([&] { (void)karp_profile(z, d, concave, 2.0, radii); }) == Errc::NotSubharmonic);
  const PseudoMetric nat = natural_metric(z, z.index(0));
  const ScalarField abs = ScalarField::from_ids(z, [](VertexId x) { return std::abs(double(x)); });
  CHECK(error_code([&] { (void)karp_profile(z, nat, abs, 2.0, radii); }) == Errc::NotIntrinsic);
  // p <= 1 only tabulates.
  CHECK_FALSE(karp_profile(z, d, abs, 1.0, radii).verdict.has_value());
}

TEST_CASE("weighted lp test") {
  const auto ex = finite_volume_example(150);
  const PseudoMetric d = path_metric_delta(ex.graph, ex.graph.index(0));
  const auto radii = grid(0.25, 2.5, 0.25);
  const WeightedLpTest c = weighted_lp_test(ex.graph, d, ScalarField::constant(ex.graph.size(), 2.0), 2.0, radii);
  CHECK(c.verdict == LpVerdict::constancy_implied);

  const WeightedLpTest h = weighted_lp_test(ex.graph, d, abs_field(ex.f), 2.0, radii);
  CHECK(h.verdict == LpVerdict::no_conclusion);
  CHECK(std::is_sorted(h.partial_sums.begin(), h.partial_sums.end()));

  // Binary tree with m = 3: m rho_1^-2 (X) is infinite.
  const WeightedGraph t = binary_tree_generator(1, 3).window(16);
  const PseudoMetric nat = natural_metric(t, t.index(0));
  const WeightedLpTest tc = weighted_lp_test(t, nat, ScalarField::constant(t.size(), 1.0), 2.0, grid(2, 14, 1));
  CHECK(tc.verdict == LpVerdict::no_conclusion);
}

TEST_CASE("constancy-implied is always matched by divergent Karp evidence") {
  std::size_t checked = 0;
  for (const auto& inst : audit_suite()) {
    std::vector<double> radii;
    const double top = std::min(inst.rho.certified_radius() - inst.rho.jump_size(), 60.0) * 0.95;
    for (int i = 1; i <= 12; ++i) radii.push_back(top * i / 12.0);
    const std::vector<ScalarField> fields{inst.f, ScalarField::constant(inst.graph.size(), 1.0)};
    for (const auto& f : fields)
      for (double p : {1.5, 2.0, 3.0}) {
        const WeightedLpTest w = weighted_lp_test(inst.graph, inst.rho, f, p, radii);
        const KarpProfile k = karp_profile(inst.graph, inst.rho, f, p, radii);
        if (w.verdict == LpVerdict::constancy_implied) {
          ++checked;
          CHECK(*k.verdict == IntegralVerdict::divergent);
        }
      }
  }
  CHECK(checked > 0);
}

TEST_CASE("Caccioppoli audit: direct-summation oracle on Z with x_+") {
  const AuditInstance inst = positive_part_instance();
  const InequalityAudit a = caccioppoli_audit(inst.graph, inst.rho, inst.f, 2.0, 10.0, 41.0);
  // Ordered pairs of B_10 with non-zero gradient: the ten edges 0-1 .. 9-10, twice.
  CHECK(a.lhs == doctest::Approx(20.0));
  // ||f 1_{B_41 \ B_10}||_2^2 = 2 Sum_{x=11..41} x^2 = 46872 over (R - r)^2 = 961.
  CHECK(a.rhs == doctest::Approx(46872.0 / 961.0));
  CHECK(a.pass);
  CHECK(a.constant_used == 8.0);
}

TEST_CASE("Caccioppoli audit: constants, trivial cases and errors") {
  CHECK(caccioppoli_constant(1.5) == doctest::Approx(32.0));
  CHECK(caccioppoli_constant(3.0) == doctest::Approx(8.0));
  CHECK(key_estimate_constant(1.5) == doctest::Approx(4.0));
  CHECK(key_estimate_constant(2.0) == doctest::Approx(2.0));
  const AuditInstance inst = positive_part_instance();
  const InequalityAudit c = caccioppoli_audit(inst.graph, inst.rho, ScalarField::constant(inst.graph.size(), 4.0),
                                              2.0, 5.0, 20.0);
  CHECK(c.lhs == 0.0);
  CHECK(c.pass);
  CHECK(error_code([&] { (void)caccioppoli_audit(inst.graph, inst.rho, inst.f, 2.0, 5.0, 7.5); }) ==
        Errc::RadiiViolateJumpGap);
  CaccioppoliOptions strong;
  strong.form = CaccioppoliForm::strengthened;
  CHECK(error_code([&] { (void)caccioppoli_audit(inst.graph, inst.rho, inst.f, 1.5, 5.0, 20.0, strong); })
            .has_value());
}

TEST_CASE("audit suite: every admissible pair passes") {
  const auto suite = audit_suite();
  for (const auto& inst : suite) CHECK(inst.radii.size() >= 20);
  for (const auto& row : run_audit_suite(suite)) {
    INFO(row.instance << " p=" << row.p << " " << to_string(row.kind));
    CHECK(row.failures == 0);
    CHECK(row.max_ratio > 0);
  }
}

TEST_CASE("audit suite ratios do not regress beyond 1%") {
  std::ifstream in(WGPT_GOLDEN_DIR "/caccioppoli_ratios.json");
  REQUIRE(in);
  const auto golden = nlohmann::json::parse(in);
  const auto rows = run_audit_suite(audit_suite());
  REQUIRE(golden["rows"].size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& g = golden["rows"][i];
    CHECK(g["instance"] == rows[i].instance);
    CHECK(g["audit"] == to_string(rows[i].kind));
    CHECK(rows[i].max_ratio <= g["max_ratio"].get<double>() * 1.01);
  }
}

TEST_CASE("key estimate: trivial cases and the decaying line") {
  const AuditInstance inst = decaying_line_instance();
  const ScalarField zero = ScalarField::constant(inst.graph.size(), 0.0);
  const InequalityAudit a = key_estimate_audit(inst.graph, inst.f, zero, 2.0);
  CHECK(a.lhs == 0.0);
  CHECK(a.rhs == 0.0);
  CHECK(a.pass);
  const double s = inst.rho.jump_size();
  const ScalarField phi = cutoff(inst.rho, 0.2 + s, 1.5 - s);
  const InequalityAudit c =
      key_estimate_audit(inst.graph, ScalarField::constant(inst.graph.size(), 3.0), phi, 2.0);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
  const InequalityAudit k = key_estimate_audit(inst.graph, inst.f, phi, 2.0);
  CHECK(k.pass);
  CHECK(k.lhs > 0);
  const ScalarField wide = cutoff(inst.rho, 1.0, 5.0);
  CHECK(error_code([&] { (void)key_estimate_audit(inst.graph, inst.f, wide, 2.0); }) == Errc::SupportEscapesWindow);
}

TEST_CASE("tie orientation does not change the key-estimate sums") {
  // f = x_+ is flat on the negative half line, so many edges are ties.
  const AuditInstance inst = positive_part_instance();
  for (double p : {1.5, 2.0, 3.0})
    for (auto [r, R] : inst.radii) {
      const ScalarField phi = cutoff(inst.rho, r, R);
      KeyEstimateOptions fwd, rev;
      rev.ties = TieOrientation::reverse_id_order;
      const InequalityAudit a = key_estimate_audit(inst.graph, inst.f, phi, p, fwd);
      const InequalityAudit b = key_estimate_audit(inst.graph, inst.f, phi, p, rev);
      CHECK(a.lhs == b.lhs);
      CHECK(a.rhs == b.rhs);
    }
}

TEST_CASE("mean-value inequalities") {
  const MviResult eq = mvi_check(2.0, 2.0, 3.0);
  CHECK(eq.lhs == 0.0);
  CHECK(eq.bound_b == 0.0);
  const MviResult a = mvi_check(1.0, 2.0, 3.0);
  CHECK(a.lhs == doctest::Approx(3.0));
  REQUIRE(a.bound_a);
  CHECK(*a.bound_a == doctest::Approx(1.5));
  CHECK(a.holds_a);
  const MviResult b = mvi_check(0.0, 1.0, 1.5);
  CHECK(b.lhs == doctest::Approx(1.0));
  CHECK(b.bound_b == doctest::Approx(0.5));
  CHECK(b.holds_b);
  CHECK_FALSE(b.bound_a.has_value());
  CHECK(error_code([] { (void)mvi_check(1.0, 2.0, 1.0); }) == Errc::BadExponent);
  CHECK(error_code([] { (void)mvi_check(3.0, 2.0, 2.0); }).has_value());

  const MviGridReport g = mvi_grid(100000, 20240601);
  CHECK(g.samples == 100000);
  CHECK(g.violations_a == 0);
  CHECK(g.violations_b == 0);
  CHECK(g.checked_a > 0);
}

TEST_CASE("growth classifier") {
  const WeightedGraph z = line_generator().window(200);
  const PseudoMetric nat = natural_metric(z, z.index(0));
  const auto inner = z.complete_vertices();
  auto sq = [](double r) { return r * r; };
  const GrowthClassification one = growth_classifier(ScalarField::constant(z.size(), 1.0), nat, sq, inner);
  CHECK(one.grows_less);
  const ScalarField pw = ScalarField::from_ids(z, [](VertexId x) { return std::pow(std::max(1.0, std::abs(double(x))), 1.5); });
  const GrowthClassification g = growth_classifier(pw, nat, sq, inner);
  CHECK(g.beta == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(g.grows_less);
  std::vector<Index> near;
  for (Index x : inner)
    if (std::abs(z.id(x)) <= 60) near.push_back(x);
  const ScalarField ex = ScalarField::from_ids(z, [](VertexId x) { return std::ldexp(1.0, int(std::abs(x))); });
  CHECK_FALSE(growth_classifier(ex, nat, sq, near).grows_less);
  CHECK(growth_classifier(ScalarField::constant(z.size(), 0.0), nat, sq, inner).grows_less);
}

TEST_CASE("moments and volume decay") {
  const WeightedGraph fin = random_connected_graph(40, 3);
  const PseudoMetric d = path_metric_delta(fin, 0);
  const MomentSequence mf = moment(fin, d, 3.0, grid(50, 500, 50));
  CHECK(mf.bounded_evidence);

  const auto ex = finite_volume_example(120);
  const PseudoMetric nat = natural_metric(ex.graph, ex.graph.index(0));
  const MomentSequence m0 = moment(ex.graph, nat, 0.0, grid(10, 110, 10));
  CHECK(m0.bounded_evidence);
  CHECK(std::is_sorted(m0.partial_sums.begin(), m0.partial_sums.end()));
  const DecayProbe dp = decay_probe(ex.graph, nat, grid(5, 100, 5));
  CHECK(dp.negative);
  CHECK(dp.limsup_estimate == doctest::Approx(-std::log(2.0)).epsilon(0.15));
}

}  // TEST_SUITE
