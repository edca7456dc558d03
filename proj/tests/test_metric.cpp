#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "wgpt/laplacian.hpp"
#include "wgpt/metric.hpp"

using namespace wgpt;
using wgpt::test::error_code;

namespace {

// Edge lengths in CSR slot order from a symmetric rule on vertex ids.
std::vector<double> lengths_by_id(const WeightedGraph& g, const std::function<double(VertexId, VertexId)>& len) {
  std::vector<double> out;
  for (Index x = 0; x < g.size(); ++x)
    for (Index y : g.neighbors(x)) out.push_back(len(g.id(x), g.id(y)));
  return out;
}

}  // namespace

TEST_SUITE("metric") {

TEST_CASE("delta metric on Z is k / sqrt 2") {
  const WeightedGraph g = line_generator().window(30);
  const PseudoMetric d = path_metric_delta(g, g.index(0));
  for (VertexId k = -25; k <= 25; ++k)
    CHECK(d.from_base()[g.index(k)] == doctest::Approx(std::abs(double(k)) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(d.distance(g.index(-3), g.index(4)) == doctest::Approx(7 / std::sqrt(2.0)));
  CHECK(d.jump_size() == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("delta metric on a single vertex vanishes") {
  GraphBuilder b;
  b.add_vertex(5, 1.0);
  const WeightedGraph g = b.build();
  const PseudoMetric d = path_metric_delta(g, 0);
  CHECK(d.from_base()[0] == 0.0);
  CHECK(d.jump_size() == 0.0);
}

TEST_CASE("delta metric of the decaying line is bounded below by C / (|x|+1)") {
  // Deg(0) = 2 and Deg(x) = 3 (|x|+1)^2 otherwise, so
  // delta(x, x+1) = 1 / (sqrt 3 (|x|+2)) for x >= 0 and C = 1 / (2 sqrt 3).
  const auto ex = finite_volume_example(61);
  const WeightedGraph& g = ex.graph;
  const PseudoMetric d = path_metric_delta(g, g.index(0));
  double worst = kInfinity;
  for (VertexId x = 0; x <= 60; ++x) {
    const double len = d.distance(g.index(x), g.index(x + 1));
    CHECK(len == doctest::Approx(1.0 / (std::sqrt(3.0) * double(x + 2))).epsilon(1e-13));
    CHECK(d.distance(g.index(-x), g.index(-x - 1)) == doctest::Approx(len).epsilon(1e-13));
    worst = std::min(worst, len * double(x + 1));
  }
  CHECK(worst == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-13));
}

TEST_CASE("disconnected windows are rejected for the delta metric") {
  GraphBuilder b;
  b.add_vertex(0, 1.0);
  b.add_vertex(1, 1.0);
  const WeightedGraph g = b.build();
  CHECK(error_code([&] { (void)path_metric_delta(g, 0); }) == Errc::DisconnectedWindow);
}

TEST_CASE("truncation") {
  const WeightedGraph g = test::finite_line(0, 3);
  const auto len = lengths_by_id(g, [](VertexId a, VertexId b) { return std::min(a, b) == 1 ? 100.0 : 1.0; });
  const PseudoMetric rho = PseudoMetric::path(g, len, 0);
  CHECK(rho.from_base()[3] == 102.0);
  const PseudoMetric cut = truncate_metric(rho, 2.0, g);
  CHECK(cut.from_base()[3] == 4.0);
  CHECK(cut.jump_size() == 2.0);
  CHECK(cut.kind() == MetricKind::path);

  const PseudoMetric same = truncate_metric(rho, 1000.0, g);
  for (Index x = 0; x < g.size(); ++x) CHECK(same.from_base()[x] == rho.from_base()[x]);

  const PseudoMetric zero = truncate_metric(rho, 0.0, g);
  for (Index x = 0; x < g.size(); ++x) CHECK(zero.from_base()[x] == 0.0);

  const PseudoMetric f = PseudoMetric::from_function(g, [](Index a, Index b) { return std::abs(double(a) - b); }, 0);
  CHECK(error_code([&] { (void)truncate_metric(f, 1.0, g); }) == Errc::NotAPathMetric);
}

TEST_CASE("truncation never increases distances and caps the jump size") {
  const WeightedGraph g = random_connected_graph(80, 21);
  const PseudoMetric d = path_metric_delta(g, 0);
  for (double r : {0.05, 0.3, 1.0}) {
    const PseudoMetric t = truncate_metric(d, r, g);
    CHECK(t.jump_size() == r);
    for (Index x = 0; x < g.size(); ++x) CHECK(t.from_base()[x] <= d.from_base()[x]);
  }
}

TEST_CASE("intrinsic verification") {
  const WeightedGraph normalized = line_generator(1, 2).window(10);
  const auto inner = normalized.complete_vertices();
  const IntrinsicReport a = verify_intrinsic(normalized, natural_metric(normalized, normalized.index(0)), inner);
  CHECK(a.intrinsic);
  CHECK(a.max_ratio <= 1.0);

  const WeightedGraph unit = line_generator().window(10);
  const IntrinsicReport b = verify_intrinsic(unit, natural_metric(unit, unit.index(0)), unit.complete_vertices());
  CHECK_FALSE(b.intrinsic);
  CHECK(b.max_ratio == doctest::Approx(2.0));
  CHECK(b.offending.size() == unit.complete_vertices().size());

  for (std::uint64_t seed : {1, 2, 3, 4}) {
    const WeightedGraph g = random_connected_graph(60, seed);
    const auto all = g.complete_vertices();
    CHECK(verify_intrinsic(g, path_metric_delta(g, 0), all).intrinsic);
  }
  const auto ex = finite_volume_example(50);
  CHECK(verify_intrinsic(ex.graph, path_metric_delta(ex.graph, ex.graph.index(0)), ex.graph.complete_vertices())
            .intrinsic);
}

TEST_CASE("minimal measure") {
  GraphBuilder b;
  b.add_vertex(0, 1.0);
  b.add_vertex(1, 1.0);
  b.add_edge(0, 1, 1.0);
  const WeightedGraph edge = b.build();
  const PseudoMetric two = PseudoMetric::path(edge, {2.0, 2.0}, 0);
  const std::vector<Index> both{0, 1};
  const auto m = minimal_measure(edge, two, both);
  CHECK(m[0] == 4.0);
  CHECK(m[1] == 4.0);

  const WeightedGraph z = line_generator().window(6);
  const auto inner = z.complete_vertices();
  const auto mz = minimal_measure(z, natural_metric(z, z.index(0)), inner);
  for (Index x : inner) CHECK(mz[x] == 2.0);

  b.add_vertex(2, 1.0);
  const WeightedGraph isolated = b.build();
  const PseudoMetric nat = natural_metric(isolated, 0);
  const std::vector<Index> lone{2};
  CHECK(error_code([&] { (void)minimal_measure(isolated, nat, lone); }) == Errc::ZeroRow);
}

TEST_CASE("minimal measure makes the metric exactly intrinsic") {
  for (std::uint64_t seed : {5, 6, 7}) {
    const WeightedGraph g = random_connected_graph(50, seed);
    const PseudoMetric rho = natural_metric(g, 0);
    const auto all = g.complete_vertices();
    const WeightedGraph h = g.with_measure(minimal_measure(g, rho, all));
    const PseudoMetric rh = natural_metric(h, 0);
    const IntrinsicReport rep = verify_intrinsic(h, rh, all);
    CHECK(rep.intrinsic);
    CHECK(rep.max_ratio >= 1.0 - 1e-12);
    CHECK(rep.max_ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("balls") {
  const WeightedGraph g = line_generator().window(30);
  const PseudoMetric d = path_metric_delta(g, g.index(0));
  auto b0 = d.ball(0.0);
  CHECK(std::find(b0.begin(), b0.end(), g.index(0)) != b0.end());
  auto b5 = d.ball(5.0 / std::sqrt(2.0));
  std::vector<VertexId> ids;
  for (Index x : b5) ids.push_back(g.id(x));
  std::sort(ids.begin(), ids.end());
  std::vector<VertexId> expect;
  for (VertexId k = -5; k <= 5; ++k) expect.push_back(k);
  CHECK(ids == expect);
  CHECK(error_code([&] { (void)d.ball(40.0); }) == Errc::WindowTooSmall);

  // Monotone in r and exhausting the window.
  const WeightedGraph r = random_connected_graph(70, 9);
  const PseudoMetric rr = path_metric_delta(r, 0);
  std::size_t prev = 0;
  for (double rad = 0; rad < 50; rad += 0.25) {
    const auto b = rr.ball(rad);
    CHECK(b.size() >= prev);
    prev = b.size();
  }
  CHECK(prev == r.size());
}

TEST_CASE("metric axioms on sampled triples") {
  std::mt19937_64 rng(1);
  const WeightedGraph g = random_connected_graph(60, 31);
  const PseudoMetric d = path_metric_delta(g, 0);
  std::uniform_int_distribution<Index> pick(0, Index(g.size() - 1));
  for (int i = 0; i < 300; ++i) {
    const Index a = pick(rng), b = pick(rng), c = pick(rng);
    CHECK(d.distance(a, a) == 0.0);
    CHECK(d.distance(a, b) == doctest::Approx(d.distance(b, a)).epsilon(1e-14));
    CHECK(d.distance(a, c) <= d.distance(a, b) + d.distance(b, c) + 1e-12);
  }
}

TEST_CASE("compatibility of the decaying line example") {
  const auto ex = finite_volume_example(200);
  const PseudoMetric d = path_metric_delta(ex.graph, ex.graph.index(0));
  const std::vector<double> radii{0.5, 1.0, 1.5, 2.0};
  const CompatibilityReport rep = verify_compatible(ex.graph, d, radii);
  CHECK(rep.compatible);
  CHECK(std::isfinite(rep.jump_size));
  REQUIRE(rep.degree_bounds.size() == radii.size());
  for (double c : rep.degree_bounds) CHECK(std::isfinite(c));
  CHECK(std::is_sorted(rep.degree_bounds.begin(), rep.degree_bounds.end()));
}

TEST_CASE("cut-off function") {
  const WeightedGraph g = line_generator().window(40);
  const PseudoMetric d = path_metric_delta(g, g.index(0));
  const double r = 3.0, R = 9.0;
  const ScalarField eta = cutoff(d, r, R);
  for (Index x = 0; x < g.size(); ++x) {
    const double rho = d.from_base()[x];
    if (rho <= r) CHECK(eta(x) == 1.0);
    if (rho >= R) CHECK(eta(x) == 0.0);
  }
  const PseudoMetric nat = natural_metric(g, g.index(0));
  CHECK(cutoff(nat, 2.0, 6.0)(g.index(4)) == doctest::Approx(0.5));
  CHECK(error_code([&] { (void)cutoff(d, 2.0, 2.0); }) == Errc::BadRadii);
}

TEST_CASE("cut-off gradient bound holds vertex by vertex") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const WeightedGraph g = random_connected_graph(70, 300 + seed);
    const PseudoMetric d = path_metric_delta(g, 0);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int k = 0; k < 5; ++k) {
      const double r = u(rng), R = r + 0.01 + u(rng);
      const CutoffAudit a = audit_cutoff(g, d, r, R);
      CHECK(a.violations == 0);
      CHECK(a.checked == g.size());
    }
  }
}

}  // TEST_SUITE
