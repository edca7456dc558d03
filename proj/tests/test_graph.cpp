#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "wgpt/graph_io.hpp"
#include "wgpt/kernels.hpp"
#include "wgpt/laplacian.hpp"

using namespace wgpt;
using wgpt::test::error_code;

TEST_SUITE("graph") {

TEST_CASE("laplacian on a three-vertex path") {
  const WeightedGraph g = path_graph(3);
  const ScalarField f(std::vector<double>{0, 1, 4});
  CHECK(laplacian_apply(g, f, 1) == doctest::Approx(-2.0));
  CHECK(gradient(f, 0, 1) == -1.0);
  CHECK(gradient(f, 1, 0) == 1.0);
}

TEST_CASE("constant fields have zero Laplacian and energy") {
  std::mt19937_64 rng(7);
  const WeightedGraph g = random_connected_graph(40, 11);
  const ScalarField c = ScalarField::constant(g.size(), 3.25);
  for (Index x = 0; x < g.size(); ++x) CHECK(laplacian_apply(g, c, x) == 0.0);
  CHECK(energy(g, c).value == 0.0);
  const auto all = g.complete_vertices();
  const Classification k = classify(g, c, all);
  CHECK(k.verdict == Harmonicity::harmonic);
  CHECK(k.residual == 0.0);
}

TEST_CASE("decaying line example is harmonic, exactly") {
  const auto ex = finite_volume_example(40);
  const Index x3 = ex.graph.index(3);
  CHECK(laplacian_apply(ex.graph, ex.f_exact, x3) == 0);
  const auto region = ex.graph.complete_vertices();
  CHECK(region.size() == 81);
  const Classification k = classify(ex.graph, ex.f_exact, region);
  CHECK(k.exact);
  CHECK(k.verdict == Harmonicity::harmonic);
  CHECK(k.residual == 0.0);
}

TEST_CASE("decaying line data at N = 3") {
  const auto ex = finite_volume_example(3);
  const WeightedGraph& g = ex.graph;
  const Index a = g.index(2), b = g.index(3);
  const auto nb = g.neighbors(a);
  for (std::size_t k = 0; k < nb.size(); ++k)
    if (nb[k] == b) CHECK(g.exact_weights(a)[k] == Rational(1, 4));
  CHECK(g.exact_measure(a) == Rational(1, 36));
  CHECK(ex.f_exact(a) == 3);
  CHECK(g.size() == 9);  // |x| <= N + 1
}

TEST_CASE("|x| on Z is subharmonic with Laplacian -2 at the origin") {
  const WeightedGraph g = line_generator().window(10);
  const ScalarField f = ScalarField::from_ids(g, [](VertexId x) { return std::abs(double(x)); });
  CHECK(laplacian_apply(g, f, g.index(0)) == -2.0);
  CHECK(laplacian_apply(g, f, g.index(4)) == 0.0);
  CHECK(laplacian_apply(g, f, g.index(-7)) == 0.0);
  const Classification k = classify(g, f, g.complete_vertices());
  CHECK(k.verdict == Harmonicity::subharmonic);
  CHECK(k.witness.has_value());
  CHECK(g.id(*k.witness) == 0);
}

TEST_CASE("energy examples") {
  GraphBuilder b;
  b.add_vertex(0, 1.0);
  b.add_vertex(1, 1.0);
  b.add_edge(0, 1, 2.0);
  const WeightedGraph edge = b.build();
  CHECK(energy(edge, ScalarField(std::vector<double>{0, 3})).value == doctest::Approx(18.0));

  for (int n : {1, 5, 40}) {
    const WeightedGraph g = test::finite_line(-n, n);
    const ScalarField f = ScalarField::from_ids(g, [](VertexId x) { return double(x); });
    const EnergyReport e = energy(g, f);
    CHECK(e.value == doctest::Approx(2.0 * n));
    CHECK_FALSE(e.truncated);
  }
  const WeightedGraph w = line_generator().window(5);
  CHECK(energy(w, ScalarField::constant(w.size(), 1.0)).truncated);
}

TEST_CASE("weighted degree") {
  GraphBuilder b;
  b.add_vertex(0, 2.0);
  b.add_vertex(1, 1.0);
  b.add_vertex(2, 1.0);
  b.add_vertex(3, 1.0);
  b.add_edge(0, 1, 1.5);
  b.add_edge(0, 2, 2.5);
  const WeightedGraph g = b.build();
  CHECK(weighted_degree(g, 0) == doctest::Approx(2.0));
  CHECK(weighted_degree(g, 3) == 0.0);
  const WeightedGraph normalized = line_generator(1, 2).window(3);
  CHECK(weighted_degree(normalized, normalized.index(0)) == doctest::Approx(1.0));
  // Incomplete vertices report the full row sum when it is known.
  const Index edge = normalized.index(4);
  CHECK_FALSE(normalized.complete(edge));
  CHECK(weighted_degree(normalized, edge) == doctest::Approx(1.0));
}

TEST_CASE("lp norms") {
  const WeightedGraph g = random_connected_graph(25, 3);
  double volume = 0;
  for (double m : g.measures()) volume += m;
  const ScalarField one = ScalarField::constant(g.size(), 1.0);
  CHECK(lp_norm(g, one, 1.0) == doctest::Approx(volume).epsilon(1e-14));
  CHECK(lp_norm(g, ScalarField::constant(g.size(), -2.5), kInfinity) == 2.5);
  CHECK(error_code([&] { lp_norm(g, one, 0.5); }) == Errc::InvalidExponent);
  LpOptions quasi;
  quasi.quasi = true;
  CHECK(lp_norm(g, one, 0.5, quasi) == doctest::Approx(volume * volume).epsilon(1e-12));
}

TEST_CASE("l1 partial sums of the decaying line example") {
  // Independent summation oracle: 2 Sum_{k=1..N} (1 - 2^-k)(k+1)^-2.
  double oracle = 0, previous = -1;
  for (int n = 1; n <= 60; ++n) {
    oracle += 2.0 * (1.0 - std::ldexp(1.0, -n)) / double((n + 1) * (n + 1));
    const auto ex = finite_volume_example(n);
    LpOptions opts;
    const auto region = ex.graph.complete_vertices();
    opts.subset = region;
    const double s = lp_norm(ex.graph, ex.f, 1.0, opts);
    CHECK(s == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(s > previous);
    previous = s;
  }
}

TEST_CASE("l2 partial sums of the decaying line example grow without bound") {
  double previous = 0;
  for (int n = 10; n <= 80; n += 10) {
    const auto ex = finite_volume_example(n);
    LpOptions opts;
    const auto region = ex.graph.complete_vertices();
    opts.subset = region;
    const double s = lp_power_sum(ex.graph, ex.f, 2.0, opts);
    CHECK(s > previous);
    previous = s;
  }
  CHECK(previous > 1e18);
}

TEST_CASE("Green's formula, energy identity and Leibniz rules on random graphs") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const WeightedGraph g = random_connected_graph(5 + trial * 3, 1000 + trial);
    const ScalarField f(test::random_values(g.size(), rng));
    const ScalarField h(test::random_values(g.size(), rng));
    double lhs = 0, self = 0;
    for (Index x = 0; x < g.size(); ++x) {
      lhs += laplacian_apply(g, f, x) * h(x) * g.measure(x);
      self += laplacian_apply(g, f, x) * f(x) * g.measure(x);
    }
    const double rhs = kernels::serial::pairing(g.adjacency(), f.values(), h.values());
    CHECK(test::close_rel(lhs, rhs, 1e-12, 1e-13));
    CHECK(test::close_rel(self, energy(g, f).value, 1e-12, 1e-13));

    std::vector<double> prod(g.size());
    for (Index x = 0; x < g.size(); ++x) prod[x] = f(x) * h(x);
    const ScalarField fh(prod);
    for (Index x = 0; x < g.size(); ++x)
      for (Index y : g.neighbors(x)) {
        const double d = gradient(fh, x, y);
        CHECK(std::abs(d - (f(y) * gradient(h, x, y) + h(x) * gradient(f, x, y))) <= 1e-12);
        CHECK(std::abs(d - (f(y) * gradient(h, x, y) + h(y) * gradient(f, x, y) +
                            gradient(f, x, y) * gradient(h, x, y))) <= 1e-12);
      }
  }
}

TEST_CASE("rescaling the measure rescales the Laplacian but not the classification") {
  std::mt19937_64 rng(5);
  const WeightedGraph g = random_connected_graph(30, 77);
  std::vector<double> m2(g.measures().begin(), g.measures().end());
  for (double& m : m2) m *= 3.0;
  const WeightedGraph g3 = g.with_measure(m2);
  const ScalarField f(test::random_values(g.size(), rng));
  for (Index x = 0; x < g.size(); ++x)
    CHECK(laplacian_apply(g3, f, x) == doctest::Approx(laplacian_apply(g, f, x) / 3.0).epsilon(1e-13));
  const auto ex = finite_volume_example(12);
  std::vector<double> unit(ex.graph.size(), 1.0);
  const WeightedGraph flat = ex.graph.with_measure(unit);
  CHECK(classify(flat, ex.f, flat.complete_vertices()).verdict == Harmonicity::harmonic);
}

TEST_CASE("window boundaries are never silently read") {
  const WeightedGraph g = line_generator().window(3);
  const ScalarField f = ScalarField::constant(g.size(), 1.0);
  CHECK(error_code([&] { laplacian_apply(g, f, g.index(4)); }) == Errc::NeighborOutsideWindow);
  ScalarField partial = f;
  partial.unset(g.index(1));
  CHECK(error_code([&] { laplacian_apply(g, partial, g.index(0)); }) == Errc::NeighborOutsideWindow);
  CHECK(error_code([&] { (void)partial(g.index(1)); }) == Errc::OutsideDomain);
}

TEST_CASE("generator windows are consistent under enlargement") {
  const auto gen = decaying_line_generator();
  const WeightedGraph small = gen.window(6), big = gen.window(14);
  for (Index x = 0; x < small.size(); ++x) {
    const Index X = big.index(small.id(x));
    CHECK(small.exact_measure(x) == big.exact_measure(X));
    if (!small.complete(x)) continue;
    const auto nb = small.neighbors(x);
    for (std::size_t k = 0; k < nb.size(); ++k) CHECK(small.weights(x)[k] == big.weight(X, big.index(small.id(nb[k]))));
  }
  const auto tree = binary_tree_generator().window(4, 1);
  CHECK(tree.size() == 63);
}

TEST_CASE("row-sum bound hook flags divergent rows") {
  auto gen = line_generator(3, 1);
  gen.set_row_sum_bound([](VertexId) { return 5.0; });
  CHECK(error_code([&] { (void)gen.window(2); }) == Errc::FormalDomainViolation);
  gen.set_row_sum_bound([](VertexId) { return 6.0; });
  // Core 2 plus halo 1: ids -3..3.
  CHECK(gen.window(2).size() == 7);
}

TEST_CASE("infinite-volume gluing keeps harmonicity at the junction") {
  const auto ex = infinite_volume_example(6, binary_tree_generator());
  const Classification k = classify(ex.graph, ex.f_exact, ex.graph.complete_vertices());
  CHECK(k.verdict == Harmonicity::harmonic);
  CHECK(laplacian_apply(ex.graph, ex.f_exact, ex.graph.index(0)) == 0);
}

TEST_CASE("graph files round-trip exactly") {
  const auto ex = finite_volume_example(8);
  std::stringstream buf;
  write_graph(buf, ex.graph, &ex.f, &ex.f_exact, {true});
  const GraphFile back = read_graph(buf);
  REQUIRE(back.graph);
  REQUIRE(back.exact_field);
  const WeightedGraph& h = *back.graph;
  CHECK(h.size() == ex.graph.size());
  CHECK(h.edge_count() == ex.graph.edge_count());
  for (Index x = 0; x < h.size(); ++x) {
    const Index y = ex.graph.index(h.id(x));
    CHECK(h.exact_measure(x) == ex.graph.exact_measure(y));
    CHECK(h.complete(x) == ex.graph.complete(y));
    CHECK((*back.exact_field)(x) == ex.f_exact(y));
  }
  CHECK(classify(h, *back.exact_field, h.complete_vertices()).verdict == Harmonicity::harmonic);
}

TEST_CASE("graph file validation") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_graph(in);
  };
  CHECK(error_code([&] { parse("#vertices\n0 1\n1 0\n#edges\n0 1 1\n"); }) == Errc::InvalidGraph);
  CHECK(error_code([&] { parse("#vertices\n0 1\n#edges\n0 0 1\n"); }) == Errc::InvalidGraph);
  CHECK(error_code([&] { parse("#vertices\n0 1\n#edges\n0 7 1\n"); }).has_value());
  const GraphFile ok = parse("% comment\n#vertices\n0 1/2\n1 0.25\n#edges\n0 1 3/4\n");
  REQUIRE(ok.graph);
  CHECK(ok.graph->exact_measure(0) == Rational(1, 2));
  CHECK(ok.graph->weight(0, 1) == 0.75);
}

TEST_CASE("connectedness is reported") {
  GraphBuilder b;
  for (int i = 0; i < 4; ++i) b.add_vertex(i, 1.0);
  b.add_edge(0, 1, 1.0);
  b.add_edge(2, 3, 1.0);
  const WeightedGraph g = b.build();
  CHECK_FALSE(g.connected());
  const auto c = g.components();
  CHECK(c[0] == c[1]);
  CHECK(c[0] != c[2]);
}

}  // TEST_SUITE
