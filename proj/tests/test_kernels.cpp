#include <doctest.h>

#include "support.hpp"
#include "wgpt/kernels.hpp"

using namespace wgpt;

TEST_SUITE("kernels") {

TEST_CASE("parallel kernels agree with the serial reference bit for bit") {
  std::mt19937_64 rng(99);
  for (int threads : {1, 2, 4, 7}) {
    kernels::set_threads(threads);
    for (int n : {1, 17, 500, 4000}) {
      const WeightedGraph g = random_connected_graph(n, 500 + n);
      const Csr& adj = g.adjacency();
      const auto f = test::random_values(g.size(), rng);
      const auto h = test::random_values(g.size(), rng);
      std::vector<double> a(g.size()), b(g.size());
      kernels::serial::laplacian(adj, g.measures(), f, a);
      kernels::parallel::laplacian(adj, g.measures(), f, b);
      CHECK(a == b);
      CHECK(kernels::serial::pairing(adj, f, h) == kernels::parallel::pairing(adj, f, h));
      CHECK(kernels::serial::energy(adj, f) == kernels::parallel::energy(adj, f));
      CHECK(kernels::serial::weighted_inner(g.measures(), f, h) == kernels::parallel::weighted_inner(g.measures(), f, h));
      std::vector<double> inv(g.size());
      for (Index x = 0; x < g.size(); ++x) inv[x] = g.window_row_sum(x) > 0 ? 1.0 / g.window_row_sum(x) : 0.0;
      kernels::serial::transition_step(adj, inv, f, a);
      kernels::parallel::transition_step(adj, inv, f, b);
      CHECK(a == b);
    }
  }
  kernels::set_threads(0);
}

TEST_CASE("pairing is symmetric and energy is the diagonal") {
  std::mt19937_64 rng(3);
  const WeightedGraph g = random_connected_graph(60, 8);
  const auto f = test::random_values(g.size(), rng);
  const auto h = test::random_values(g.size(), rng);
  CHECK(kernels::serial::pairing(g.adjacency(), f, h) ==
        doctest::Approx(kernels::serial::pairing(g.adjacency(), h, f)).epsilon(1e-14));
  CHECK(kernels::serial::energy(g.adjacency(), f) ==
        doctest::Approx(kernels::serial::pairing(g.adjacency(), f, f)).epsilon(1e-14));
}

}  // TEST_SUITE
