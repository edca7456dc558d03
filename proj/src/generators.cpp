#include "wgpt/generators.hpp"

#include <cstdlib>
#include <deque>
#include <random>
#include <unordered_map>

#include "wgpt/error.hpp"

namespace wgpt {

GraphGenerator::GraphGenerator(std::string name, VertexId root, Rule rule, bool exact)
    : name_(std::move(name)), root_(root), rule_(std::move(rule)), exact_(exact) {}

WeightedGraph GraphGenerator::window(int core_hops, int halo_hops) const {
  if (core_hops < 0 || halo_hops < 0) fail(Errc::UsageError, "window radii must be non-negative");
  const int radius = core_hops + halo_hops;

  std::unordered_map<VertexId, int> depth;
  std::unordered_map<VertexId, LocalData> data;
  std::vector<VertexId> order;
  std::deque<VertexId> queue{root_};
  depth[root_] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    order.push_back(v);
    auto local = rule_(v);
    if (local.m <= 0) fail(Errc::InvalidGraph, name_ + ": non-positive measure at " + std::to_string(v));
    if (depth[v] < radius) {
      for (const auto& nb : local.neighbors) {
        if (depth.emplace(nb.first, depth[v] + 1).second) queue.push_back(nb.first);
      }
    }
    data.emplace(v, std::move(local));
  }

  GraphBuilder builder(exact_);
  for (VertexId v : order) {
    if (exact_)
      builder.add_vertex(v, data.at(v).m);
    else
      builder.add_vertex(v, to_double(data.at(v).m));
  }
  for (VertexId v : order) {
    const auto& local = data.at(v);
    double full = 0.0;
    for (const auto& [w, mu] : local.neighbors) {
      full += to_double(mu);
      if (!depth.count(w)) continue;
      if (exact_)
        builder.add_edge(v, w, mu);
      else
        builder.add_edge(v, w, to_double(mu));
    }
    if (row_sum_bound_ && full > row_sum_bound_(v))
      fail(Errc::FormalDomainViolation, name_ + ": row sum at " + std::to_string(v) + " exceeds the declared bound");
    if (depth.at(v) >= radius) builder.set_incomplete(v, full, true);
  }
  builder.set_window(WindowInfo{name_, root_, core_hops, halo_hops});
  return builder.build();
}

GraphGenerator line_generator(const Rational& mu, const Rational& m) {
  return GraphGenerator("line", 0, [mu, m](VertexId x) {
    return LocalData{m, {{x - 1, mu}, {x + 1, mu}}};
  });
}

namespace {

VertexId iabs(VertexId x) { return x < 0 ? -x : x; }

Rational decaying_mu(VertexId x, VertexId y) {
  return pow2(static_cast<int>(1 - std::max(iabs(x), iabs(y))));
}

}  // namespace

GraphGenerator decaying_line_generator() {
  return GraphGenerator("decaying-line", 0, [](VertexId x) {
    const VertexId a = iabs(x);
    Rational m = pow2(static_cast<int>(-a)) / Rational((a + 1) * (a + 1));
    return LocalData{m, {{x - 1, decaying_mu(x, x - 1)}, {x + 1, decaying_mu(x, x + 1)}}};
  });
}

GraphGenerator binary_tree_generator(const Rational& mu, const Rational& m) {
  return GraphGenerator("binary-tree", 0, [mu, m](VertexId v) {
    LocalData d{m, {}};
    if (v > 0) d.neighbors.emplace_back((v - 1) / 2, mu);
    d.neighbors.emplace_back(2 * v + 1, mu);
    d.neighbors.emplace_back(2 * v + 2, mu);
    return d;
  });
}

GraphGenerator glue_generators(const GraphGenerator& base, VertexId base_vertex, const GraphGenerator& attachment,
                               VertexId id_offset) {
  const VertexId aroot = attachment.root();
  auto rename = [=](VertexId a) { return a == aroot ? base_vertex : id_offset + a; };
  return GraphGenerator(base.name() + "+" + attachment.name(), base.root(),
                        [=](VertexId v) {
                          if (v >= id_offset) {
                            auto d = attachment.local(v - id_offset);
                            for (auto& nb : d.neighbors) nb.first = rename(nb.first);
                            return d;
                          }
                          auto d = base.local(v);
                          if (v == base_vertex) {
                            for (auto& nb : attachment.local(aroot).neighbors)
                              d.neighbors.emplace_back(rename(nb.first), nb.second);
                          }
                          return d;
                        });
}

Rational decaying_line_harmonic(VertexId x) {
  if (x == 0) return Rational(0);
  const Rational mag = pow2(static_cast<int>(iabs(x))) - 1;
  return x > 0 ? mag : Rational(-mag);
}

ExampleInstance finite_volume_example(int n) {
  if (n < 1) fail(Errc::UsageError, "finite-volume example needs N >= 1");
  ExampleInstance ex;
  ex.graph = decaying_line_generator().window(n, 1);
  ex.f_exact = ExactField::from_ids(ex.graph, decaying_line_harmonic);
  ex.f = ex.f_exact.to_double();
  return ex;
}

ExampleInstance infinite_volume_example(int n, const GraphGenerator& attachment) {
  if (n < 1) fail(Errc::UsageError, "infinite-volume example needs N >= 1");
  const auto glued = glue_generators(decaying_line_generator(), 0, attachment, kAttachmentIdOffset);
  ExampleInstance ex;
  ex.graph = glued.window(n, 1);
  ex.f_exact = ExactField::from_ids(ex.graph, [](VertexId v) {
    return v >= kAttachmentIdOffset ? Rational(0) : decaying_line_harmonic(v);
  });
  ex.f = ex.f_exact.to_double();
  return ex;
}

WeightedGraph path_graph(int n, double mu, double m) {
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(i, m);
  for (int i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1, mu);
  return b.build();
}

namespace {

template <class Attach>
WeightedGraph random_graph_impl(int n, std::uint64_t seed, const RandomGraphOptions& o, Attach attach_chords) {
  if (n < 1) fail(Errc::UsageError, "random graph needs at least one vertex");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mu_dist(o.mu_min, o.mu_max);
  std::uniform_real_distribution<double> m_dist(o.m_min, o.m_max);
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(i, m_dist(rng));
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    b.add_edge(parent(rng), i, mu_dist(rng));
  }
  const double p = o.extra_edge_probability;
  if (attach_chords && p > 0) {
    // Each pair i < j independently with probability p, visiting only the
    // chosen pairs: gaps between successes are geometric.
    std::vector<std::pair<int, int>> chords;
    std::geometric_distribution<long long> gap(std::min(p, 1.0));
    int i = 0;
    long long j = 0;  // next candidate partner of i, as an offset past i
    while (i < n) {
      j += gap(rng);
      while (i < n && j >= n - i - 1) {
        j -= n - i - 1;
        ++i;
      }
      if (i >= n) break;
      chords.emplace_back(i, i + 1 + int(j));
      ++j;
    }
    GraphBuilder probe = b;
    const auto tree = probe.build();
    // A chord may duplicate a tree edge; keep the tree weight.
    for (auto [a, c] : chords)
      if (tree.weight(static_cast<Index>(a), static_cast<Index>(c)) == 0.0) b.add_edge(a, c, mu_dist(rng));
  }
  return b.build();
}

}  // namespace

WeightedGraph random_connected_graph(int n, std::uint64_t seed, const RandomGraphOptions& opts) {
  return random_graph_impl(n, seed, opts, true);
}

WeightedGraph random_tree(int n, std::uint64_t seed, const RandomGraphOptions& opts) {
  return random_graph_impl(n, seed, opts, false);
}

}  // namespace wgpt
