#include "wgpt/hadamard.hpp"

#include <deque>

namespace wgpt {

// Euclidean -------------------------------------------------------------------

double EuclideanSpace::distance(const Point& a, const Point& b) const {
  if (a.size() != dim_ || b.size() != dim_) fail(Errc::UsageError, "point has the wrong dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

EuclideanSpace::Point EuclideanSpace::geodesic(const Point& a, const Point& b, double t) const {
  if (a.size() != dim_ || b.size() != dim_) fail(Errc::UsageError, "point has the wrong dimension");
  Point out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = (1 - t) * a[i] + t * b[i];
  return out;
}

EuclideanSpace::Point EuclideanSpace::barycenter(const PointMeasure<Point>& nu) const {
  require_probability(nu);
  Point out(dim_, 0.0);
  for (const auto& [p, w] : nu.atoms) {
    if (p.size() != dim_) fail(Errc::UsageError, "point has the wrong dimension");
    for (std::size_t i = 0; i < dim_; ++i) out[i] += w * p[i];
  }
  return out;
}

// Metric tree -------------------------------------------------------------------

MetricTree::MetricTree(std::size_t nodes, std::vector<Edge> edges) : edges_(std::move(edges)) {
  if (nodes < 2 || edges_.size() != nodes - 1) fail(Errc::InvalidGraph, "a tree on n >= 2 nodes has n - 1 edges");
  incident_.resize(nodes);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    if (ed.u >= nodes || ed.v >= nodes || ed.u == ed.v) fail(Errc::InvalidGraph, "tree edge with bad endpoints");
    if (!(ed.length > 0) || !std::isfinite(ed.length)) fail(Errc::InvalidGraph, "tree edge lengths must be positive");
    incident_[ed.u].emplace_back(ed.v, e);
    incident_[ed.v].emplace_back(ed.u, e);
  }
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  parent_.assign(nodes, none);
  parent_edge_.assign(nodes, none);
  depth_.assign(nodes, 0);
  root_dist_.assign(nodes, 0.0);
  std::vector<char> seen(nodes, 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  parent_[0] = 0;
  std::size_t count = 1;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (const auto& [y, e] : incident_[x]) {
      if (seen[y]) continue;
      seen[y] = 1;
      ++count;
      parent_[y] = x;
      parent_edge_[y] = e;
      depth_[y] = depth_[x] + 1;
      root_dist_[y] = root_dist_[x] + edges_[e].length;
      queue.push_back(y);
    }
  }
  if (count != nodes) fail(Errc::InvalidGraph, "tree edges do not connect all nodes");
  std::size_t levels = 1;
  while ((std::size_t(1) << levels) < nodes) ++levels;
  up_.assign(levels, parent_);
  for (std::size_t k = 1; k < levels; ++k)
    for (std::size_t x = 0; x < nodes; ++x) up_[k][x] = up_[k - 1][up_[k - 1][x]];
}

MetricTree MetricTree::tripod(double length) {
  return MetricTree(4, {{0, 1, length}, {0, 2, length}, {0, 3, length}});
}

void MetricTree::validate(const Point& p) const {
  if (p.edge >= edges_.size()) fail(Errc::UsageError, "tree point refers to an unknown edge");
  if (!(p.offset >= 0) || !(p.offset <= edges_[p.edge].length))
    fail(Errc::UsageError, "tree point offset outside its edge");
}

MetricTree::Point MetricTree::node_point(std::size_t node) const {
  if (node >= node_count()) fail(Errc::UsageError, "unknown tree node");
  if (node == 0) {
    const std::size_t e = incident_[0].front().second;
    return {e, edges_[e].u == 0 ? 0.0 : edges_[e].length};
  }
  const std::size_t e = parent_edge_[node];
  return {e, edges_[e].u == node ? 0.0 : edges_[e].length};
}

std::size_t MetricTree::lca(std::size_t a, std::size_t b) const {
  if (depth_[a] < depth_[b]) std::swap(a, b);
  std::size_t diff = depth_[a] - depth_[b];
  for (std::size_t k = 0; diff; ++k, diff >>= 1)
    if (diff & 1) a = up_[k][a];
  if (a == b) return a;
  for (std::size_t k = up_.size(); k-- > 0;) {
    if (up_[k][a] != up_[k][b]) {
      a = up_[k][a];
      b = up_[k][b];
    }
  }
  return parent_[a];
}

double MetricTree::node_distance(std::size_t a, std::size_t b) const {
  return root_dist_[a] + root_dist_[b] - 2 * root_dist_[lca(a, b)];
}

std::vector<std::size_t> MetricTree::node_path(std::size_t a, std::size_t b) const {
  const std::size_t c = lca(a, b);
  std::vector<std::size_t> left, right;
  for (std::size_t x = a; x != c; x = parent_[x]) left.push_back(x);
  left.push_back(c);
  for (std::size_t x = b; x != c; x = parent_[x]) right.push_back(x);
  left.insert(left.end(), right.rbegin(), right.rend());
  return left;
}

double MetricTree::to_node(const Point& p, std::size_t node) const {
  const auto& e = edges_[p.edge];
  return std::min(p.offset + node_distance(e.u, node), e.length - p.offset + node_distance(e.v, node));
}

double MetricTree::distance(const Point& a, const Point& b) const {
  validate(a);
  validate(b);
  if (a.edge == b.edge) return std::abs(a.offset - b.offset);
  const auto& e = edges_[a.edge];
  return std::min(a.offset + to_node(b, e.u), e.length - a.offset + to_node(b, e.v));
}

MetricTree::Point MetricTree::geodesic(const Point& a, const Point& b, double t) const {
  validate(a);
  validate(b);
  if (t <= 0) return a;
  if (t >= 1) return b;
  if (a.edge == b.edge) return {a.edge, a.offset + t * (b.offset - a.offset)};
  const auto& ea = edges_[a.edge];
  const auto& eb = edges_[b.edge];
  // Exit node of a's edge and entry node of b's edge on the connecting path.
  double best = std::numeric_limits<double>::infinity();
  std::size_t xa = ea.u, xb = eb.u;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t na = i ? ea.v : ea.u;
    const double da = i ? ea.length - a.offset : a.offset;
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t nb = j ? eb.v : eb.u;
      const double db = j ? eb.length - b.offset : b.offset;
      const double d = da + node_distance(na, nb) + db;
      if (d < best) {
        best = d;
        xa = na;
        xb = nb;
      }
    }
  }
  struct Segment {
    std::size_t edge;
    double from, to;
  };
  auto offset_of = [&](std::size_t e, std::size_t node) { return edges_[e].u == node ? 0.0 : edges_[e].length; };
  std::vector<Segment> segs{{a.edge, a.offset, offset_of(a.edge, xa)}};
  const auto path = node_path(xa, xb);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const std::size_t x = path[i], y = path[i + 1];
    const std::size_t e = parent_[x] == y && x != 0 ? parent_edge_[x] : parent_edge_[y];
    segs.push_back({e, offset_of(e, x), offset_of(e, y)});
  }
  segs.push_back({b.edge, offset_of(b.edge, xb), b.offset});
  double remaining = t * best;
  for (const auto& s : segs) {
    const double len = std::abs(s.to - s.from);
    if (remaining <= len) {
      const double dir = s.to >= s.from ? 1.0 : -1.0;
      return {s.edge, std::clamp(s.from + dir * remaining, 0.0, edges_[s.edge].length)};
    }
    remaining -= len;
  }
  return b;
}

double MetricTree::edge_minimizer(std::size_t e, const PointMeasure<Point>& nu, double* value) const {
  const auto& ed = edges_[e];
  // On one edge the variance is the single quadratic Sum w (s - c_i)^2.
  std::vector<double> c;
  c.reserve(nu.atoms.size());
  double mean = 0.0;
  for (const auto& [p, w] : nu.atoms) {
    double ci;
    if (p.edge == e) {
      ci = p.offset;
    } else {
      const double du = to_node(p, ed.u), dv = to_node(p, ed.v);
      ci = du <= dv ? -du : ed.length + dv;
    }
    c.push_back(ci);
    mean += w * ci;
  }
  const double s = std::clamp(mean, 0.0, ed.length);
  if (value) {
    double v = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) v += nu.atoms[i].second * (s - c[i]) * (s - c[i]);
    *value = v;
  }
  return s;
}

MetricTree::Point MetricTree::barycenter(const PointMeasure<Point>& nu) const {
  require_probability(nu);
  for (const auto& a : nu.atoms) validate(a.first);
  std::size_t e = nu.atoms.front().first.edge;
  std::size_t prev_node = std::numeric_limits<std::size_t>::max();
  const std::size_t max_steps = 4 * edges_.size() + 16;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const auto& ed = edges_[e];
    const double s = edge_minimizer(e, nu, nullptr);
    if (s > 0 && s < ed.length) return {e, s};
    const std::size_t node = s <= 0 ? ed.u : ed.v;
    // Steepest descending edge out of the node, from the edge quadratics:
    // leaving u along e' has slope -2 mean_c, leaving v has slope 2 (mean_c - L).
    double steepest = 0.0;
    std::size_t next = e;
    for (const auto& [nbr, e2] : incident_[node]) {
      if (nbr == prev_node && e2 == e) continue;
      const auto& ed2 = edges_[e2];
      double mean = 0.0;
      for (const auto& [p, w] : nu.atoms) {
        double ci;
        if (p.edge == e2) ci = p.offset;
        else {
          const double du = to_node(p, ed2.u), dv = to_node(p, ed2.v);
          ci = du <= dv ? -du : ed2.length + dv;
        }
        mean += w * ci;
      }
      const double slope = ed2.u == node ? -2 * mean : 2 * (mean - ed2.length);
      if (slope < steepest) {
        steepest = slope;
        next = e2;
      }
    }
    const double scale = 1e-14 * std::max(1.0, variance(*this, {e, s}, nu));
    if (next == e || steepest > -scale) return {e, s};
    prev_node = node;
    e = next;
  }
  return barycenter_exhaustive(nu);
}

MetricTree::Point MetricTree::barycenter_exhaustive(const PointMeasure<Point>& nu) const {
  require_probability(nu);
  double best = std::numeric_limits<double>::infinity();
  Point out{0, 0.0};
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    double v;
    const double s = edge_minimizer(e, nu, &v);
    if (v < best) {
      best = v;
      out = {e, s};
    }
  }
  return out;
}

bool MetricTree::on_geodesic(const Point& a, const Point& b, const Point& z, double tol) const {
  return distance(a, z) + distance(z, b) - distance(a, b) <= tol;
}

// Poincare disk ------------------------------------------------------------------

namespace {

using C = std::complex<double>;
// Isometry moving a to the origin, and its inverse.
C to_origin(const C& a, const C& z) { return (z - a) / (1.0 - std::conj(a) * z); }
C from_origin(const C& a, const C& w) { return (w + a) / (1.0 + std::conj(a) * w); }

}  // namespace

void PoincareDisk::validate(const Point& z) const {
  if (!(std::norm(z) < 1.0)) fail(Errc::UsageError, "disk points need |z| < 1");
}

double PoincareDisk::distance(const Point& a, const Point& b) const {
  const double num = std::abs(a - b);
  if (num == 0) return 0.0;
  return 2.0 * std::asinh(num / std::sqrt((1.0 - std::norm(a)) * (1.0 - std::norm(b))));
}

PoincareDisk::Point PoincareDisk::log(const Point& base, const Point& target) const {
  const C z = to_origin(base, target);
  const double r = std::abs(z);
  if (r == 0) return {0.0, 0.0};
  return (2.0 * std::atanh(r) / r) * z;
}

PoincareDisk::Point PoincareDisk::exp(const Point& base, const Point& v) const {
  const double n = std::abs(v);
  if (n == 0) return base;
  return from_origin(base, (std::tanh(0.5 * n) / n) * v);
}

PoincareDisk::Point PoincareDisk::geodesic(const Point& a, const Point& b, double t) const {
  if (t <= 0) return a;
  if (t >= 1) return b;
  return exp(a, t * log(a, b));
}

PoincareDisk::Point PoincareDisk::barycenter(const PointMeasure<Point>& nu) const {
  require_probability(nu);
  for (const auto& a : nu.atoms) validate(a.first);
  Point y = nu.atoms.front().first;
  double fy = variance(*this, y, nu);
  for (const auto& [p, w] : nu.atoms) {
    const double fp = variance(*this, p, nu);
    if (fp < fy) {
      fy = fp;
      y = p;
    }
  }
  auto karcher_step = [&](const Point& at) {
    C step{0.0, 0.0};
    for (const auto& [p, w] : nu.atoms) step += w * log(at, p);
    return step;
  };
  C step = karcher_step(y);
  for (int it = 0; it < 10000; ++it) {
    if (2.0 * std::abs(step) <= 1e-12) break;
    bool moved = false;
    for (double tau = 1.0; tau > 1e-12; tau *= 0.5) {
      const Point cand = exp(y, tau * step);
      const double fc = variance(*this, cand, nu);
      const C cand_step = karcher_step(cand);
      // Near the minimum the variance is flat to rounding, so a smaller
      // gradient at no larger value also counts as progress.
      const bool tie = fc <= fy * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
      if (fc < fy || (tie && std::abs(cand_step) < std::abs(step))) {
        y = cand;
        fy = std::min(fc, fy);
        step = cand_step;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return y;
}

// Random walk ---------------------------------------------------------------------

std::vector<std::pair<Index, double>> random_walk_measure(const WeightedGraph& g, Index x) {
  g.require_complete(x, "random walk");
  const auto nb = g.neighbors(x);
  const auto w = g.weights(x);
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0)) fail(Errc::IsolatedVertex, "vertex " + std::to_string(g.id(x)) + " has no edges");
  std::vector<std::pair<Index, double>> out;
  out.reserve(nb.size());
  for (std::size_t k = 0; k < nb.size(); ++k) out.emplace_back(nb[k], w[k] / total);
  return out;
}

}  // namespace wgpt
