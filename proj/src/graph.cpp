#include "wgpt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "wgpt/error.hpp"

namespace wgpt {

std::optional<Index> WeightedGraph::find(VertexId v) const {
  const auto it = lookup_.find(v);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Index WeightedGraph::index(VertexId v) const {
  const auto it = lookup_.find(v);
  if (it == lookup_.end()) fail(Errc::UnknownVertex, "vertex " + std::to_string(v) + " is not in the graph");
  return it->second;
}

double WeightedGraph::weight(Index x, Index y) const {
  const auto nb = neighbors(x);
  const auto it = std::lower_bound(nb.begin(), nb.end(), y);
  if (it == nb.end() || *it != y) return 0.0;
  return weights(x)[static_cast<std::size_t>(it - nb.begin())];
}

bool WeightedGraph::all_complete() const {
  return std::all_of(complete_.begin(), complete_.end(), [](char c) { return c != 0; });
}

std::vector<Index> WeightedGraph::complete_vertices() const {
  std::vector<Index> out;
  for (Index x = 0; x < size(); ++x)
    if (complete_[x]) out.push_back(x);
  return out;
}

void WeightedGraph::require_complete(Index x, const char* context) const {
  if (!complete_[x])
    fail(Errc::NeighborOutsideWindow,
         std::string(context) + ": neighbours of vertex " + std::to_string(ids_[x]) + " leave the window");
}

double WeightedGraph::window_row_sum(Index x) const {
  const auto w = weights(x);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

std::vector<Index> WeightedGraph::components() const {
  constexpr Index unset = std::numeric_limits<Index>::max();
  std::vector<Index> label(size(), unset);
  Index next = 0;
  std::vector<Index> stack;
  for (Index s = 0; s < size(); ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index x = stack.back();
      stack.pop_back();
      for (Index y : neighbors(x)) {
        if (label[y] == unset) {
          label[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return label;
}

bool WeightedGraph::connected() const {
  if (size() == 0) return true;
  const auto label = components();
  return std::all_of(label.begin(), label.end(), [](Index c) { return c == 0; });
}

WeightedGraph WeightedGraph::with_measure(std::vector<double> m) const {
  if (m.size() != size()) fail(Errc::InvalidGraph, "measure vector has wrong length");
  for (Index x = 0; x < size(); ++x)
    if (!(m[x] > 0.0) || !std::isfinite(m[x]))
      fail(Errc::InvalidGraph, "measure must be positive at vertex " + std::to_string(ids_[x]));
  WeightedGraph g = *this;
  g.m_ = std::move(m);
  g.exact_m_.clear();
  g.exact_w_.clear();
  return g;
}

// ---------------------------------------------------------------------------

Index GraphBuilder::require(VertexId v) const {
  const auto it = lookup_.find(v);
  if (it == lookup_.end()) fail(Errc::UnknownVertex, "edge references undeclared vertex " + std::to_string(v));
  return it->second;
}

void GraphBuilder::add_vertex(VertexId v, double m) {
  if (exact_) fail(Errc::InvalidGraph, "exact builder requires rational measures");
  if (lookup_.count(v)) fail(Errc::InvalidGraph, "duplicate vertex " + std::to_string(v));
  if (!(m > 0.0) || !std::isfinite(m)) fail(Errc::InvalidGraph, "measure must be positive at vertex " + std::to_string(v));
  lookup_.emplace(v, static_cast<Index>(ids_.size()));
  ids_.push_back(v);
  m_.push_back(m);
}

void GraphBuilder::add_vertex(VertexId v, const Rational& m) {
  if (lookup_.count(v)) fail(Errc::InvalidGraph, "duplicate vertex " + std::to_string(v));
  if (m <= 0) fail(Errc::InvalidGraph, "measure must be positive at vertex " + std::to_string(v));
  lookup_.emplace(v, static_cast<Index>(ids_.size()));
  ids_.push_back(v);
  m_.push_back(to_double(m));
  if (exact_) exact_m_.push_back(m);
}

void GraphBuilder::add_edge(VertexId a, VertexId b, double mu) {
  if (exact_) fail(Errc::InvalidGraph, "exact builder requires rational edge weights");
  if (a == b) fail(Errc::InvalidGraph, "self-loop at vertex " + std::to_string(a));
  if (!(mu >= 0.0) || !std::isfinite(mu)) fail(Errc::InvalidGraph, "edge weight must be non-negative and finite");
  if (mu == 0.0) return;
  edges_.push_back({require(a), require(b), mu, Rational(0)});
}

void GraphBuilder::add_edge(VertexId a, VertexId b, const Rational& mu) {
  if (a == b) fail(Errc::InvalidGraph, "self-loop at vertex " + std::to_string(a));
  if (mu < 0) fail(Errc::InvalidGraph, "edge weight must be non-negative");
  if (mu == 0) return;
  edges_.push_back({require(a), require(b), to_double(mu), exact_ ? mu : Rational(0)});
}

void GraphBuilder::set_incomplete(VertexId v, double full_row_sum, bool row_sum_known) {
  incomplete_[require(v)] = {full_row_sum, row_sum_known};
}

WeightedGraph GraphBuilder::build() const {
  WeightedGraph g;
  const std::size_t n = ids_.size();
  g.ids_ = ids_;
  g.lookup_ = lookup_;
  g.m_ = m_;
  g.window_ = window_;

  struct Half {
    Index from, to;
    double mu;
    const Rational* exact;
  };
  std::vector<Half> halves;
  halves.reserve(edges_.size() * 2);
  for (const auto& e : edges_) {
    halves.push_back({e.a, e.b, e.mu, &e.exact});
    halves.push_back({e.b, e.a, e.mu, &e.exact});
  }
  std::sort(halves.begin(), halves.end(),
            [](const Half& l, const Half& r) { return l.from != r.from ? l.from < r.from : l.to < r.to; });
  // Repeated pairs must agree.
  std::vector<Half> unique;
  unique.reserve(halves.size());
  for (const auto& h : halves) {
    if (!unique.empty() && unique.back().from == h.from && unique.back().to == h.to) {
      const bool same = exact_ ? (*unique.back().exact == *h.exact) : (unique.back().mu == h.mu);
      if (!same)
        fail(Errc::InvalidGraph, "conflicting weights for edge " + std::to_string(ids_[h.from]) + " " +
                                     std::to_string(ids_[h.to]));
      continue;
    }
    unique.push_back(h);
  }

  g.adj_.offsets.assign(n + 1, 0);
  for (const auto& h : unique) ++g.adj_.offsets[h.from + 1];
  for (std::size_t i = 0; i < n; ++i) g.adj_.offsets[i + 1] += g.adj_.offsets[i];
  g.adj_.targets.reserve(unique.size());
  g.adj_.weights.reserve(unique.size());
  for (const auto& h : unique) {
    g.adj_.targets.push_back(h.to);
    g.adj_.weights.push_back(h.mu);
  }
  if (exact_) {
    g.exact_m_ = exact_m_;
    g.exact_w_.reserve(unique.size());
    for (const auto& h : unique) g.exact_w_.push_back(*h.exact);
  }

  g.complete_.assign(n, 1);
  g.row_sum_.assign(n, 0.0);
  g.row_sum_known_.assign(n, 1);
  for (Index x = 0; x < n; ++x) g.row_sum_[x] = g.window_row_sum(x);
  for (const auto& [x, info] : incomplete_) {
    g.complete_[x] = 0;
    g.row_sum_known_[x] = info.second ? 1 : 0;
    g.row_sum_[x] = info.second ? info.first : g.row_sum_[x];
  }
  return g;
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(std::vector<double> values)
    : values_(std::move(values)), defined_(values_.size(), 1) {}

ScalarField::ScalarField(std::vector<double> values, std::vector<char> defined)
    : values_(std::move(values)), defined_(std::move(defined)) {
  if (values_.size() != defined_.size()) fail(Errc::InvalidGraph, "field mask length mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!defined_[i]) values_[i] = std::numeric_limits<double>::quiet_NaN();
}

ScalarField ScalarField::undefined(std::size_t n) {
  return ScalarField(std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()), std::vector<char>(n, 0));
}

ScalarField ScalarField::from_ids(const WeightedGraph& g, const std::function<double(VertexId)>& fn) {
  std::vector<double> v(g.size());
  for (Index x = 0; x < g.size(); ++x) v[x] = fn(g.id(x));
  return ScalarField(std::move(v));
}

bool ScalarField::fully_defined() const {
  return std::all_of(defined_.begin(), defined_.end(), [](char c) { return c != 0; });
}

double ScalarField::operator()(Index x) const {
  if (x >= values_.size() || !defined_[x])
    fail(Errc::OutsideDomain, "field evaluated outside its domain at index " + std::to_string(x));
  return values_[x];
}

ExactField::ExactField(std::vector<Rational> values) : values_(std::move(values)), defined_(values_.size(), 1) {}

ExactField ExactField::from_ids(const WeightedGraph& g, const std::function<Rational(VertexId)>& fn) {
  std::vector<Rational> v(g.size());
  for (Index x = 0; x < g.size(); ++x) v[x] = fn(g.id(x));
  return ExactField(std::move(v));
}

const Rational& ExactField::operator()(Index x) const {
  if (x >= values_.size() || !defined_[x])
    fail(Errc::OutsideDomain, "field evaluated outside its domain at index " + std::to_string(x));
  return values_[x];
}

ScalarField ExactField::to_double() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = wgpt::to_double(values_[i]);
  return ScalarField(std::move(v), defined_);
}

std::vector<Index> indices_of(const WeightedGraph& g, std::span<const VertexId> ids) {
  std::vector<Index> out;
  out.reserve(ids.size());
  for (VertexId v : ids) out.push_back(g.index(v));
  return out;
}

}  // namespace wgpt
