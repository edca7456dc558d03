#include "wgpt/laplacian.hpp"

#include <algorithm>
#include <cmath>

#include "wgpt/error.hpp"
#include "wgpt/kernels.hpp"

namespace wgpt {

namespace {

void require_neighbors_defined(const WeightedGraph& g, const ScalarField& f, Index x, const char* ctx) {
  g.require_complete(x, ctx);
  if (!f.defined(x))
    fail(Errc::NeighborOutsideWindow, std::string(ctx) + ": field undefined at vertex " + std::to_string(g.id(x)));
  for (Index y : g.neighbors(x))
    if (!f.defined(y))
      fail(Errc::NeighborOutsideWindow,
           std::string(ctx) + ": field undefined at neighbour " + std::to_string(g.id(y)));
}

}  // namespace

double laplacian_apply(const WeightedGraph& g, const ScalarField& f, Index x) {
  require_neighbors_defined(g, f, x, "laplacian");
  const auto nb = g.neighbors(x);
  const auto w = g.weights(x);
  double acc = 0.0, abs_sum = 0.0;
  const double fx = f(x);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    const double fy = f(nb[k]);
    acc += w[k] * (fx - fy);
    abs_sum += w[k] * std::abs(fy);
  }
  if (!std::isfinite(abs_sum))
    fail(Errc::FormalDomainViolation, "Sum mu |f| diverges at vertex " + std::to_string(g.id(x)));
  return acc / g.measure(x);
}

Rational laplacian_apply(const WeightedGraph& g, const ExactField& f, Index x) {
  if (!g.has_exact()) fail(Errc::NoExactData, "graph carries no rational weights");
  g.require_complete(x, "laplacian");
  const auto nb = g.neighbors(x);
  const auto w = g.exact_weights(x);
  Rational acc = 0;
  const Rational& fx = f(x);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (!f.defined(nb[k]))
      fail(Errc::NeighborOutsideWindow, "laplacian: field undefined at neighbour " + std::to_string(g.id(nb[k])));
    acc += w[k] * (fx - f(nb[k]));
  }
  return acc / g.exact_measure(x);
}

std::vector<double> laplacian_on(const WeightedGraph& g, const ScalarField& f, std::span<const Index> region) {
  for (Index x : region) require_neighbors_defined(g, f, x, "laplacian");
  std::vector<double> all(g.size());
  kernels::parallel::laplacian(g.adjacency(), g.measures(), f.values(), all);
  std::vector<double> out;
  out.reserve(region.size());
  for (Index x : region) {
    if (!std::isfinite(all[x]))
      fail(Errc::FormalDomainViolation, "Delta f is not finite at vertex " + std::to_string(g.id(x)));
    out.push_back(all[x]);
  }
  return out;
}

double gradient(const ScalarField& f, Index x, Index y) {
  if (!f.defined(x) || !f.defined(y)) fail(Errc::NeighborOutsideWindow, "gradient: endpoint outside field domain");
  return f(x) - f(y);
}

EnergyReport energy(const WeightedGraph& g, const ScalarField& f) {
  const auto& adj = g.adjacency();
  for (Index x = 0; x < g.size(); ++x) {
    if (adj.offsets[x] == adj.offsets[x + 1]) continue;
    if (!f.defined(x))
      fail(Errc::NeighborOutsideWindow, "energy: field undefined at edge endpoint " + std::to_string(g.id(x)));
  }
  return {kernels::parallel::energy(adj, f.values()), !g.all_complete()};
}

double weighted_degree(const WeightedGraph& g, Index x) { return g.row_sum(x) / g.measure(x); }

double lp_power_sum(const WeightedGraph& g, const ScalarField& f, double p, const LpOptions& opts) {
  if (std::isnan(p) || p <= 0.0 || (p < 1.0 && !opts.quasi))
    fail(Errc::InvalidExponent, "exponent p = " + std::to_string(p) + " is not admissible");
  if (!opts.weight.empty() && opts.weight.size() != g.size())
    fail(Errc::UsageError, "weight vector has wrong length");
  auto term = [&](Index x) {
    const double w = opts.weight.empty() ? 1.0 : opts.weight[x];
    return std::pow(std::abs(f(x)), p) * g.measure(x) * w;
  };
  double total = 0.0;
  if (opts.subset.empty()) {
    for (Index x = 0; x < g.size(); ++x)
      if (f.defined(x)) total += term(x);
  } else {
    for (Index x : opts.subset) total += term(x);
  }
  return total;
}

double lp_norm(const WeightedGraph& g, const ScalarField& f, double p, const LpOptions& opts) {
  if (std::isinf(p) && p > 0) {
    double sup = 0.0;
    if (opts.subset.empty()) {
      for (Index x = 0; x < g.size(); ++x)
        if (f.defined(x)) sup = std::max(sup, std::abs(f(x)));
    } else {
      for (Index x : opts.subset) sup = std::max(sup, std::abs(f(x)));
    }
    return sup;
  }
  return std::pow(lp_power_sum(g, f, p, opts), 1.0 / p);
}

const char* to_string(Harmonicity h) {
  switch (h) {
    case Harmonicity::harmonic: return "harmonic";
    case Harmonicity::subharmonic: return "subharmonic";
    case Harmonicity::superharmonic: return "superharmonic";
    case Harmonicity::none: return "none";
  }
  return "none";
}

namespace {

void finish(Classification& c, double tol) {
  if (c.max_abs <= tol) {
    c.verdict = Harmonicity::harmonic;
    c.residual = c.max_abs;
  } else if (c.max_positive <= tol) {
    c.verdict = Harmonicity::subharmonic;
    c.residual = c.max_positive;
  } else if (c.max_negative <= tol) {
    c.verdict = Harmonicity::superharmonic;
    c.residual = c.max_negative;
  } else {
    c.verdict = Harmonicity::none;
    c.residual = c.max_abs;
  }
}

}  // namespace

Classification classify(const WeightedGraph& g, const ScalarField& f, std::span<const Index> region, double tol) {
  Classification c;
  const auto lap = laplacian_on(g, f, region);
  for (std::size_t i = 0; i < region.size(); ++i) {
    const double d = lap[i];
    if (std::abs(d) > c.max_abs) {
      c.max_abs = std::abs(d);
      c.witness = region[i];
    }
    c.max_positive = std::max(c.max_positive, d);
    c.max_negative = std::max(c.max_negative, -d);
  }
  c.checked = region.size();
  finish(c, tol);
  return c;
}

Classification classify(const WeightedGraph& g, const ExactField& f, std::span<const Index> region) {
  Classification c;
  c.exact = true;
  Rational max_pos = 0, max_neg = 0;
  for (Index x : region) {
    const Rational d = laplacian_apply(g, f, x);
    if (d > max_pos) max_pos = d;
    if (-d > max_neg) max_neg = -d;
    if (d != 0 && (!c.witness || abs(d) > Rational(c.max_abs))) c.witness = x;
    c.max_abs = std::max(to_double(max_pos), to_double(max_neg));
  }
  c.max_positive = to_double(max_pos);
  c.max_negative = to_double(max_neg);
  c.checked = region.size();
  if (max_pos == 0 && max_neg == 0) {
    c.verdict = Harmonicity::harmonic;
  } else if (max_pos == 0) {
    c.verdict = Harmonicity::subharmonic;
  } else if (max_neg == 0) {
    c.verdict = Harmonicity::superharmonic;
  } else {
    c.verdict = Harmonicity::none;
  }
  c.residual = c.verdict == Harmonicity::subharmonic     ? c.max_positive
               : c.verdict == Harmonicity::superharmonic ? c.max_negative
                                                          : c.max_abs;
  return c;
}

bool in_formal_domain(const WeightedGraph& g, const ScalarField& f, Index x) {
  require_neighbors_defined(g, f, x, "formal domain");
  double s = 0.0;
  const auto nb = g.neighbors(x);
  const auto w = g.weights(x);
  for (std::size_t k = 0; k < nb.size(); ++k) s += w[k] * std::abs(f(nb[k]));
  return std::isfinite(s);
}

}  // namespace wgpt
