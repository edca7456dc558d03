#include "wgpt/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wgpt/error.hpp"
#include "wgpt/laplacian.hpp"

namespace wgpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Product with the convention inf * 0 = 0.
double mul0(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

double rho1(const PseudoMetric& rho, Index x) { return std::max(1.0, rho.from_base()[x]); }

// f >= 0 on `nonneg` and Delta f <= 0 on `region`, with Delta f compared
// against the scale (1/m) Sum mu (|f(x)| + |f(y)|) of its own terms.
void require_nonneg_subharmonic(const WeightedGraph& g, const ScalarField& f, std::span<const Index> nonneg,
                                std::span<const Index> region, double rel_tol) {
  for (Index x : nonneg) {
    if (!f.defined(x)) fail(Errc::SupportEscapesWindow, "f undefined at vertex " + std::to_string(g.id(x)));
    if (f(x) < 0) fail(Errc::NotSubharmonic, "f is negative at vertex " + std::to_string(g.id(x)));
  }
  for (Index x : region) {
    const double lap = laplacian_apply(g, f, x);
    double scale = 0.0;
    const auto nb = g.neighbors(x);
    const auto w = g.weights(x);
    for (std::size_t k = 0; k < nb.size(); ++k) scale += w[k] * (std::abs(f(x)) + std::abs(f(nb[k])));
    scale /= g.measure(x);
    if (lap > rel_tol * scale)
      fail(Errc::NotSubharmonic, "Delta f = " + std::to_string(lap) + " > 0 at vertex " + std::to_string(g.id(x)));
  }
}

void require_intrinsic(const WeightedGraph& g, const PseudoMetric& rho, std::span<const Index> region) {
  const auto rep = verify_intrinsic(g, rho, region);
  if (!rep.intrinsic)
    fail(Errc::NotIntrinsic, "metric is not intrinsic (max ratio " + std::to_string(rep.max_ratio) + ")");
}

double lp_sum(const WeightedGraph& g, const ScalarField& f, double p, std::span<const Index> set) {
  double s = 0.0;
  for (Index x : set) s += std::pow(std::abs(f(x)), p) * g.measure(x);
  return s;
}

std::vector<Index> set_difference(std::vector<Index> a, const std::vector<Index>& b) {
  std::vector<Index> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

void finish_audit(InequalityAudit& audit, double rel_tol) {
  const double bound = audit.constant_used * audit.rhs;
  if (audit.rhs > 0) audit.ratio = audit.lhs / audit.rhs;
  else audit.ratio = audit.lhs > 0 ? kInf : 0.0;
  audit.tol = rel_tol * std::max(audit.lhs, bound);
  audit.pass = audit.lhs <= bound + audit.tol;
}

double mvi_constant(double p) { return std::min(p - 1.0, 1.0); }
double key_estimate_constant(double p) { return 2.0 / mvi_constant(p); }
double caccioppoli_constant(double p) {
  const double c = mvi_constant(p);
  return 8.0 / (c * c);
}
double caccioppoli_strengthened_constant(double) { return 32.0; }

KarpProfile karp_profile(const WeightedGraph& g, const PseudoMetric& rho, const ScalarField& f, double p,
                         std::span<const double> radii, const KarpOptions& opts) {
  if (!(p > 0)) fail(Errc::BadExponent, "exponent must be positive");
  if (radii.empty()) fail(Errc::BadRadii, "no radii given");
  if (!std::is_sorted(radii.begin(), radii.end())) fail(Errc::BadRadii, "radii must be increasing");
  KarpProfile prof;
  prof.p = p;
  prof.radii.assign(radii.begin(), radii.end());
  const auto outer = rho.ball(radii.back());
  if (!opts.trust_preconditions && p > 1) {
    require_nonneg_subharmonic(g, f, outer, outer, opts.tol);
    require_intrinsic(g, rho, outer);
  }
  for (double r : radii) prof.v.push_back(lp_sum(g, f, p, rho.ball(r)));
  const auto ev = integral_evidence(prof.radii, prof.v);
  prof.integral = ev.integral;
  prof.exponent = ev.exponent;
  if (p > 1) {
    prof.verdict = ev.verdict;
    prof.boundary_case = ev.boundary_case;
  }
  return prof;
}

const char* to_string(LpVerdict v) {
  return v == LpVerdict::constancy_implied ? "constancy-implied" : "no-conclusion";
}

WeightedLpTest weighted_lp_test(const WeightedGraph& g, const PseudoMetric& rho, const ScalarField& f, double p,
                                std::span<const double> radii, const KarpOptions& opts) {
  if (!(p > 0)) fail(Errc::BadExponent, "exponent must be positive");
  if (radii.empty()) fail(Errc::BadRadii, "no radii given");
  WeightedLpTest t;
  t.p = p;
  t.radii.assign(radii.begin(), radii.end());
  const auto outer = rho.ball(radii.back());
  if (!opts.trust_preconditions && p > 1) {
    require_nonneg_subharmonic(g, f, outer, outer, opts.tol);
    require_intrinsic(g, rho, outer);
  }
  for (double r : radii) {
    double s = 0.0;
    for (Index x : rho.ball(r)) {
      const double q = rho1(rho, x);
      s += std::pow(std::abs(f(x)), p) * g.measure(x) / (q * q);
    }
    t.partial_sums.push_back(s);
  }
  t.diagnosis = diagnose_sequence(t.radii, t.partial_sums);
  const bool bounded =
      t.diagnosis.trend == SequenceTrend::saturating || t.diagnosis.trend == SequenceTrend::stationary;
  t.verdict = (p > 1 && bounded) ? LpVerdict::constancy_implied : LpVerdict::no_conclusion;
  return t;
}

InequalityAudit caccioppoli_audit(const WeightedGraph& g, const PseudoMetric& rho, const ScalarField& f, double p,
                                  double r, double R, const CaccioppoliOptions& opts) {
  if (!(p > 1)) fail(Errc::BadExponent, "Caccioppoli audit needs p > 1");
  if (opts.form == CaccioppoliForm::strengthened && p < 2)
    fail(Errc::BadExponent, "strengthened form needs p >= 2");
  const double s = rho.jump_size();
  if (!(r > 0) || !(r < R - 3 * s))
    fail(Errc::RadiiViolateJumpGap, "need 0 < r < R - 3s (r=" + std::to_string(r) + ", R=" + std::to_string(R) +
                                        ", s=" + std::to_string(s) + ")");
  rho.ball(R + s);  // window coverage
  const auto big = rho.ball(R);
  const auto inner = rho.ball(r);
  if (!opts.trust_preconditions) require_nonneg_subharmonic(g, f, big, big, 1e-9);

  InequalityAudit audit;
  double best = -1.0;
  for (Index x : inner) {
    const auto nb = g.neighbors(x);
    const auto w = g.weights(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const Index y = nb[k];
      if (!std::binary_search(inner.begin(), inner.end(), y)) continue;
      const double grad = f(x) - f(y);
      double weight;
      if (opts.form == CaccioppoliForm::standard) weight = std::pow(std::max(f(x), f(y)), p - 2);
      else weight = std::pow(f(x), p - 2) + std::pow(f(y), p - 2);
      const double term = w[k] * mul0(weight, grad * grad);
      audit.lhs += term;
      if (term > best) {
        best = term;
        audit.witness = {x, y};
      }
    }
  }
  audit.rhs = lp_sum(g, f, p, set_difference(big, inner)) / ((R - r) * (R - r));
  audit.constant_used = opts.constant ? *opts.constant
                                      : (opts.form == CaccioppoliForm::standard ? caccioppoli_constant(p)
                                                                                : caccioppoli_strengthened_constant(p));
  finish_audit(audit, opts.rel_tol);
  return audit;
}

InequalityAudit key_estimate_audit(const WeightedGraph& g, const ScalarField& f, const ScalarField& phi, double p,
                                   const KeyEstimateOptions& opts) {
  if (!(p > 1)) fail(Errc::BadExponent, "key estimate needs p > 1");
  std::vector<Index> support, nbhd;
  for (Index x = 0; x < g.size(); ++x) {
    if (!phi.defined(x)) continue;
    if (phi(x) < 0) fail(Errc::UsageError, "phi must be non-negative");
    if (phi(x) == 0) continue;
    if (!g.complete(x))
      fail(Errc::SupportEscapesWindow, "supp phi reaches the window boundary at " + std::to_string(g.id(x)));
    support.push_back(x);
    nbhd.push_back(x);
    for (Index y : g.neighbors(x)) nbhd.push_back(y);
  }
  std::sort(nbhd.begin(), nbhd.end());
  nbhd.erase(std::unique(nbhd.begin(), nbhd.end()), nbhd.end());
  for (Index y : nbhd)
    if (!phi.defined(y) || !f.defined(y))
      fail(Errc::SupportEscapesWindow, "f or phi undefined near supp phi at " + std::to_string(g.id(y)));
  if (!opts.trust_preconditions) require_nonneg_subharmonic(g, f, nbhd, support, 1e-9);

  auto oriented = [&](Index plus, Index minus) {
    if (f(plus) != f(minus)) return f(plus) > f(minus);
    const bool lower = g.id(plus) < g.id(minus);
    return opts.ties == TieOrientation::id_order ? lower : !lower;
  };

  InequalityAudit audit;
  double best = -1.0;
  for (Index minus : support) {
    const auto nb = g.neighbors(minus);
    const auto w = g.weights(minus);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const Index plus = nb[k];
      if (!oriented(plus, minus)) continue;
      const double grad = f(plus) - f(minus);
      const double ph = phi(minus);
      const double lterm = w[k] * mul0(std::pow(f(plus), p - 2), ph * ph * grad * grad);
      const double rterm = w[k] * mul0(std::pow(f(plus), p - 1), ph * grad * std::abs(phi(plus) - ph));
      audit.lhs += lterm;
      audit.rhs += rterm;
      if (lterm > best) {
        best = lterm;
        audit.witness = {plus, minus};
      }
    }
  }
  audit.constant_used = key_estimate_constant(p);
  finish_audit(audit, opts.rel_tol);
  return audit;
}

MviResult mvi_check(double a, double b, double p, double rel_tol) {
  if (!(p > 1) || !std::isfinite(p)) fail(Errc::BadExponent, "mean-value inequalities need 1 < p < infinity");
  if (!(a >= 0) || !(b >= a)) fail(Errc::UsageError, "mean-value check needs 0 <= a <= b");
  MviResult res;
  const double gap = b - a;
  if (gap == 0) return res;
  // b^{p-1} - a^{p-1} = -b^{p-1} expm1((p-1) log(a/b)) without cancellation.
  res.lhs = -std::pow(b, p - 1) * std::expm1((p - 1) * std::log1p(-gap / b));
  res.bound_b = mvi_constant(p) * mul0(std::pow(b, p - 2), gap);
  auto holds = [&](double bound) { return res.lhs >= bound - rel_tol * std::max(std::abs(res.lhs), std::abs(bound)); };
  res.holds_b = holds(res.bound_b);
  if (p >= 2) {
    res.bound_a = 0.5 * (std::pow(a, p - 2) + std::pow(b, p - 2)) * gap;
    res.holds_a = holds(*res.bound_a);
  }
  return res;
}

MviGridReport mvi_grid(std::size_t samples, std::uint64_t seed, double value_max, double p_max, double rel_tol) {
  MviGridReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(0.0, value_max), unit(0.0, 1.0);
  auto margin = [](double lhs, double bound) {
    const double scale = std::max(std::abs(lhs), std::abs(bound));
    return scale > 0 ? (lhs - bound) / scale : 0.0;
  };
  for (std::size_t i = 0; i < samples; ++i) {
    double a = value(rng), b = value(rng);
    if (a > b) std::swap(a, b);
    const double p = p_max - unit(rng) * (p_max - 1.0);
    const auto r = mvi_check(a, b, p, rel_tol);
    ++rep.samples;
    rep.violations_b += !r.holds_b;
    rep.worst_margin_b = std::min(rep.worst_margin_b, margin(r.lhs, r.bound_b));
    if (r.bound_a) {
      ++rep.checked_a;
      rep.violations_a += !r.holds_a;
      rep.worst_margin_a = std::min(rep.worst_margin_a, margin(r.lhs, *r.bound_a));
    }
  }
  return rep;
}

GrowthClassification growth_classifier(const ScalarField& f, const PseudoMetric& rho,
                                       const std::function<double(double)>& growth, std::span<const Index> vertices) {
  std::vector<Index> all;
  if (vertices.empty()) {
    for (Index x = 0; x < f.size(); ++x)
      if (f.defined(x)) all.push_back(x);
    vertices = all;
  }
  std::vector<double> gx, fx;
  for (Index x : vertices) {
    if (f(x) > 0) {
      gx.push_back(growth(rho1(rho, x)));
      fx.push_back(f(x));
    }
  }
  GrowthClassification out;
  out.points = fx.size();
  if (fx.empty()) return out;
  if (const auto fit = loglog_fit(gx, fx)) out.beta = std::max(0.0, fit->slope);
  for (std::size_t i = 0; i < fx.size(); ++i) out.constant = std::max(out.constant, fx[i] / std::pow(gx[i], out.beta));
  out.grows_less = out.beta <= 1.0 - kSlopeMargin;
  return out;
}

MomentSequence moment(const WeightedGraph& g, const PseudoMetric& rho, double q, std::span<const double> radii) {
  MomentSequence seq;
  seq.q = q;
  seq.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    double s = 0.0;
    for (Index x : rho.ball(r)) s += std::pow(rho1(rho, x), q) * g.measure(x);
    seq.partial_sums.push_back(s);
  }
  seq.diagnosis = diagnose_sequence(seq.radii, seq.partial_sums);
  seq.bounded_evidence =
      seq.diagnosis.trend == SequenceTrend::saturating || seq.diagnosis.trend == SequenceTrend::stationary;
  return seq;
}

DecayProbe decay_probe(const WeightedGraph& g, const PseudoMetric& rho, std::span<const double> radii, double beta) {
  DecayProbe probe;
  probe.beta = beta;
  for (double r : radii) {
    if (!(r > 0)) fail(Errc::BadRadii, "decay probe radii must be positive");
    rho.ball(r + 1);
    double mass = 0.0;
    for (Index x : rho.ball_unchecked(r + 1))
      if (!rho.in_ball(x, r)) mass += g.measure(x);
    if (mass <= 0) continue;
    probe.radii.push_back(r);
    probe.values.push_back(std::log(mass) / std::pow(r, beta));
  }
  if (probe.values.empty()) {
    probe.limsup_estimate = -kInf;
    probe.negative = true;
    return probe;
  }
  probe.limsup_estimate = -kInf;
  for (std::size_t i = probe.values.size() / 2; i < probe.values.size(); ++i)
    probe.limsup_estimate = std::max(probe.limsup_estimate, probe.values[i]);
  probe.negative = probe.limsup_estimate < 0;
  return probe;
}

}  // namespace wgpt
