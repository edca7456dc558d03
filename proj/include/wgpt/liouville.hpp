#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wgpt/graph.hpp"
#include "wgpt/growth_fit.hpp"
#include "wgpt/metric.hpp"

namespace wgpt {

/// Two sides of an audited inequality lhs <= constant * rhs.
struct InequalityAudit {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs / rhs (0 when both vanish, infinite when only rhs does).
  double ratio = 0.0;
  double constant_used = 0.0;
  double tol = 0.0;
  bool pass = true;
  /// Oriented edge (e_+, e_-) or vertex pair carrying the largest lhs term.
  std::optional<std::pair<Index, Index>> witness;
};

/// Sets ratio and pass from lhs, rhs, constant and a relative tolerance.
void finish_audit(InequalityAudit& audit, double rel_tol);

/// (p - 1) ^ 1.
double mvi_constant(double p);
/// 2 / ((p - 1) ^ 1).
double key_estimate_constant(double p);
/// 8 / ((p - 1) ^ 1)^2 for the (f(x) v f(y))^{p-2} form.
double caccioppoli_constant(double p);
/// 32 for the f^{p-2}(x) + f^{p-2}(y) form (p >= 2).
double caccioppoli_strengthened_constant(double p);

struct KarpProfile {
  double p = 0.0;
  std::vector<double> radii;
  /// v(r) = || f 1_{B_r} ||_p^p.
  std::vector<double> v;
  double integral = 0.0;
  std::optional<double> exponent;
  /// Absent for p <= 1, where only the raw table is produced.
  std::optional<IntegralVerdict> verdict;
  bool boundary_case = false;
};

struct KarpOptions {
  /// Skip the subharmonicity and intrinsic-metric preconditions.
  bool trust_preconditions = false;
  double tol = 1e-9;
};

/// NotSubharmonic if f is negative or not subharmonic on the largest ball;
/// NotIntrinsic if rho fails the intrinsic bound there.
KarpProfile karp_profile(const WeightedGraph& g, const PseudoMetric& rho, const ScalarField& f, double p,
                         std::span<const double> radii, const KarpOptions& opts = {});

enum class LpVerdict { constancy_implied, no_conclusion };
const char* to_string(LpVerdict v);

struct WeightedLpTest {
  double p = 0.0;
  std::vector<double> radii;
  /// Sum over B_r of |f|^p m rho_1^{-2}.
  std::vector<double> partial_sums;
  SequenceDiagnosis diagnosis;
  LpVerdict verdict = LpVerdict::no_conclusion;
};

/// Bounded partial sums are evidence that f is in L^p(m rho_1^{-2}), which
/// forces a non-negative subharmonic f to be constant.
WeightedLpTest weighted_lp_test(const WeightedGraph& g, const PseudoMetric& rho, const ScalarField& f, double p,
                                std::span<const double> radii, const KarpOptions& opts = {});

enum class CaccioppoliForm { standard, strengthened };

struct CaccioppoliOptions {
  CaccioppoliForm form = CaccioppoliForm::standard;
  /// Overrides the default constant of the chosen form.
  std::optional<double> constant;
  double rel_tol = 1e-12;
  bool trust_preconditions = false;
};

/// lhs = Sum_{x,y in B_r} mu (f(x) v f(y))^{p-2} |grad f|^2 (or the strengthened
/// weight), rhs = || f 1_{B_R \ B_r} ||_p^p / (R - r)^2.
/// RadiiViolateJumpGap unless 0 < r < R - 3s.
InequalityAudit caccioppoli_audit(const WeightedGraph& g, const PseudoMetric& rho, const ScalarField& f, double p,
                                  double r, double R, const CaccioppoliOptions& opts = {});

/// Orientation of edges with equal endpoint values; both must give the same audit.
enum class TieOrientation { id_order, reverse_id_order };

struct KeyEstimateOptions {
  TieOrientation ties = TieOrientation::id_order;
  double rel_tol = 1e-12;
  bool trust_preconditions = false;
};

/// Sum_{e in E_f} mu f^{p-2}(e+) phi^2(e-) |grad f|^2
///   <= C Sum_{e in E_f} mu f^{p-1}(e+) phi(e-) grad f |grad phi|,  C = 2/((p-1)^1).
/// SupportEscapesWindow if supp phi contains a vertex whose neighbours are not all in the window.
InequalityAudit key_estimate_audit(const WeightedGraph& g, const ScalarField& f, const ScalarField& phi, double p,
                                   const KeyEstimateOptions& opts = {});

struct MviResult {
  /// b^{p-1} - a^{p-1}.
  double lhs = 0.0;
  /// 1/2 (a^{p-2} + b^{p-2}) (b - a), for p >= 2.
  std::optional<double> bound_a;
  /// ((p-1)^1) b^{p-2} (b - a).
  double bound_b = 0.0;
  bool holds_a = true;
  bool holds_b = true;
};

inline constexpr double kMviTol = 1e-9;

/// BadExponent for p <= 1; requires 0 <= a <= b.
MviResult mvi_check(double a, double b, double p, double rel_tol = kMviTol);

struct MviGridReport {
  std::size_t samples = 0;
  std::size_t checked_a = 0;
  std::size_t violations_a = 0;
  std::size_t violations_b = 0;
  /// Smallest (lhs - bound) / max(lhs, bound) seen.
  double worst_margin_a = 1.0;
  double worst_margin_b = 1.0;
  std::uint64_t seed = 0;
};

/// Random triples (a, b, p) in [0, value_max]^2 x (1, p_max].
MviGridReport mvi_grid(std::size_t samples, std::uint64_t seed, double value_max = 1e6, double p_max = 10.0,
                       double rel_tol = kMviTol);

struct GrowthClassification {
  bool grows_less = true;
  double beta = 0.0;
  double constant = 0.0;
  std::size_t points = 0;
};

/// Fits log f = beta log growth(rho_1) + log C on vertices with f > 0 and
/// accepts when beta <= 1 - margin; C is the smallest constant making the
/// envelope hold at every sampled vertex.
GrowthClassification growth_classifier(const ScalarField& f, const PseudoMetric& rho,
                                       const std::function<double(double)>& growth,
                                       std::span<const Index> vertices = {});

struct MomentSequence {
  double q = 0.0;
  std::vector<double> radii;
  /// Sum over B_r of rho_1^q m.
  std::vector<double> partial_sums;
  SequenceDiagnosis diagnosis;
  bool bounded_evidence = false;
};

MomentSequence moment(const WeightedGraph& g, const PseudoMetric& rho, double q, std::span<const double> radii);

struct DecayProbe {
  double beta = 1.0;
  std::vector<double> radii;
  /// r^{-beta} log m(B_{r+1} \ B_r); empty annuli are skipped.
  std::vector<double> values;
  /// Largest value over the upper half of the radii.
  double limsup_estimate = 0.0;
  bool negative = false;
};

DecayProbe decay_probe(const WeightedGraph& g, const PseudoMetric& rho, std::span<const double> radii,
                       double beta = 1.0);

}  // namespace wgpt
