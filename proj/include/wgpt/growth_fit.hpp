#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wgpt {

/// Least-squares fit of log y = slope * log x + intercept.
struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Uses the pairs with x > 0 and y > 0; nullopt with fewer than two.
std::optional<PowerFit> loglog_fit(std::span<const double> x, std::span<const double> y);
/// Same fit restricted to the last `fraction` of the usable pairs.
std::optional<PowerFit> tail_loglog_fit(std::span<const double> x, std::span<const double> y, double fraction = 0.5);

/// Trapezoid rule on a (not necessarily uniform) grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

inline constexpr double kSlopeMargin = 0.1;
/// Growth exponent separating divergent from convergent Int r / v(r) dr.
inline constexpr double kCriticalExponent = 2.0;

enum class IntegralVerdict { divergent, convergent };
const char* to_string(IntegralVerdict v);

/// Evidence about Int^infty r / v(r) dr from samples of a non-decreasing v.
struct IntegralEvidence {
  IntegralVerdict verdict = IntegralVerdict::divergent;
  /// Trapezoid estimate over the sampled range (infinite if v vanishes).
  double integral = 0.0;
  /// Fitted growth exponent of v on the tail; nullopt if v has too few positive samples.
  std::optional<double> exponent;
  /// Slope fell into the r^2 log r band and the refined test decided.
  bool boundary_case = false;
};

/// Slope <= 2 - margin: divergent; >= 2 + margin: convergent; in between,
/// divergent iff v / (r^2 log r) is non-increasing on the tail.
IntegralEvidence integral_evidence(std::span<const double> radii, std::span<const double> v);

/// Saturation diagnosis for a monotone sequence indexed by a growing scale.
enum class SequenceTrend { growing, saturating, stationary, inconclusive };
const char* to_string(SequenceTrend t);

struct SequenceDiagnosis {
  SequenceTrend trend = SequenceTrend::inconclusive;
  std::optional<double> exponent;
  /// |a_n - a_{n-1}| / |a_n| at the last level.
  double last_relative_increment = 0.0;
};

inline constexpr double kSaturationIncrement = 1e-3;

/// growing: tail log-log exponent >= margin; saturating: exponent below the
/// margin and last relative increment below kSaturationIncrement; stationary:
/// all values equal.
SequenceDiagnosis diagnose_sequence(std::span<const double> scales, std::span<const double> values);

}  // namespace wgpt
