#include "wgpt/growth_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgpt/error.hpp"

namespace wgpt {

namespace {

std::optional<PowerFit> fit_points(const std::vector<double>& lx, const std::vector<double>& ly) {
  const std::size_t n = lx.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0)) return std::nullopt;
  PowerFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = n;
  return fit;
}

void usable(std::span<const double> x, std::span<const double> y, std::vector<double>& lx, std::vector<double>& ly) {
  if (x.size() != y.size()) fail(Errc::UsageError, "fit needs equally long samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
}

}  // namespace

std::optional<PowerFit> loglog_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  usable(x, y, lx, ly);
  return fit_points(lx, ly);
}

std::optional<PowerFit> tail_loglog_fit(std::span<const double> x, std::span<const double> y, double fraction) {
  std::vector<double> lx, ly;
  usable(x, y, lx, ly);
  const std::size_t keep = std::max<std::size_t>(2, std::size_t(std::ceil(fraction * double(lx.size()))));
  if (lx.size() > keep) {
    lx.erase(lx.begin(), lx.end() - std::ptrdiff_t(keep));
    ly.erase(ly.begin(), ly.end() - std::ptrdiff_t(keep));
  }
  return fit_points(lx, ly);
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(Errc::UsageError, "trapezoid needs equally long samples");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

const char* to_string(IntegralVerdict v) {
  return v == IntegralVerdict::divergent ? "divergent-evidence" : "convergent-evidence";
}

const char* to_string(SequenceTrend t) {
  switch (t) {
    case SequenceTrend::growing: return "growing";
    case SequenceTrend::saturating: return "saturating";
    case SequenceTrend::stationary: return "stationary";
    case SequenceTrend::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

IntegralEvidence integral_evidence(std::span<const double> radii, std::span<const double> v) {
  if (radii.size() != v.size()) fail(Errc::UsageError, "radii and values differ in length");
  IntegralEvidence ev;
  std::vector<double> r, integrand;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (v[i] > 0) {
      r.push_back(radii[i]);
      integrand.push_back(radii[i] / v[i]);
    }
  }
  if (r.empty()) {
    ev.integral = std::numeric_limits<double>::infinity();
    ev.verdict = IntegralVerdict::divergent;
    return ev;
  }
  ev.integral = trapezoid(r, integrand);
  const auto fit = tail_loglog_fit(radii, v);
  if (!fit) {
    ev.verdict = IntegralVerdict::divergent;
    return ev;
  }
  ev.exponent = fit->slope;
  if (fit->slope <= kCriticalExponent - kSlopeMargin) {
    ev.verdict = IntegralVerdict::divergent;
  } else if (fit->slope >= kCriticalExponent + kSlopeMargin) {
    ev.verdict = IntegralVerdict::convergent;
  } else {
    ev.boundary_case = true;
    std::vector<double> q;
    for (std::size_t i = 0; i < radii.size(); ++i)
      if (radii[i] > 1 && v[i] > 0) q.push_back(v[i] / (radii[i] * radii[i] * std::log(radii[i])));
    const std::size_t start = q.size() / 2;
    bool non_increasing = q.size() >= 2;
    for (std::size_t i = start + 1; i < q.size(); ++i)
      if (q[i] > q[i - 1] * (1 + 1e-12)) non_increasing = false;
    ev.verdict = non_increasing ? IntegralVerdict::divergent : IntegralVerdict::convergent;
  }
  return ev;
}

SequenceDiagnosis diagnose_sequence(std::span<const double> scales, std::span<const double> values) {
  SequenceDiagnosis d;
  if (values.size() < 2) return d;
  const double last = values.back(), prev = values[values.size() - 2];
  d.last_relative_increment = last != 0 ? std::abs(last - prev) / std::abs(last) : std::abs(last - prev);
  if (std::all_of(values.begin(), values.end(), [&](double a) { return a == values.front(); })) {
    d.trend = SequenceTrend::stationary;
    return d;
  }
  const auto fit = tail_loglog_fit(scales, values);
  if (!fit) return d;
  d.exponent = fit->slope;
  if (std::abs(fit->slope) >= kSlopeMargin)
    d.trend = SequenceTrend::growing;
  else if (d.last_relative_increment < kSaturationIncrement)
    d.trend = SequenceTrend::saturating;
  return d;
}

}  // namespace wgpt
