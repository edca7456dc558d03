#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wgpt/graph.hpp"
#include "wgpt/metric.hpp"

namespace wgpt {

/// One certified instance for the Caccioppoli and key-estimate audits: a
/// non-negative subharmonic f, an intrinsic metric, and admissible (r, R) pairs
/// with 0 < r < R - 3s and B_{R+s} inside the window.
struct AuditInstance {
  std::string name;
  WeightedGraph graph;
  PseudoMetric rho;
  ScalarField f;
  std::vector<double> exponents;
  std::vector<std::pair<double, double>> radii;
};

/// Z with mu = 1, m = 2, the natural metric and f = max(x, 0).
AuditInstance positive_part_instance();
/// The decaying line graph with |f| for its harmonic f and the delta metric.
AuditInstance decaying_line_instance();
std::vector<AuditInstance> audit_suite();

enum class AuditKind { caccioppoli, caccioppoli_strengthened, key_estimate };
const char* to_string(AuditKind k);

/// Aggregate of one (instance, exponent, audit) cell over all radius pairs.
struct SuiteRow {
  std::string instance;
  double p = 0.0;
  AuditKind kind = AuditKind::caccioppoli;
  double constant = 0.0;
  std::size_t pairs = 0;
  std::size_t failures = 0;
  double max_ratio = 0.0;
  std::pair<double, double> worst{0.0, 0.0};
};

/// Runs the Caccioppoli audit (standard form; strengthened form when p >= 2)
/// and the key estimate with the cut-off of each pair as test function.
std::vector<SuiteRow> run_audit_suite(const std::vector<AuditInstance>& suite);

}  // namespace wgpt
