#include "wgpt/audit_suite.hpp"

#include <algorithm>
#include <cmath>

#include "wgpt/generators.hpp"
#include "wgpt/liouville.hpp"

namespace wgpt {

namespace {

std::vector<std::pair<double, double>> admissible_pairs(const PseudoMetric& rho, std::initializer_list<double> inner,
                                                        std::initializer_list<double> gaps) {
  const double s = rho.jump_size();
  std::vector<std::pair<double, double>> out;
  for (double r : inner)
    for (double d : gaps) {
      const double R = r + 3 * s + d;
      if (R + s < rho.certified_radius()) out.emplace_back(r, R);
    }
  return out;
}

}  // namespace

AuditInstance positive_part_instance() {
  const WeightedGraph g = line_generator(1, 2).window(64, 1);
  const Index o = g.index(0);
  PseudoMetric rho = natural_metric(g, o);
  ScalarField f = ScalarField::from_ids(g, [](VertexId x) { return x > 0 ? double(x) : 0.0; });
  auto pairs = admissible_pairs(rho, {0.5, 1, 2, 3, 5, 10, 20}, {0.25, 0.5, 1, 2, 4, 8, 16, 31});
  pairs.emplace_back(10, 41);
  return {"line-positive-part", g, std::move(rho), std::move(f), {1.5, 2, 3}, std::move(pairs)};
}

AuditInstance decaying_line_instance() {
  auto ex = finite_volume_example(150);
  const Index o = ex.graph.index(0);
  PseudoMetric rho = path_metric_delta(ex.graph, o);
  std::vector<double> v(ex.f.values().begin(), ex.f.values().end());
  for (double& a : v) a = std::abs(a);
  auto pairs = admissible_pairs(rho, {0.05, 0.1, 0.2, 0.4, 0.7, 1.0}, {0.02, 0.05, 0.1, 0.25, 0.5, 1.0});
  return {"decaying-line-abs", std::move(ex.graph), std::move(rho), ScalarField(std::move(v)), {1.5, 2, 3},
          std::move(pairs)};
}

std::vector<AuditInstance> audit_suite() {
  std::vector<AuditInstance> out;
  out.push_back(positive_part_instance());
  out.push_back(decaying_line_instance());
  return out;
}

const char* to_string(AuditKind k) {
  switch (k) {
    case AuditKind::caccioppoli: return "caccioppoli";
    case AuditKind::caccioppoli_strengthened: return "caccioppoli-strengthened";
    case AuditKind::key_estimate: return "key-estimate";
  }
  return "?";
}

std::vector<SuiteRow> run_audit_suite(const std::vector<AuditInstance>& suite) {
  std::vector<SuiteRow> rows;
  for (const auto& inst : suite)
    for (double p : inst.exponents) {
      std::vector<AuditKind> kinds{AuditKind::caccioppoli};
      if (p >= 2) kinds.push_back(AuditKind::caccioppoli_strengthened);
      kinds.push_back(AuditKind::key_estimate);
      for (AuditKind kind : kinds) {
        SuiteRow row{inst.name, p, kind};
        for (auto [r, R] : inst.radii) {
          InequalityAudit a;
          if (kind == AuditKind::key_estimate) {
            a = key_estimate_audit(inst.graph, inst.f, cutoff(inst.rho, r, R), p);
          } else {
            CaccioppoliOptions opts;
            if (kind == AuditKind::caccioppoli_strengthened) opts.form = CaccioppoliForm::strengthened;
            a = caccioppoli_audit(inst.graph, inst.rho, inst.f, p, r, R, opts);
          }
          row.constant = a.constant_used;
          ++row.pairs;
          if (!a.pass) ++row.failures;
          if (a.ratio > row.max_ratio) {
            row.max_ratio = a.ratio;
            row.worst = {r, R};
          }
        }
        rows.push_back(std::move(row));
      }
    }
  return rows;
}

}  // namespace wgpt
