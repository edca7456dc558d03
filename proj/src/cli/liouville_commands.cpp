#include <cmath>
#include <memory>

#include "cli/commands_common.hpp"
#include "wgpt/audit_suite.hpp"
#include "wgpt/error.hpp"
#include "wgpt/liouville.hpp"

namespace wgpt::cli {

namespace {

struct LiouvilleOpts {
  GraphSource src;
  std::string metric = "delta";
  double trunc = 0.0;
  VertexId base = 0;
  std::string field = "graph";
  double p = 2.0;
  std::string radii;
  double r = 0.0, R = 0.0;
  bool trust = false;
  bool suite = false;
  bool strengthened = false;
  std::optional<double> constant;
  std::string ties = "id";
  std::string growth = "poly:1";
  std::string region = "all";
  double q = 1.0;
  double beta = 1.0;
};

struct Setup {
  LoadedGraph lg;
  PseudoMetric rho;
};

Setup load(const Context& ctx, const LiouvilleOpts& o, double radius) {
  LoadedGraph lg = load_graph_for_radius(ctx, o.src, o.metric, o.base, radius, o.trunc);
  const Index b = vertex_index(lg.graph, o.base, "--o");
  PseudoMetric rho = make_metric(lg.graph, o.metric, b, o.trunc);
  return {std::move(lg), std::move(rho)};
}

void add_source(CLI::App* cmd, LiouvilleOpts& o) {
  add_graph_options(cmd, o.src);
  cmd->add_option("--metric", o.metric, "Intrinsic metric: delta, delta-trunc, natural");
  cmd->add_option("--trunc", o.trunc, "Truncation radius for delta-trunc");
  cmd->add_option("--o", o.base, "Base vertex");
  cmd->add_option("--field", o.field, "Field: graph (#field), abs, pos, id, harmonic, abs-harmonic, const:c");
}

std::vector<double> require_radii(const LiouvilleOpts& o) {
  if (o.radii.empty()) fail(Errc::UsageError, "this command needs --radii");
  return parse_list(o.radii);
}

Json audit_json(const WeightedGraph& g, const InequalityAudit& a) {
  Json j;
  j["lhs"] = number(a.lhs);
  j["rhs"] = number(a.rhs);
  j["ratio"] = number(a.ratio);
  j["constant"] = number(a.constant_used);
  j["tol"] = number(a.tol);
  j["pass"] = a.pass;
  if (a.witness) j["witness"] = {g.id(a.witness->first), g.id(a.witness->second)};
  else j["witness"] = nullptr;
  return j;
}

Json metric_summary(const PseudoMetric& rho) {
  return {{"kind", to_string(rho.kind())},
          {"jump_size", number(rho.jump_size())},
          {"certified_radius", number(rho.certified_radius())}};
}

int run_karp(const Context& ctx, const LiouvilleOpts& o) {
  const auto radii = require_radii(o);
  const Setup s = load(ctx, o, max_of(radii));
  const KarpProfile k =
      karp_profile(s.lg.graph, s.rho, make_field(s.lg, o.field), o.p, radii, {o.trust, ctx.tol});
  Json j = ctx.report("liouville karp");
  j["window"] = s.lg.window;
  j["metric"] = metric_summary(s.rho);
  j["field"] = o.field;
  j["p"] = o.p;
  j["radii"] = numbers(k.radii);
  j["v"] = numbers(k.v);
  j["integral"] = number(k.integral);
  j["exponent"] = k.exponent ? number(*k.exponent) : Json(nullptr);
  j["boundary_case"] = k.boundary_case;
  j["verdict"] = k.verdict ? Json(to_string(*k.verdict)) : Json(nullptr);
  Table t{{"radius", "v"}, {}};
  for (std::size_t i = 0; i < k.radii.size(); ++i) t.rows.push_back({k.radii[i], k.v[i]});
  ctx.emit(j, &t);
  return kExitOk;
}

int run_weighted_lp(const Context& ctx, const LiouvilleOpts& o) {
  const auto radii = require_radii(o);
  const Setup s = load(ctx, o, max_of(radii));
  const WeightedLpTest w =
      weighted_lp_test(s.lg.graph, s.rho, make_field(s.lg, o.field), o.p, radii, {o.trust, ctx.tol});
  Json j = ctx.report("liouville weighted-lp");
  j["window"] = s.lg.window;
  j["metric"] = metric_summary(s.rho);
  j["field"] = o.field;
  j["p"] = o.p;
  j["radii"] = numbers(w.radii);
  j["partial_sums"] = numbers(w.partial_sums);
  j["diagnosis"] = diagnosis_json(w.diagnosis);
  j["verdict"] = to_string(w.verdict);
  Table t{{"radius", "partial_sum"}, {}};
  for (std::size_t i = 0; i < w.radii.size(); ++i) t.rows.push_back({w.radii[i], w.partial_sums[i]});
  ctx.emit(j, &t);
  return kExitOk;
}

int run_suite(const Context& ctx, const std::string& command, bool keyest_only, bool cacc_only) {
  const auto suite = audit_suite();
  const auto rows = run_audit_suite(suite);
  Json j = ctx.report(command);
  Json instances = Json::array();
  for (const auto& inst : suite)
    instances.push_back({{"name", inst.name},
                         {"vertices", inst.graph.size()},
                         {"metric", metric_summary(inst.rho)},
                         {"pairs", inst.radii.size()}});
  j["instances"] = instances;
  Json arr = Json::array();
  Table t{{"p", "constant", "pairs", "failures", "max_ratio", "worst_r", "worst_R"}, {}};
  std::size_t failures = 0;
  for (const auto& row : rows) {
    const bool key = row.kind == AuditKind::key_estimate;
    if ((keyest_only && !key) || (cacc_only && key)) continue;
    failures += row.failures;
    arr.push_back({{"instance", row.instance},
                   {"p", row.p},
                   {"audit", to_string(row.kind)},
                   {"constant", number(row.constant)},
                   {"pairs", row.pairs},
                   {"failures", row.failures},
                   {"max_ratio", number(row.max_ratio)},
                   {"worst", {row.worst.first, row.worst.second}}});
    t.rows.push_back({row.p, row.constant, double(row.pairs), double(row.failures), row.max_ratio, row.worst.first,
                      row.worst.second});
  }
  j["results"] = arr;
  j["failures"] = failures;
  j["pass"] = failures == 0;
  ctx.emit(j, &t);
  return failures == 0 ? kExitOk : kExitAuditFailure;
}

int run_caccioppoli(const Context& ctx, const LiouvilleOpts& o) {
  if (o.suite) return run_suite(ctx, "liouville caccioppoli", false, true);
  const Setup s = load(ctx, o, o.R);
  CaccioppoliOptions opts;
  opts.form = o.strengthened ? CaccioppoliForm::strengthened : CaccioppoliForm::standard;
  opts.constant = o.constant;
  opts.trust_preconditions = o.trust;
  const InequalityAudit a = caccioppoli_audit(s.lg.graph, s.rho, make_field(s.lg, o.field), o.p, o.r, o.R, opts);
  Json j = ctx.report("liouville caccioppoli");
  j["window"] = s.lg.window;
  j["metric"] = metric_summary(s.rho);
  j["field"] = o.field;
  j["p"] = o.p;
  j["r"] = o.r;
  j["R"] = o.R;
  j["form"] = o.strengthened ? "strengthened" : "standard";
  j["audit"] = audit_json(s.lg.graph, a);
  ctx.emit(j);
  return a.pass ? kExitOk : kExitAuditFailure;
}

int run_keyest(const Context& ctx, const LiouvilleOpts& o) {
  if (o.suite) return run_suite(ctx, "liouville keyest", true, false);
  if (o.ties != "id" && o.ties != "reverse-id") fail(Errc::UsageError, "--ties must be id or reverse-id");
  const Setup s = load(ctx, o, o.R);
  KeyEstimateOptions opts;
  opts.ties = o.ties == "id" ? TieOrientation::id_order : TieOrientation::reverse_id_order;
  opts.trust_preconditions = o.trust;
  const InequalityAudit a =
      key_estimate_audit(s.lg.graph, make_field(s.lg, o.field), cutoff(s.rho, o.r, o.R), o.p, opts);
  Json j = ctx.report("liouville keyest");
  j["window"] = s.lg.window;
  j["metric"] = metric_summary(s.rho);
  j["field"] = o.field;
  j["p"] = o.p;
  j["test_function"] = {{"cutoff_r", o.r}, {"cutoff_R", o.R}};
  j["ties"] = o.ties;
  j["audit"] = audit_json(s.lg.graph, a);
  ctx.emit(j);
  return a.pass ? kExitOk : kExitAuditFailure;
}

struct MviOpts {
  std::string grid;
  std::optional<double> a, b, p;
  double value_max = 1e6;
  double p_max = 10.0;
};

int run_mvi(const Context& ctx, const MviOpts& o, const std::string& command) {
  const double tol = ctx.tol_set ? ctx.tol : kMviTol;
  Json j = ctx.report(command);
  if (o.a || o.b || o.p) {
    if (!o.a || !o.b || !o.p) fail(Errc::UsageError, "a single check needs --a, --b and --p");
    const MviResult r = mvi_check(*o.a, *o.b, *o.p, tol);
    j["a"] = *o.a;
    j["b"] = *o.b;
    j["p"] = *o.p;
    j["lhs"] = number(r.lhs);
    j["bound_a"] = r.bound_a ? number(*r.bound_a) : Json(nullptr);
    j["bound_b"] = number(r.bound_b);
    j["holds_a"] = r.holds_a;
    j["holds_b"] = r.holds_b;
    ctx.emit(j);
    return r.holds_a && r.holds_b ? kExitOk : kExitAuditFailure;
  }
  std::size_t samples = 100000;
  if (!o.grid.empty() && o.grid != "default") {
    const double n = std::stod(o.grid);
    if (!(n >= 1)) fail(Errc::UsageError, "--grid must be 'default' or a positive sample count");
    samples = std::size_t(n);
  }
  const MviGridReport g = mvi_grid(samples, ctx.seed, o.value_max, o.p_max, tol);
  j["samples"] = g.samples;
  j["checked_a"] = g.checked_a;
  j["violations_a"] = g.violations_a;
  j["violations_b"] = g.violations_b;
  j["violations"] = g.violations_a + g.violations_b;
  j["worst_margin_a"] = number(g.worst_margin_a);
  j["worst_margin_b"] = number(g.worst_margin_b);
  j["value_max"] = o.value_max;
  j["p_max"] = o.p_max;
  ctx.emit(j);
  return g.violations_a + g.violations_b == 0 ? kExitOk : kExitAuditFailure;
}

void add_mvi(CLI::App* parent, Context& ctx, const std::string& command) {
  auto o = std::make_shared<MviOpts>();
  auto* cmd = add_command(parent, ctx, "mvi", "Mean-value inequalities for t -> t^(p-1)",
                          [&ctx, o, command] { return run_mvi(ctx, *o, command); });
  cmd->add_option("--grid", o->grid, "Random (a, b, p) samples: 'default' (100000) or a count");
  cmd->add_option("--a", o->a, "Single check: a >= 0");
  cmd->add_option("--b", o->b, "Single check: b > 0");
  cmd->add_option("--p", o->p, "Single check: exponent p > 1");
  cmd->add_option("--value-max", o->value_max, "Upper end of the sampled values");
  cmd->add_option("--p-max", o->p_max, "Upper end of the sampled exponents");
}

std::function<double(double)> growth_function(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const double k = colon == std::string::npos ? 1.0 : std::stod(text.substr(colon + 1));
  if (kind == "poly") return [k](double r) { return std::pow(1.0 + r, k); };
  if (kind == "exp") return [k](double r) { return std::exp(k * r); };
  fail(Errc::UsageError, "--growth must be poly:k or exp:a");
}

int run_growth(const Context& ctx, const LiouvilleOpts& o) {
  const Setup s = load(ctx, o, 0.0);
  const WeightedGraph& g = s.lg.graph;
  const auto vertices = parse_region(g, o.region);
  const GrowthClassification c = growth_classifier(make_field(s.lg, o.field), s.rho, growth_function(o.growth), vertices);
  Json j = ctx.report("liouville growth");
  j["window"] = s.lg.window;
  j["metric"] = metric_summary(s.rho);
  j["field"] = o.field;
  j["growth"] = o.growth;
  j["grows_less"] = c.grows_less;
  j["beta"] = number(c.beta);
  j["constant"] = number(c.constant);
  j["points"] = c.points;
  ctx.emit(j);
  return kExitOk;
}

int run_moment(const Context& ctx, const LiouvilleOpts& o) {
  const auto radii = require_radii(o);
  const Setup s = load(ctx, o, max_of(radii));
  const MomentSequence m = moment(s.lg.graph, s.rho, o.q, radii);
  Json j = ctx.report("liouville moment");
  j["window"] = s.lg.window;
  j["metric"] = metric_summary(s.rho);
  j["q"] = o.q;
  j["radii"] = numbers(m.radii);
  j["partial_sums"] = numbers(m.partial_sums);
  j["diagnosis"] = diagnosis_json(m.diagnosis);
  j["bounded_evidence"] = m.bounded_evidence;
  Table t{{"radius", "partial_sum"}, {}};
  for (std::size_t i = 0; i < m.radii.size(); ++i) t.rows.push_back({m.radii[i], m.partial_sums[i]});
  ctx.emit(j, &t);
  return kExitOk;
}

int run_decay(const Context& ctx, const LiouvilleOpts& o) {
  const auto radii = require_radii(o);
  const Setup s = load(ctx, o, max_of(radii));
  const DecayProbe d = decay_probe(s.lg.graph, s.rho, radii, o.beta);
  Json j = ctx.report("liouville decay");
  j["window"] = s.lg.window;
  j["metric"] = metric_summary(s.rho);
  j["beta"] = d.beta;
  j["radii"] = numbers(d.radii);
  j["values"] = numbers(d.values);
  j["limsup_estimate"] = number(d.limsup_estimate);
  j["negative"] = d.negative;
  Table t{{"radius", "value"}, {}};
  for (std::size_t i = 0; i < d.radii.size(); ++i) t.rows.push_back({d.radii[i], d.values[i]});
  ctx.emit(j, &t);
  return kExitOk;
}

template <class Run>
CLI::App* add(CLI::App* parent, Context& ctx, const std::string& name, const std::string& desc, Run run,
              std::shared_ptr<LiouvilleOpts>& o) {
  o = std::make_shared<LiouvilleOpts>();
  auto* cmd = add_command(parent, ctx, name, desc, [&ctx, o, run] { return run(ctx, *o); });
  add_source(cmd, *o);
  return cmd;
}

}  // namespace

void register_liouville_commands(CLI::App& app, Context& ctx) {
  auto* lv = app.add_subcommand("liouville", "Liouville-type criteria and their inequality audits");
  lv->require_subcommand(1);
  std::shared_ptr<LiouvilleOpts> o;

  auto* karp = add(lv, ctx, "karp", "Karp profile v(r) and the integral test", run_karp, o);
  karp->add_option("--p", o->p, "Exponent p > 1");
  karp->add_option("--radii", o->radii, "Radii, e.g. 1..100");
  karp->add_flag("--trust", o->trust, "Skip the subharmonicity and intrinsic checks");

  auto* wlp = add(lv, ctx, "weighted-lp", "Partial sums of the rho-weighted l^p norm", run_weighted_lp, o);
  wlp->add_option("--p", o->p, "Exponent p > 1");
  wlp->add_option("--radii", o->radii, "Radii");
  wlp->add_flag("--trust", o->trust, "Skip the precondition checks");

  auto* cac = add(lv, ctx, "caccioppoli", "Caccioppoli inequality audit", run_caccioppoli, o);
  cac->add_flag("--suite", o->suite, "Run the built-in audit suite");
  cac->add_option("--p", o->p, "Exponent p > 1");
  cac->add_option("--r", o->r, "Inner radius");
  cac->add_option("--R", o->R, "Outer radius");
  cac->add_flag("--strengthened", o->strengthened, "Energy on the larger ball (p >= 2)");
  cac->add_option("--constant", o->constant, "Override the constant");
  cac->add_flag("--trust", o->trust, "Skip the precondition checks");

  auto* key = add(lv, ctx, "keyest", "Key estimate audit with a cut-off test function", run_keyest, o);
  key->add_flag("--suite", o->suite, "Run the built-in audit suite");
  key->add_option("--p", o->p, "Exponent p > 1");
  key->add_option("--r", o->r, "Cut-off inner radius");
  key->add_option("--R", o->R, "Cut-off outer radius");
  key->add_option("--ties", o->ties, "Orientation of zero-gradient edges: id or reverse-id");
  key->add_flag("--trust", o->trust, "Skip the precondition checks");

  add_mvi(lv, ctx, "liouville mvi");
  add_mvi(&app, ctx, "mvi");

  auto* gr = add(lv, ctx, "growth", "Compare |f| with a growth function of rho", run_growth, o);
  gr->add_option("--growth", o->growth, "poly:k for (1+r)^k or exp:a for e^(a r)");
  gr->add_option("--region", o->region, "Vertices to compare on");

  auto* mo = add(lv, ctx, "moment", "Partial sums of Sum rho^q m over balls", run_moment, o);
  mo->add_option("--q", o->q, "Moment order");
  mo->add_option("--radii", o->radii, "Radii");

  auto* de = add(lv, ctx, "decay", "Volume decay probe", run_decay, o);
  de->add_option("--beta", o->beta, "Decay exponent");
  de->add_option("--radii", o->radii, "Radii");

  auto* ex = lv->add_subcommand("examples", "Write the worked example graphs");
  ex->require_subcommand(1);
  add_example_commands(ex, ctx);
}

}  // namespace wgpt::cli
