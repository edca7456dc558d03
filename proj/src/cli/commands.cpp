#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

#include "cli/commands_common.hpp"
#include "wgpt/error.hpp"
#include "wgpt/graph_io.hpp"
#include "wgpt/laplacian.hpp"

namespace wgpt::cli {

CLI::App* add_command(CLI::App* parent, Context& ctx, const std::string& name, const std::string& desc,
                      std::function<int()> run) {
  auto* cmd = parent->add_subcommand(name, desc);
  cmd->callback([&ctx, run = std::move(run)] { ctx.action = run; });
  return cmd;
}

std::optional<ExactField> exact_field_named(const LoadedGraph& lg, const std::string& name) {
  const WeightedGraph& g = lg.graph;
  if (!g.has_exact()) return std::nullopt;
  auto harmonic = [](VertexId x) { return x >= kAttachmentIdOffset ? Rational(0) : decaying_line_harmonic(x); };
  if (name == "graph") return lg.exact_field;
  if (name == "abs") return ExactField::from_ids(g, [](VertexId x) { return Rational(x < 0 ? -x : x); });
  if (name == "pos") return ExactField::from_ids(g, [](VertexId x) { return Rational(x > 0 ? x : 0); });
  if (name == "id") return ExactField::from_ids(g, [](VertexId x) { return Rational(x); });
  if (name == "harmonic") return ExactField::from_ids(g, harmonic);
  if (name == "abs-harmonic") return ExactField::from_ids(g, [&](VertexId x) { return abs(harmonic(x)); });
  if (name.rfind("const:", 0) == 0) {
    const Rational c = parse_rational(name.substr(6));
    return ExactField::from_ids(g, [&](VertexId) { return c; });
  }
  return std::nullopt;
}

Index vertex_index(const WeightedGraph& g, VertexId v, const char* what) {
  const auto x = g.find(v);
  if (!x) fail(Errc::UnknownVertex, std::string(what) + " vertex " + std::to_string(v) + " is not in the graph");
  return *x;
}

Json sequence_json(const MonotoneSequence& s) {
  Json j;
  j["scales"] = numbers(s.scales);
  j["values"] = numbers(s.values);
  j["trend"] = to_string(s.diagnosis.trend);
  j["exponent"] = s.diagnosis.exponent ? number(*s.diagnosis.exponent) : Json(nullptr);
  j["last_relative_increment"] = number(s.diagnosis.last_relative_increment);
  j["monotone"] = s.monotone;
  j["evidence"] = to_string(s.evidence);
  return j;
}

Json diagnosis_json(const SequenceDiagnosis& d) {
  Json j;
  j["trend"] = to_string(d.trend);
  j["exponent"] = d.exponent ? number(*d.exponent) : Json(nullptr);
  j["last_relative_increment"] = number(d.last_relative_increment);
  return j;
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

namespace {

// graph ----------------------------------------------------------------------

struct GraphOpts {
  GraphSource src;
  std::string region = "all";
  std::string field = "graph";
  VertexId vertex = 0;
  std::string p = "2";
  std::string weight = "none";
  bool quasi = false;
  std::string metric = "delta";
  VertexId base = 0;
};

int run_info(const Context& ctx, const GraphOpts& o) {
  const LoadedGraph lg = load_graph(ctx, o.src);
  const WeightedGraph& g = lg.graph;
  Json j = ctx.report("graph info");
  j["window"] = lg.window;
  j["vertices"] = g.size();
  j["edges"] = g.edge_count();
  j["complete_vertices"] = g.complete_vertices().size();
  j["connected"] = g.connected();
  j["exact_data"] = g.has_exact();
  double total = 0;
  for (double m : g.measures()) total += m;
  j["window_measure"] = number(total);
  j["has_field"] = lg.field.has_value();
  ctx.emit(j);
  return kExitOk;
}

int run_laplacian(const Context& ctx, const GraphOpts& o) {
  const LoadedGraph lg = load_graph(ctx, o.src);
  const WeightedGraph& g = lg.graph;
  const Index x = vertex_index(g, o.vertex, "--vertex");
  Json j = ctx.report("graph laplacian");
  j["window"] = lg.window;
  j["vertex"] = o.vertex;
  j["field"] = o.field;
  if (ctx.exact) {
    const auto ef = exact_field_named(lg, o.field);
    if (!ef) fail(Errc::NoExactData, "field '" + o.field + "' has no exact values on this graph");
    const Rational v = laplacian_apply(g, *ef, x);
    j["exact"] = true;
    j["value"] = to_double(v);
    j["value_exact"] = to_string(v);
  } else {
    j["exact"] = false;
    j["value"] = number(laplacian_apply(g, make_field(lg, o.field), x));
  }
  ctx.emit(j);
  return kExitOk;
}

int run_energy(const Context& ctx, const GraphOpts& o) {
  const LoadedGraph lg = load_graph(ctx, o.src);
  const EnergyReport e = energy(lg.graph, make_field(lg, o.field));
  Json j = ctx.report("graph energy");
  j["window"] = lg.window;
  j["field"] = o.field;
  j["energy"] = number(e.value);
  j["truncated"] = e.truncated;
  if (e.truncated) ctx.warn("energy sums only the edges inside the window");
  ctx.emit(j);
  return kExitOk;
}

int run_degree(const Context& ctx, const GraphOpts& o) {
  const LoadedGraph lg = load_graph(ctx, o.src);
  const WeightedGraph& g = lg.graph;
  const Index x = vertex_index(g, o.vertex, "--vertex");
  Json j = ctx.report("graph degree");
  j["window"] = lg.window;
  j["vertex"] = o.vertex;
  j["weighted_degree"] = number(weighted_degree(g, x));
  j["row_sum"] = number(g.row_sum(x));
  j["measure"] = number(g.measure(x));
  ctx.emit(j);
  return kExitOk;
}

int run_norm(const Context& ctx, const GraphOpts& o) {
  const LoadedGraph lg = load_graph(ctx, o.src);
  const WeightedGraph& g = lg.graph;
  const double p = (o.p == "inf") ? kInfinity : std::stod(o.p);
  const ScalarField f = make_field(lg, o.field);
  std::vector<double> w;
  LpOptions opts;
  opts.quasi = o.quasi;
  if (o.weight == "rho1") {
    // (1 + rho(x, o))^{-2}
    const PseudoMetric rho = make_metric(g, o.metric, vertex_index(g, o.base, "--o"));
    for (Index x = 0; x < g.size(); ++x) w.push_back(std::pow(1.0 + rho.from_base()[x], -2.0));
    opts.weight = w;
  } else if (o.weight != "none") {
    fail(Errc::UsageError, "--weight must be none or rho1");
  }
  const auto region = parse_region(g, o.region);
  opts.subset = region;
  Json j = ctx.report("graph norm");
  j["window"] = lg.window;
  j["field"] = o.field;
  j["p"] = number(p);
  j["weight"] = o.weight;
  j["region_size"] = region.size();
  j["norm"] = number(lp_norm(g, f, p, opts));
  if (std::isfinite(p)) j["power_sum"] = number(lp_power_sum(g, f, p, opts));
  ctx.emit(j);
  return kExitOk;
}

int run_classify(const Context& ctx, const GraphOpts& o, const std::string& command) {
  const LoadedGraph lg = load_graph(ctx, o.src);
  const WeightedGraph& g = lg.graph;
  const auto region = parse_region(g, o.region);
  const auto ef = exact_field_named(lg, o.field);
  if (ctx.exact && !ef) fail(Errc::NoExactData, "--exact needs rational graph data and an exact field");
  // Exact data is used whenever it exists unless a tolerance was requested.
  const bool use_exact = ef && (ctx.exact || !ctx.tol_set);
  const Classification c = use_exact ? classify(g, *ef, region) : classify(g, make_field(lg, o.field), region, ctx.tol);
  Json j = ctx.report(command);
  j["window"] = lg.window;
  j["field"] = o.field;
  j["region"] = o.region;
  j["region_size"] = region.size();
  j["exact"] = c.exact;
  j["verdict"] = to_string(c.verdict);
  j["residual"] = number(c.residual);
  j["max_abs"] = number(c.max_abs);
  j["max_positive"] = number(c.max_positive);
  j["max_negative"] = number(c.max_negative);
  j["witness"] = c.witness ? Json(g.id(*c.witness)) : Json(nullptr);
  j["checked"] = c.checked;
  ctx.emit(j);
  return kExitOk;
}

int run_write(const Context& ctx, const GraphOpts& o, const std::string& out_path) {
  const LoadedGraph lg = load_graph(ctx, o.src);
  std::optional<ScalarField> f;
  std::optional<ExactField> ef;
  if (o.field != "none") {
    if (o.field != "graph" || lg.field) f = make_field(lg, o.field);
    ef = exact_field_named(lg, o.field);
  }
  WriteOptions w{ctx.exact};
  if (ctx.exact && !lg.graph.has_exact()) fail(Errc::NoExactData, "graph has no rational data to write exactly");
  auto write = [&](std::ostream& out) {
    write_graph(out, lg.graph, f ? &*f : nullptr, ef ? &*ef : nullptr, w);
  };
  if (out_path.empty() || out_path == "-") {
    write(*ctx.out);
  } else {
    std::ofstream file(out_path);
    if (!file) fail(Errc::UsageError, "cannot write " + out_path);
    write(file);
  }
  return kExitOk;
}

void add_classify(CLI::App* parent, Context& ctx, const std::string& name, const std::string& command) {
  auto o = std::make_shared<GraphOpts>();
  auto* cmd = add_command(parent, ctx, name, "Classify a field as harmonic, subharmonic or superharmonic",
                          [&ctx, o, command] { return run_classify(ctx, *o, command); });
  add_graph_options(cmd, o->src);
  cmd->add_option("--region", o->region, "Vertices to check (default: all complete vertices)");
  cmd->add_option("--field", o->field, "Field: graph (#field), abs, pos, id, harmonic, abs-harmonic, const:c");
}

// metric ---------------------------------------------------------------------

struct MetricOpts {
  GraphSource src;
  std::string kind = "delta";
  double trunc = 0.0;
  std::string lengths;
  VertexId base = 0;
  std::string radii;
  double r = 0.0, R = 0.0;
  bool intrinsic = false, compatible = false;
  std::size_t limit = 200;
};

struct MetricSetup {
  LoadedGraph lg;
  PseudoMetric rho;
};

MetricSetup load_metric(const Context& ctx, const MetricOpts& o, double radius) {
  LoadedGraph lg = radius > 0 && o.kind != "file"
                       ? load_graph_for_radius(ctx, o.src, o.kind, o.base, radius, o.trunc)
                       : load_graph(ctx, o.src);
  const Index b = vertex_index(lg.graph, o.base, "--o");
  PseudoMetric rho = make_metric(lg.graph, o.kind, b, o.trunc, o.lengths);
  return {std::move(lg), std::move(rho)};
}

Json metric_json(const MetricSetup& s, const MetricOpts& o) {
  Json j;
  j["kind"] = to_string(s.rho.kind());
  j["base"] = o.base;
  j["jump_size"] = number(s.rho.jump_size());
  j["certified_radius"] = number(s.rho.certified_radius());
  j["window_truncated"] = s.rho.window_truncated();
  return j;
}

void add_metric_source(CLI::App* cmd, MetricOpts& o) {
  add_graph_options(cmd, o.src);
  cmd->add_option("--kind", o.kind, "Metric: delta, delta-trunc, natural, file");
  cmd->add_option("--trunc", o.trunc, "Truncation radius for delta-trunc");
  cmd->add_option("--lengths", o.lengths, "Edge-length file for --kind file");
  cmd->add_option("--o", o.base, "Base vertex");
}

int run_metric_build(const Context& ctx, const MetricOpts& o) {
  const MetricSetup s = load_metric(ctx, o, 0.0);
  const WeightedGraph& g = s.lg.graph;
  Json j = ctx.report("metric build");
  j["window"] = s.lg.window;
  j["metric"] = metric_json(s, o);
  std::vector<Index> order(g.size());
  for (Index x = 0; x < g.size(); ++x) order[x] = x;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return s.rho.from_base()[a] < s.rho.from_base()[b]; });
  Table t{{"id", "distance"}, {}};
  Json d = Json::array();
  for (Index x : order) {
    t.rows.push_back({double(g.id(x)), s.rho.from_base()[x]});
    if (d.size() < o.limit) d.push_back({{"id", g.id(x)}, {"distance", number(s.rho.from_base()[x])}});
  }
  j["distances"] = d;
  j["distances_truncated"] = order.size() > o.limit;
  ctx.emit(j, &t);
  return kExitOk;
}

int run_metric_verify(const Context& ctx, const MetricOpts& o) {
  const bool both = !o.intrinsic && !o.compatible;
  const auto radii = parse_list(o.radii.empty() ? "1" : o.radii);
  const MetricSetup s = load_metric(ctx, o, max_of(radii));
  const WeightedGraph& g = s.lg.graph;
  Json j = ctx.report("metric verify");
  j["window"] = s.lg.window;
  j["metric"] = metric_json(s, o);
  bool ok = true;
  if (o.intrinsic || both) {
    const auto window = g.complete_vertices();
    const IntrinsicReport rep = verify_intrinsic(g, s.rho, window, ctx.tol_set ? ctx.tol : kDefaultIntrinsicTol);
    j["intrinsic"] = {{"intrinsic", rep.intrinsic},
                      {"max_ratio", number(rep.max_ratio)},
                      {"worst", rep.worst ? Json(g.id(*rep.worst)) : Json(nullptr)},
                      {"offending", id_list(g, rep.offending)},
                      {"checked", rep.checked},
                      {"tol", rep.tol}};
    ok = ok && rep.intrinsic;
  }
  Table t{{"radius", "degree_bound"}, {}};
  if (o.compatible || both) {
    const CompatibilityReport rep = verify_compatible(g, s.rho, radii);
    j["compatible"] = {{"compatible", rep.compatible},
                       {"jump_size", number(rep.jump_size)},
                       {"radii", numbers(rep.radii)},
                       {"degree_bounds", numbers(rep.degree_bounds)},
                       {"certified_up_to", number(rep.certified_up_to)}};
    for (std::size_t i = 0; i < rep.radii.size() && i < rep.degree_bounds.size(); ++i)
      t.rows.push_back({rep.radii[i], rep.degree_bounds[i]});
    ok = ok && rep.compatible;
  }
  j["pass"] = ok;
  ctx.emit(j, &t);
  return ok ? kExitOk : kExitAuditFailure;
}

int run_metric_balls(const Context& ctx, const MetricOpts& o) {
  if (o.radii.empty()) fail(Errc::UsageError, "metric balls needs --radii");
  const auto radii = parse_list(o.radii);
  const MetricSetup s = load_metric(ctx, o, max_of(radii));
  const WeightedGraph& g = s.lg.graph;
  Json j = ctx.report("metric balls");
  j["window"] = s.lg.window;
  j["metric"] = metric_json(s, o);
  Json balls = Json::array();
  Table t{{"radius", "size", "volume"}, {}};
  for (double r : radii) {
    const auto b = s.rho.ball(r);
    double vol = 0;
    for (Index x : b) vol += g.measure(x);
    Json e{{"radius", number(r)}, {"size", b.size()}, {"volume", number(vol)}};
    if (b.size() <= o.limit) e["vertices"] = id_list(g, b);
    balls.push_back(e);
    t.rows.push_back({r, double(b.size()), vol});
  }
  j["balls"] = balls;
  ctx.emit(j, &t);
  return kExitOk;
}

int run_metric_cutoff(const Context& ctx, const MetricOpts& o) {
  const MetricSetup s = load_metric(ctx, o, o.R);
  const WeightedGraph& g = s.lg.graph;
  const CutoffAudit a = audit_cutoff(g, s.rho, o.r, o.R);
  Json j = ctx.report("metric cutoff");
  j["window"] = s.lg.window;
  j["metric"] = metric_json(s, o);
  j["r"] = o.r;
  j["R"] = o.R;
  j["checked"] = a.checked;
  j["violations"] = a.violations;
  j["max_excess"] = number(a.max_excess);
  j["worst"] = a.worst ? Json(g.id(*a.worst)) : Json(nullptr);
  j["pass"] = a.violations == 0;
  ctx.emit(j);
  return a.violations == 0 ? kExitOk : kExitAuditFailure;
}

// potential ------------------------------------------------------------------

struct PotentialOpts {
  GraphSource src;
  std::string metric = "delta";
  double trunc = 0.0;
  VertexId base = 0;
  std::string exhaustion;
  std::string radii;
  std::optional<VertexId> x, y;
  std::string region = "all";
  std::string boundary = "graph";
  std::string rhs;
  std::string field = "graph";
  double t = 1.0;
  int walk_steps = 0;
  std::size_t dense_limit = HeatOptions{}.dense_limit;
};

struct PotentialSetup {
  LoadedGraph lg;
  Index o = 0;
  std::optional<PseudoMetric> rho;
};

// Sizes generator windows so that every requested level is certified.
PotentialSetup load_potential(const Context& ctx, const PotentialOpts& o, bool need_metric) {
  double radius = 0.0;
  int hops = o.walk_steps;
  std::vector<double> radii = o.radii.empty() ? std::vector<double>{} : parse_list(o.radii);
  radius = max_of(radii);
  if (!o.exhaustion.empty()) {
    const auto colon = o.exhaustion.find(':');
    const std::string kind = o.exhaustion.substr(0, colon);
    const auto values = colon == std::string::npos ? std::vector<double>{} : parse_list(o.exhaustion.substr(colon + 1));
    if (kind == "balls") {
      radius = std::max(radius, max_of(values));
      need_metric = true;
    } else {
      hops = std::max(hops, int(std::lround(max_of(values))));
    }
  }
  if (radius > 0) need_metric = true;
  GraphSource src = o.src;
  if (src.window < 0 && hops > 0) {
    const bool generated = !src.generator.empty() && !make_finite(src.generator, parse_params(src.params), ctx.seed);
    if (generated) src.window = hops + 1;
  }
  PotentialSetup s;
  if (radius > 0 && src.window < 0) {
    s.lg = load_graph_for_radius(ctx, src, o.metric, o.base, radius, o.trunc);
  } else {
    s.lg = load_graph(ctx, src);
  }
  s.o = vertex_index(s.lg.graph, o.base, "--o");
  if (need_metric) s.rho = make_metric(s.lg.graph, o.metric, s.o, o.trunc);
  return s;
}

void add_potential_source(CLI::App* cmd, PotentialOpts& o) {
  add_graph_options(cmd, o.src);
  cmd->add_option("--metric", o.metric, "Metric for ball exhaustions: delta, delta-trunc, natural");
  cmd->add_option("--trunc", o.trunc, "Truncation radius for delta-trunc");
  cmd->add_option("--o", o.base, "Base vertex");
}

Exhaustion exhaustion_of(const PotentialSetup& s, const PotentialOpts& o) {
  if (o.exhaustion.empty()) fail(Errc::UsageError, "this command needs --exhaustion hops:... or balls:...");
  return parse_exhaustion(s.lg.graph, o.exhaustion, s.o, s.rho ? &*s.rho : nullptr);
}

Json exhaustion_json(const WeightedGraph& g, const Exhaustion& ex) {
  Json sizes = Json::array();
  for (const auto& l : ex.levels) sizes.push_back(l.size());
  (void)g;
  return {{"rule", ex.rule}, {"scales", numbers(ex.scales)}, {"sizes", sizes}};
}

int run_dirichlet(const Context& ctx, const PotentialOpts& o) {
  const PotentialSetup s = load_potential(ctx, o, false);
  const WeightedGraph& g = s.lg.graph;
  const auto region = parse_region(g, o.region);
  const ScalarField boundary = make_field(s.lg, o.boundary);
  std::optional<ScalarField> rhs;
  if (!o.rhs.empty()) rhs = make_field(s.lg, o.rhs);
  const DirichletSolution sol = solve_dirichlet(g, region, boundary, rhs ? &*rhs : nullptr);
  Json j = ctx.report("potential dirichlet");
  j["window"] = s.lg.window;
  j["region_size"] = region.size();
  j["residual"] = number(sol.residual);
  j["maximum_principle"] = sol.maximum_principle;
  Table t{{"id", "value"}, {}};
  Json values = Json::array();
  for (Index x = 0; x < g.size(); ++x) {
    if (!sol.f.defined(x)) continue;
    t.rows.push_back({double(g.id(x)), sol.f(x)});
    values.push_back({g.id(x), number(sol.f(x))});
  }
  j["values"] = values;
  ctx.emit(j, &t);
  return kExitOk;
}

int run_green(const Context& ctx, const PotentialOpts& o) {
  const PotentialSetup s = load_potential(ctx, o, false);
  const WeightedGraph& g = s.lg.graph;
  const Index x = o.x ? vertex_index(g, *o.x, "--x") : s.o;
  const Index y = o.y ? vertex_index(g, *o.y, "--y") : x;
  Json j = ctx.report("potential green");
  j["window"] = s.lg.window;
  j["x"] = g.id(x);
  j["y"] = g.id(y);
  if (!o.exhaustion.empty()) {
    const Exhaustion ex = exhaustion_of(s, o);
    const MonotoneSequence seq = green_exhaustion(g, ex, x, y);
    j["exhaustion"] = exhaustion_json(g, ex);
    j["green"] = sequence_json(seq);
    Table t{{"scale", "green"}, {}};
    for (std::size_t i = 0; i < seq.values.size(); ++i) t.rows.push_back({seq.scales[i], seq.values[i]});
    ctx.emit(j, &t);
    return kExitOk;
  }
  const auto region = parse_region(g, o.region);
  const ScalarField G = dirichlet_green(g, region, x);
  j["region_size"] = region.size();
  j["value"] = number(G(y));
  Table t{{"id", "green"}, {}};
  for (Index z = 0; z < g.size(); ++z)
    if (G.defined(z)) t.rows.push_back({double(g.id(z)), G(z)});
  ctx.emit(j, &t);
  return kExitOk;
}

int run_capacity(const Context& ctx, const PotentialOpts& o) {
  const PotentialSetup s = load_potential(ctx, o, false);
  const WeightedGraph& g = s.lg.graph;
  const Index x = o.x ? vertex_index(g, *o.x, "--x") : s.o;
  const Exhaustion ex = exhaustion_of(s, o);
  const MonotoneSequence seq = capacity(g, x, ex);
  Json j = ctx.report("potential capacity");
  j["window"] = s.lg.window;
  j["x"] = g.id(x);
  j["exhaustion"] = exhaustion_json(g, ex);
  j["capacity"] = sequence_json(seq);
  Table t{{"scale", "capacity"}, {}};
  for (std::size_t i = 0; i < seq.values.size(); ++i) t.rows.push_back({seq.scales[i], seq.values[i]});
  ctx.emit(j, &t);
  return kExitOk;
}

int run_recurrence(const Context& ctx, PotentialOpts o, const std::string& command) {
  if (o.exhaustion.empty()) {
    if (o.radii.empty()) fail(Errc::UsageError, "recurrence needs --radii or --exhaustion");
    o.exhaustion = "balls:" + o.radii;
  }
  const PotentialSetup s = load_potential(ctx, o, !o.radii.empty());
  const WeightedGraph& g = s.lg.graph;
  const Exhaustion ex = exhaustion_of(s, o);
  const std::vector<double> radii = o.radii.empty() ? std::vector<double>{} : parse_list(o.radii);
  const RecurrenceReport rep = recurrence_report(g, s.o, ex, s.rho ? &*s.rho : nullptr, radii, o.walk_steps);
  Json j = ctx.report(command);
  j["window"] = s.lg.window;
  j["o"] = o.base;
  j["exhaustion"] = exhaustion_json(g, ex);
  if (rep.volume) {
    j["volume"] = {{"radii", numbers(rep.volume->radii)},
                   {"volumes", numbers(rep.volume->volumes)},
                   {"integral", number(rep.volume->integral.integral)},
                   {"verdict", to_string(rep.volume->integral.verdict)},
                   {"exponent", rep.volume->integral.exponent ? number(*rep.volume->integral.exponent)
                                                              : Json(nullptr)},
                   {"boundary_case", rep.volume->integral.boundary_case},
                   {"evidence", to_string(rep.volume->evidence)}};
  }
  j["capacity"] = sequence_json(rep.capacity);
  j["green"] = sequence_json(rep.green);
  if (!rep.transition_sums.empty()) {
    j["transition"] = {{"partial_sums", numbers(rep.transition_sums)},
                       {"diagnosis", diagnosis_json(rep.transition_diagnosis)}};
  }
  j["verdict"] = to_string(rep.verdict);
  Table t{{"scale", "capacity", "green"}, {}};
  for (std::size_t i = 0; i < rep.capacity.values.size(); ++i)
    t.rows.push_back({rep.capacity.scales[i], rep.capacity.values[i], rep.green.values[i]});
  ctx.emit(j, &t);
  return kExitOk;
}

int run_royden(const Context& ctx, const PotentialOpts& o) {
  const PotentialSetup s = load_potential(ctx, o, false);
  const WeightedGraph& g = s.lg.graph;
  const Exhaustion ex = exhaustion_of(s, o);
  const auto levels = royden_decompose(g, ex, make_field(s.lg, o.field));
  Json j = ctx.report("potential royden");
  j["window"] = s.lg.window;
  j["exhaustion"] = exhaustion_json(g, ex);
  Json arr = Json::array();
  Table t{{"scale", "energy_f", "energy_g", "energy_h", "residual"}, {}};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    arr.push_back({{"scale", number(ex.scales[i])},
                   {"energy_f", number(l.energy_f)},
                   {"energy_g", number(l.energy_g)},
                   {"energy_h", number(l.energy_h)},
                   {"residual", number(l.residual)}});
    t.rows.push_back({ex.scales[i], l.energy_f, l.energy_g, l.energy_h, l.residual});
  }
  j["levels"] = arr;
  ctx.emit(j, &t);
  return kExitOk;
}

int run_heat(const Context& ctx, const PotentialOpts& o) {
  const PotentialSetup s = load_potential(ctx, o, false);
  const WeightedGraph& g = s.lg.graph;
  HeatOptions opts;
  opts.dense_limit = o.dense_limit;
  Json j = ctx.report("potential heat");
  j["window"] = s.lg.window;
  j["t"] = o.t;
  if (!o.exhaustion.empty()) {
    const Exhaustion ex = exhaustion_of(s, o);
    const MonotoneSequence seq = stochastic_completeness_probe(g, ex, s.o, o.t, opts);
    j["exhaustion"] = exhaustion_json(g, ex);
    j["probe"] = sequence_json(seq);
    Table t{{"scale", "probe"}, {}};
    for (std::size_t i = 0; i < seq.values.size(); ++i) t.rows.push_back({seq.scales[i], seq.values[i]});
    ctx.emit(j, &t);
    return kExitOk;
  }
  const auto region = parse_region(g, o.region);
  const std::string name = (o.field == "graph" && !s.lg.field) ? "const:1" : o.field;
  const ScalarField u = heat_probe(g, region, o.t, make_field(s.lg, name), opts);
  double lo = kInfinity, hi = -kInfinity;
  Table t{{"id", "value"}, {}};
  for (Index x : region) {
    lo = std::min(lo, u(x));
    hi = std::max(hi, u(x));
    t.rows.push_back({double(g.id(x)), u(x)});
  }
  j["field"] = name;
  j["region_size"] = region.size();
  j["min"] = number(lo);
  j["max"] = number(hi);
  ctx.emit(j, &t);
  return kExitOk;
}

void add_recurrence(CLI::App* parent, Context& ctx, const std::string& name, const std::string& command) {
  auto o = std::make_shared<PotentialOpts>();
  auto* cmd = add_command(parent, ctx, name, "Recurrence evidence from volume growth, capacities and Green kernels",
                          [&ctx, o, command] { return run_recurrence(ctx, *o, command); });
  add_potential_source(cmd, *o);
  cmd->add_option("--exhaustion", o->exhaustion, "hops:n1,n2,... or balls:r1,r2,... (default: balls of --radii)");
  cmd->add_option("--radii", o->radii, "Radii for the volume test, e.g. 10..100:10");
  cmd->add_option("--walk-steps", o->walk_steps, "Random-walk steps for the transition-sum diagnostic");
}

// examples -------------------------------------------------------------------

struct ExampleOpts {
  int n = 30;
  std::string out;
  std::string attachment = "binary-tree";
};

void write_example(const Context& ctx, const ExampleInstance& ex, const std::string& path) {
  const WriteOptions w{ctx.exact};
  if (path.empty() || path == "-") {
    write_graph(*ctx.out, ex.graph, &ex.f, &ex.f_exact, w);
    return;
  }
  std::ofstream file(path);
  if (!file) fail(Errc::UsageError, "cannot write " + path);
  write_graph(file, ex.graph, &ex.f, &ex.f_exact, w);
}

}  // namespace

void add_example_commands(CLI::App* parent, Context& ctx) {
  auto o = std::make_shared<ExampleOpts>();
  auto* fv = add_command(parent, ctx, "finite-volume",
                         "Line graph of finite total measure carrying a non-constant harmonic function", [&ctx, o] {
                           write_example(ctx, finite_volume_example(o->n), o->out);
                           return kExitOk;
                         });
  fv->add_option("--N", o->n, "Harmonicity holds on |x| <= N")->check(CLI::PositiveNumber);
  fv->add_option("--out", o->out, "Output file (default: standard output)");

  auto* iv = add_command(parent, ctx, "infinite-volume",
                         "The same graph with an infinite-volume attachment at the origin", [&ctx, o] {
                           const auto att = make_generator(o->attachment, {});
                           write_example(ctx, infinite_volume_example(o->n, att), o->out);
                           return kExitOk;
                         });
  iv->add_option("--N", o->n, "Window hop radius")->check(CLI::PositiveNumber);
  iv->add_option("--attachment", o->attachment, "Attached family: binary-tree or line");
  iv->add_option("--out", o->out, "Output file (default: standard output)");
}

void register_graph_commands(CLI::App& app, Context& ctx) {
  auto* graph = app.add_subcommand("graph", "Weighted graphs, Laplacian and energy");
  graph->require_subcommand(1);

  auto o = std::make_shared<GraphOpts>();
  auto* info = add_command(graph, ctx, "info", "Summary of the input graph", [&ctx, o] { return run_info(ctx, *o); });
  add_graph_options(info, o->src);

  auto lo = std::make_shared<GraphOpts>();
  auto* lap = add_command(graph, ctx, "laplacian", "Laplacian of a field at one vertex",
                          [&ctx, lo] { return run_laplacian(ctx, *lo); });
  add_graph_options(lap, lo->src);
  lap->add_option("--vertex", lo->vertex, "Vertex id")->required();
  lap->add_option("--field", lo->field, "Field name");

  auto eo = std::make_shared<GraphOpts>();
  auto* en = add_command(graph, ctx, "energy", "Energy of a field", [&ctx, eo] { return run_energy(ctx, *eo); });
  add_graph_options(en, eo->src);
  en->add_option("--field", eo->field, "Field name");

  auto dO = std::make_shared<GraphOpts>();
  auto* deg = add_command(graph, ctx, "degree", "Weighted degree at one vertex", [&ctx, dO] { return run_degree(ctx, *dO); });
  add_graph_options(deg, dO->src);
  deg->add_option("--vertex", dO->vertex, "Vertex id")->required();

  auto no = std::make_shared<GraphOpts>();
  auto* norm = add_command(graph, ctx, "norm", "l^p norm of a field", [&ctx, no] { return run_norm(ctx, *no); });
  add_graph_options(norm, no->src);
  norm->add_option("--field", no->field, "Field name");
  norm->add_option("--p", no->p, "Exponent (or inf)");
  norm->add_option("--weight", no->weight, "none or rho1 = (1 + rho(., o))^-2");
  norm->add_option("--metric", no->metric, "Metric for --weight rho1");
  norm->add_option("--o", no->base, "Base vertex for --weight rho1");
  norm->add_option("--region", no->region, "Vertices to sum over");
  norm->add_flag("--quasi", no->quasi, "Allow 0 < p < 1");

  add_classify(graph, ctx, "classify", "graph classify");
  add_classify(&app, ctx, "classify", "classify");

  auto wo = std::make_shared<GraphOpts>();
  auto out_path = std::make_shared<std::string>();
  wo->field = "graph";
  auto* wr = add_command(graph, ctx, "write", "Write the graph in the text format",
                         [&ctx, wo, out_path] { return run_write(ctx, *wo, *out_path); });
  add_graph_options(wr, wo->src);
  wr->add_option("--field", wo->field, "Field to attach (none to omit)");
  wr->add_option("--out", *out_path, "Output file (default: standard output)");
}

void register_metric_commands(CLI::App& app, Context& ctx) {
  auto* metric = app.add_subcommand("metric", "Intrinsic and compatible metrics, balls, cut-offs");
  metric->require_subcommand(1);

  auto bo = std::make_shared<MetricOpts>();
  auto* build = add_command(metric, ctx, "build", "Distances from the base vertex",
                            [&ctx, bo] { return run_metric_build(ctx, *bo); });
  add_metric_source(build, *bo);
  build->add_option("--limit", bo->limit, "Maximum vertices listed in the report");

  auto vo = std::make_shared<MetricOpts>();
  auto* verify = add_command(metric, ctx, "verify", "Check intrinsic and compatibility conditions",
                             [&ctx, vo] { return run_metric_verify(ctx, *vo); });
  add_metric_source(verify, *vo);
  verify->add_flag("--intrinsic", vo->intrinsic, "Check Sum_y mu(x,y) rho(x,y)^2 <= m(x)");
  verify->add_flag("--compatible", vo->compatible, "Check finite jump size and bounded degree on balls");
  verify->add_option("--radii", vo->radii, "Radii for the compatibility check");

  auto lo = std::make_shared<MetricOpts>();
  auto* balls = add_command(metric, ctx, "balls", "Ball sizes and volumes", [&ctx, lo] { return run_metric_balls(ctx, *lo); });
  add_metric_source(balls, *lo);
  balls->add_option("--radii", lo->radii, "Radii");
  balls->add_option("--limit", lo->limit, "List members of balls up to this size");

  auto co = std::make_shared<MetricOpts>();
  auto* cut = add_command(metric, ctx, "cutoff", "Audit the vertex-wise bound for the cut-off function",
                          [&ctx, co] { return run_metric_cutoff(ctx, *co); });
  add_metric_source(cut, *co);
  cut->add_option("--r", co->r, "Inner radius")->required();
  cut->add_option("--R", co->R, "Outer radius")->required();
}

void register_potential_commands(CLI::App& app, Context& ctx) {
  auto* pot = app.add_subcommand("potential", "Dirichlet problems, Green kernels, capacity and recurrence");
  pot->require_subcommand(1);

  auto dO = std::make_shared<PotentialOpts>();
  auto* dir = add_command(pot, ctx, "dirichlet", "Solve Laplace's equation with boundary data",
                          [&ctx, dO] { return run_dirichlet(ctx, *dO); });
  add_potential_source(dir, *dO);
  dir->add_option("--region", dO->region, "Interior vertices");
  dir->add_option("--boundary", dO->boundary, "Field supplying boundary values");
  dir->add_option("--rhs", dO->rhs, "Field g for Delta u = g (default 0)");

  auto go = std::make_shared<PotentialOpts>();
  auto* green = add_command(pot, ctx, "green", "Green kernel of a region or along an exhaustion",
                            [&ctx, go] { return run_green(ctx, *go); });
  add_potential_source(green, *go);
  green->add_option("--exhaustion", go->exhaustion, "hops:... or balls:...");
  green->add_option("--region", go->region, "Region for a single kernel");
  green->add_option("--x", go->x, "Source vertex (default: --o)");
  green->add_option("--y", go->y, "Target vertex (default: x)");

  auto co = std::make_shared<PotentialOpts>();
  auto* cap = add_command(pot, ctx, "capacity", "Capacity of a vertex along an exhaustion",
                          [&ctx, co] { return run_capacity(ctx, *co); });
  add_potential_source(cap, *co);
  cap->add_option("--exhaustion", co->exhaustion, "hops:... or balls:...")->required();
  cap->add_option("--x", co->x, "Vertex (default: --o)");

  add_recurrence(pot, ctx, "recurrence", "potential recurrence");
  add_recurrence(&app, ctx, "recurrence", "recurrence");

  auto ro = std::make_shared<PotentialOpts>();
  auto* roy = add_command(pot, ctx, "royden", "Harmonic plus finitely supported split of a field",
                          [&ctx, ro] { return run_royden(ctx, *ro); });
  add_potential_source(roy, *ro);
  roy->add_option("--exhaustion", ro->exhaustion, "hops:... or balls:...")->required();
  roy->add_option("--field", ro->field, "Field name");

  auto ho = std::make_shared<PotentialOpts>();
  auto* heat = add_command(pot, ctx, "heat", "Dirichlet heat semigroup on a region or exhaustion",
                           [&ctx, ho] { return run_heat(ctx, *ho); });
  add_potential_source(heat, *ho);
  heat->add_option("--t", ho->t, "Time")->check(CLI::NonNegativeNumber);
  heat->add_option("--exhaustion", ho->exhaustion, "Probe e^{-tL}1 at the base along an exhaustion");
  heat->add_option("--region", ho->region, "Region for a single evaluation");
  heat->add_option("--field", ho->field, "Initial field (default: const:1)");
  heat->add_option("--dense-limit", ho->dense_limit, "Largest region evaluated with a dense exponential");
}

void register_example_commands(CLI::App& app, Context& ctx) {
  auto* ex = app.add_subcommand("examples", "Write the worked example graphs");
  ex->require_subcommand(1);
  add_example_commands(ex, ctx);
}

}  // namespace wgpt::cli
