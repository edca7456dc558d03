#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include "cli/commands_common.hpp"
#include "wgpt/error.hpp"
#include "wgpt/hadamard.hpp"
#include "wgpt/laplacian.hpp"
#include "wgpt/map_io.hpp"

namespace wgpt::cli {

namespace {

using Rows = std::map<VertexId, std::vector<double>>;

struct HmapOpts {
  GraphSource src;
  std::string target = "euclidean:1";
  std::string map;
  std::string region;
  std::string out;
  std::string y;
  std::size_t samples = 10;
  std::size_t atoms = 4;
  std::size_t max_iters = HarmonicMapOptions{}.max_iters;
  bool gauss_seidel = false;
  bool serial = false;
};

enum class Verb { solve, check, energy, subharmonic, jensen };

std::vector<double> parse_coords(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(Errc::UsageError, "bad coordinate '" + tok + "'");
    }
  }
  return out;
}

Rows read_rows(const Context& ctx, const HmapOpts& o) {
  if (o.map.empty()) fail(Errc::UsageError, "hmap needs --map FILE");
  if (o.map == "-") return read_map_rows(*ctx.in);
  return read_map_rows_file(o.map);
}

template <class S>
struct Target {
  S space;
  std::function<VertexMap<typename S::Point>(const WeightedGraph&, const Rows&)> read;
  std::function<typename S::Point(const std::vector<double>&)> point;
  std::function<Json(const typename S::Point&)> to_json;
};

// Random points on geodesics between values of the map.
template <class S>
std::vector<typename S::Point> sample_points(const S& space, const VertexMap<typename S::Point>& u, std::size_t count,
                                             std::mt19937_64& rng) {
  std::vector<Index> defined;
  for (Index x = 0; x < u.size(); ++x)
    if (u.defined(x)) defined.push_back(x);
  if (defined.empty()) fail(Errc::EmptyMeasure, "map is undefined everywhere");
  std::uniform_int_distribution<std::size_t> pick(0, defined.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<typename S::Point> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& a = u(defined[pick(rng)]);
    const auto& b = u(defined[pick(rng)]);
    out.push_back(space.geodesic(a, b, unit(rng)));
  }
  return out;
}

template <class S>
std::vector<Index> region_or(const WeightedGraph& g, const std::string& text, std::vector<Index> fallback) {
  return text.empty() ? fallback : parse_region(g, text);
}

template <class P>
bool fully_mapped(const WeightedGraph& g, const VertexMap<P>& u) {
  for (Index x = 0; x < g.size(); ++x)
    if (!u.defined(x)) return false;
  return true;
}

// 1/2 Sum mu(x,y) d(x,y)^2 over window edges whose endpoints are both mapped;
// a map read from a file usually covers only part of a generator window.
template <class P, class D>
double mapped_edge_energy(const WeightedGraph& g, const VertexMap<P>& u, D&& d) {
  double e = 0.0;
  for (Index x = 0; x < g.size(); ++x) {
    if (!u.defined(x)) continue;
    const auto nb = g.neighbors(x);
    const auto w = g.weights(x);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (u.defined(nb[k])) {
        const double v = d(x, nb[k]);
        e += w[k] * v * v;
      }
  }
  return 0.5 * e;
}

template <class S>
double map_energy_on_domain(const WeightedGraph& g, const S& space, const VertexMap<typename S::Point>& u) {
  if (fully_mapped(g, u)) return map_energy(g, space, u);
  return mapped_edge_energy(g, u, [&](Index x, Index y) { return space.distance(u(x), u(y)); });
}

template <class S>
double distance_energy_on_domain(const WeightedGraph& g, const S& space, const VertexMap<typename S::Point>& u,
                                 const typename S::Point& y) {
  if (fully_mapped(g, u)) return energy(g, distance_field(space, u, y)).value;
  return mapped_edge_energy(
      g, u, [&](Index a, Index b) { return space.distance(u(a), y) - space.distance(u(b), y); });
}

template <class S>
int run_verb(const Context& ctx, const HmapOpts& o, Verb verb, const Target<S>& t) {
  const LoadedGraph lg = load_graph(ctx, o.src);
  const WeightedGraph& g = lg.graph;
  const auto u0 = t.read(g, read_rows(ctx, o));
  const std::string names[] = {"hmap solve", "hmap check", "hmap energy", "hmap subharmonic", "hmap jensen"};
  Json j = ctx.report(names[int(verb)]);
  j["window"] = lg.window;
  j["target"] = t.space.name();
  std::mt19937_64 rng(ctx.seed);

  if (verb == Verb::solve) {
    std::vector<Index> free;
    for (Index x = 0; x < g.size(); ++x)
      if (!u0.defined(x) && g.complete(x)) free.push_back(x);
    const auto region = region_or<S>(g, o.region, free);
    HarmonicMapOptions opts;
    opts.max_iters = o.max_iters;
    opts.gauss_seidel = o.gauss_seidel;
    opts.parallel = !o.serial;
    const auto res = solve_harmonic_map(g, t.space, region, u0, opts);
    const auto check = is_harmonic_map(g, t.space, res.map, region, ctx.tol);
    j["region_size"] = region.size();
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["last_displacement"] = number(res.last_displacement);
    j["max_defect"] = number(check.max_defect);
    j["energy"] = number(map_energy_on_domain(g, t.space, res.map));
    j["energy_edges"] = fully_mapped(g, res.map) ? "all" : "mapped";
    if (!o.out.empty()) {
      if (o.out == "-") {
        write_map(*ctx.out, g, res.map);
      } else {
        std::ofstream f(o.out);
        if (!f) fail(Errc::UsageError, "cannot write " + o.out);
        write_map(f, g, res.map);
      }
    }
    if (o.out != "-") ctx.emit(j);
    if (!res.converged) {
      ctx.warn("relaxation stopped after " + std::to_string(res.iterations) + " sweeps without converging");
      return kExitError;
    }
    return kExitOk;
  }

  std::vector<Index> inner;
  for (Index x : g.complete_vertices())
    if (u0.defined(x)) {
      bool ok = true;
      for (Index y : g.neighbors(x)) ok = ok && u0.defined(y);
      if (ok) inner.push_back(x);
    }
  const auto region = region_or<S>(g, o.region, inner);
  j["region_size"] = region.size();

  if (verb == Verb::check) {
    const auto c = is_harmonic_map(g, t.space, u0, region, ctx.tol);
    j["harmonic"] = c.harmonic;
    j["max_defect"] = number(c.max_defect);
    j["worst"] = c.worst ? Json(g.id(*c.worst)) : Json(nullptr);
    ctx.emit(j);
    return kExitOk;
  }
  if (verb == Verb::energy) {
    j["energy"] = number(map_energy_on_domain(g, t.space, u0));
    j["energy_edges"] = fully_mapped(g, u0) ? "all" : "mapped";
    ctx.emit(j);
    return kExitOk;
  }
  if (verb == Verb::subharmonic) {
    std::vector<typename S::Point> ys;
    if (!o.y.empty()) ys.push_back(t.point(parse_coords(o.y)));
    else ys = sample_points(t.space, u0, o.samples, rng);
    const double e_map = map_energy_on_domain(g, t.space, u0);
    std::size_t failures = 0, energy_violations = 0;
    Json arr = Json::array();
    for (const auto& y : ys) {
      const auto c = subharmonicity_audit(g, t.space, u0, y, region, ctx.tol);
      const bool ok = c.verdict == Harmonicity::harmonic || c.verdict == Harmonicity::subharmonic;
      const double e_dist = distance_energy_on_domain(g, t.space, u0, y);
      const bool energy_ok = e_dist <= e_map * (1 + 1e-9) + 1e-12;
      failures += !ok;
      energy_violations += !energy_ok;
      arr.push_back({{"y", t.to_json(y)},
                     {"verdict", to_string(c.verdict)},
                     {"max_positive", number(c.max_positive)},
                     {"distance_energy", number(e_dist)},
                     {"energy_ok", energy_ok}});
    }
    j["map_energy"] = number(e_map);
    j["probes"] = arr;
    j["failures"] = failures;
    j["energy_violations"] = energy_violations;
    j["pass"] = failures == 0 && energy_violations == 0;
    ctx.emit(j);
    return failures == 0 && energy_violations == 0 ? kExitOk : kExitAuditFailure;
  }
  // jensen
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = kInfinity;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < o.samples; ++i) {
    PointMeasure<typename S::Point> nu;
    for (const auto& p : sample_points(t.space, u0, std::max<std::size_t>(o.atoms, 1), rng))
      nu.add(p, 0.05 + unit(rng));
    nu.normalize();
    const auto y0 = sample_points(t.space, u0, 1, rng).front();
    const double r = jensen_audit(t.space, nu, y0);
    worst = std::min(worst, r);
    if (r < -ctx.tol) ++violations;
  }
  j["samples"] = o.samples;
  j["atoms"] = o.atoms;
  j["min_residual"] = number(worst);
  j["violations"] = violations;
  j["pass"] = violations == 0;
  ctx.emit(j);
  return violations == 0 ? kExitOk : kExitAuditFailure;
}

int run_hmap(const Context& ctx, const HmapOpts& o, Verb verb) {
  const auto colon = o.target.find(':');
  const std::string kind = o.target.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : o.target.substr(colon + 1);
  if (kind == "euclidean") {
    const std::size_t dim = arg.empty() ? 1 : std::stoul(arg);
    if (dim == 0) fail(Errc::UsageError, "euclidean target needs dimension >= 1");
    Target<EuclideanSpace> t{EuclideanSpace(dim),
                             [dim](const WeightedGraph& g, const Rows& r) { return euclidean_map(g, r, dim); },
                             [dim](const std::vector<double>& c) {
                               if (c.size() != dim) fail(Errc::UsageError, "--y needs " + std::to_string(dim) + " coordinates");
                               return c;
                             },
                             [](const std::vector<double>& p) { return numbers(p); }};
    return run_verb(ctx, o, verb, t);
  }
  if (kind == "tree") {
    if (arg.empty()) fail(Errc::UsageError, "tree target needs tree:FILE");
    auto tree = std::make_shared<MetricTree>(read_tree_file(arg));
    Target<MetricTree> t{*tree,
                         [tree](const WeightedGraph& g, const Rows& r) { return tree_map(g, r, *tree); },
                         [tree](const std::vector<double>& c) {
                           if (c.size() != 2) fail(Errc::UsageError, "--y needs edge,offset");
                           TreePoint p{std::size_t(c[0]), c[1]};
                           tree->validate(p);
                           return p;
                         },
                         [](const TreePoint& p) { return Json{p.edge, p.offset}; }};
    return run_verb(ctx, o, verb, t);
  }
  if (kind == "disk") {
    Target<PoincareDisk> t{PoincareDisk{}, [](const WeightedGraph& g, const Rows& r) { return disk_map(g, r); },
                           [](const std::vector<double>& c) {
                             if (c.size() != 2) fail(Errc::UsageError, "--y needs re,im");
                             const PoincareDisk::Point z{c[0], c[1]};
                             PoincareDisk{}.validate(z);
                             return z;
                           },
                           [](const PoincareDisk::Point& z) { return Json{z.real(), z.imag()}; }};
    return run_verb(ctx, o, verb, t);
  }
  fail(Errc::UsageError, "unknown target '" + o.target + "' (euclidean:n, tree:FILE or disk)");
}

}  // namespace

void register_hmap_commands(CLI::App& app, Context& ctx) {
  auto* hm = app.add_subcommand("hmap", "Harmonic maps into Hadamard spaces");
  hm->require_subcommand(1);
  const std::pair<const char*, Verb> verbs[] = {{"solve", Verb::solve},
                                                {"check", Verb::check},
                                                {"energy", Verb::energy},
                                                {"subharmonic", Verb::subharmonic},
                                                {"jensen", Verb::jensen}};
  const char* help[] = {"Relax a map to harmonicity with fixed boundary values",
                        "Barycenter defect of a map on a region", "Energy of a map",
                        "Audit subharmonicity of distance functions and the energy comparison",
                        "Audit Jensen's inequality for random measures on the map image"};
  for (std::size_t i = 0; i < std::size(verbs); ++i) {
    auto o = std::make_shared<HmapOpts>();
    const Verb verb = verbs[i].second;
    auto* cmd = add_command(hm, ctx, verbs[i].first, help[i], [&ctx, o, verb] { return run_hmap(ctx, *o, verb); });
    add_graph_options(cmd, o->src);
    cmd->add_option("--target", o->target, "euclidean:n, tree:FILE or disk");
    cmd->add_option("--map", o->map, "Map file of `vertex-id coordinates` lines")->required();
    cmd->add_option("--region", o->region, "Vertices (default: free vertices for solve, interior otherwise)");
    if (verb == Verb::solve) {
      cmd->add_option("--out", o->out, "Write the solved map here ('-' for standard output)");
      cmd->add_option("--max-iters", o->max_iters, "Sweep limit");
      cmd->add_flag("--gauss-seidel", o->gauss_seidel, "In-place sweeps");
      cmd->add_flag("--serial", o->serial, "Disable parallel sweeps");
    }
    if (verb == Verb::subharmonic) {
      cmd->add_option("--y", o->y, "Reference point (comma-separated coordinates)");
      cmd->add_option("--samples", o->samples, "Random reference points when --y is absent");
    }
    if (verb == Verb::jensen) {
      cmd->add_option("--samples", o->samples, "Random measures");
      cmd->add_option("--atoms", o->atoms, "Atoms per measure");
    }
  }
}

}  // namespace wgpt::cli
