#include "cli/context.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <regex>
#include <sstream>

#include "wgpt/error.hpp"
#include "wgpt/graph_io.hpp"

namespace wgpt::cli {

void Context::warn(const std::string& msg) const { *err << "warning: " << msg << '\n'; }

Json Context::report(const std::string& command) const {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  j["seed"] = seed;
  j["tol"] = tol;
  return j;
}

void Context::emit(const Json& report, const Table* table) const {
  const std::string text = report.dump(2) + "\n";
  if (json_path.empty()) {
    *out << text;
  } else {
    std::ofstream f(json_path);
    if (!f) fail(Errc::UsageError, "cannot write " + json_path);
    f << text;
  }
  if (!csv_path.empty()) {
    if (!table) {
      warn("this command has no per-radius table; --csv ignored");
      return;
    }
    std::ofstream f(csv_path);
    if (!f) fail(Errc::UsageError, "cannot write " + csv_path);
    for (std::size_t i = 0; i < table->columns.size(); ++i) f << (i ? "," : "") << table->columns[i];
    f << '\n';
    for (const auto& row : table->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_double(row[i]);
      f << '\n';
    }
  }
}

void add_graph_options(CLI::App* cmd, GraphSource& src) {
  cmd->add_option("--graph", src.file, "Graph file ('-' reads standard input)");
  cmd->add_option("--generator", src.generator,
                  "Graph family: line, decaying-line, binary-tree, infinite-volume, path, random, random-tree");
  cmd->add_option("--gen-param", src.params, "Family parameter key=value (repeatable)");
  cmd->add_option("--window", src.window, "Core hop radius of a generator window");
  cmd->add_option("--halo", src.halo, "Halo hops around the core")->check(CLI::NonNegativeNumber);
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& kv) {
  std::map<std::string, std::string> out;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) fail(Errc::UsageError, "parameter '" + s + "' is not key=value");
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

namespace {

Rational param_rational(const std::map<std::string, std::string>& p, const std::string& key, const Rational& def) {
  const auto it = p.find(key);
  return it == p.end() ? def : parse_rational(it->second);
}

long long param_int(const std::map<std::string, std::string>& p, const std::string& key, long long def) {
  const auto it = p.find(key);
  if (it == p.end()) return def;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    fail(Errc::UsageError, "parameter " + key + " must be an integer");
  }
}

void check_known(const std::map<std::string, std::string>& p, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : p)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      fail(Errc::UsageError, "unknown family parameter '" + k + "'");
}

Json window_json(const WeightedGraph& g) {
  Json w;
  w["vertices"] = g.size();
  w["edges"] = g.edge_count();
  if (g.size() > 0) {
    const auto [lo, hi] = std::minmax_element(g.ids().begin(), g.ids().end());
    w["id_min"] = *lo;
    w["id_max"] = *hi;
  }
  if (const auto& info = g.window()) {
    w["family"] = info->family;
    w["root"] = info->root;
    w["core_hops"] = info->core_hops;
    w["halo_hops"] = info->halo_hops;
    w["complete_vertices"] = g.complete_vertices().size();
    w["truncated"] = true;
  } else {
    w["truncated"] = !g.all_complete();
  }
  return w;
}

LoadedGraph finish(const Context& ctx, WeightedGraph g) {
  LoadedGraph lg;
  lg.window = window_json(g);
  if (const auto& info = g.window())
    ctx.warn("using a truncated window of '" + info->family + "': core " + std::to_string(info->core_hops) +
             " hops + halo " + std::to_string(info->halo_hops) + " around vertex " + std::to_string(info->root) + " (" +
             std::to_string(g.size()) + " vertices)");
  else if (!g.all_complete())
    ctx.warn("graph has vertices with neighbours outside the file; results hold only away from them");
  lg.graph = std::move(g);
  return lg;
}

}  // namespace

GraphGenerator make_generator(const std::string& name, const std::map<std::string, std::string>& params) {
  if (name == "line") {
    check_known(params, {"mu", "m"});
    return line_generator(param_rational(params, "mu", 1), param_rational(params, "m", 1));
  }
  if (name == "decaying-line") {
    check_known(params, {});
    return decaying_line_generator();
  }
  if (name == "binary-tree") {
    check_known(params, {"mu", "m"});
    return binary_tree_generator(param_rational(params, "mu", 1), param_rational(params, "m", 1));
  }
  if (name == "infinite-volume") {
    check_known(params, {"attachment"});
    const auto it = params.find("attachment");
    const std::string att = it == params.end() ? "binary-tree" : it->second;
    if (att != "binary-tree" && att != "line") fail(Errc::UsageError, "attachment must be binary-tree or line");
    return glue_generators(decaying_line_generator(), 0, make_generator(att, {}), kAttachmentIdOffset);
  }
  fail(Errc::InvalidGraph, "unknown graph family '" + name + "'");
}

std::optional<WeightedGraph> make_finite(const std::string& name, const std::map<std::string, std::string>& params,
                                         std::uint64_t seed) {
  if (name == "path") {
    check_known(params, {"n", "mu", "m"});
    return path_graph(int(param_int(params, "n", 10)), to_double(param_rational(params, "mu", 1)),
                      to_double(param_rational(params, "m", 1)));
  }
  if (name == "random" || name == "random-tree") {
    check_known(params, {"n", "seed"});
    const int n = int(param_int(params, "n", 50));
    const auto s = std::uint64_t(param_int(params, "seed", (long long)seed));
    return name == "random" ? random_connected_graph(n, s) : random_tree(n, s);
  }
  return std::nullopt;
}

LoadedGraph load_graph(const Context& ctx, const GraphSource& src) {
  if (!src.generator.empty()) {
    const auto params = parse_params(src.params);
    if (auto g = make_finite(src.generator, params, ctx.seed)) return finish(ctx, std::move(*g));
    const int core = src.window >= 0 ? src.window : 20;
    return finish(ctx, make_generator(src.generator, params).window(core, src.halo));
  }
  GraphFile file;
  if (src.file.empty() || src.file == "-") file = read_graph(*ctx.in);
  else file = read_graph_file(src.file);
  if (file.graph) {
    LoadedGraph lg = finish(ctx, std::move(*file.graph));
    lg.field = std::move(file.field);
    lg.exact_field = std::move(file.exact_field);
    return lg;
  }
  if (file.generator) {
    auto params = file.generator->params;
    int core = src.window >= 0 ? src.window : 20, halo = src.halo;
    if (auto it = params.find("window"); it != params.end()) {
      core = std::stoi(it->second);
      params.erase(it);
    }
    if (auto it = params.find("halo"); it != params.end()) {
      halo = std::stoi(it->second);
      params.erase(it);
    }
    if (auto g = make_finite(file.generator->name, params, ctx.seed)) return finish(ctx, std::move(*g));
    return finish(ctx, make_generator(file.generator->name, params).window(core, halo));
  }
  fail(Errc::ParseError, "input contains neither a graph nor a generator block");
}

PseudoMetric make_metric(const WeightedGraph& g, const std::string& kind, Index base, double trunc,
                         const std::string& lengths_file) {
  if (kind == "natural") return natural_metric(g, base);
  if (kind == "delta") return path_metric_delta(g, base);
  if (kind == "delta-trunc") {
    if (!(trunc > 0)) fail(Errc::UsageError, "delta-trunc needs --trunc r > 0");
    return truncate_metric(path_metric_delta(g, base), trunc, g);
  }
  if (kind == "file") {
    if (lengths_file.empty()) fail(Errc::UsageError, "--kind file needs --lengths FILE");
    std::ifstream in(lengths_file);
    if (!in) fail(Errc::ParseError, "cannot open " + lengths_file);
    const Csr& adj = g.adjacency();
    std::vector<double> len(adj.targets.size(), std::numeric_limits<double>::quiet_NaN());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '%' || line[0] == '#') continue;
      std::istringstream ss(line);
      VertexId a, b;
      double l;
      if (!(ss >> a >> b >> l)) fail(Errc::ParseError, "bad length line '" + line + "'");
      const Index x = g.index(a), y = g.index(b);
      bool found = false;
      for (auto [p, q] : {std::pair{x, y}, std::pair{y, x}}) {
        const auto nb = g.neighbors(p);
        const auto pos = std::lower_bound(nb.begin(), nb.end(), q);
        if (pos != nb.end() && *pos == q) {
          len[adj.offsets[p] + std::size_t(pos - nb.begin())] = l;
          found = true;
        }
      }
      if (!found) fail(Errc::UsageError, "length given for a non-edge " + std::to_string(a) + "-" + std::to_string(b));
    }
    for (double l : len)
      if (std::isnan(l)) fail(Errc::UsageError, "length file misses an edge");
    return PseudoMetric::path(g, std::move(len), base);
  }
  fail(Errc::UsageError, "unknown metric kind '" + kind + "'");
}

LoadedGraph load_graph_for_radius(const Context& ctx, const GraphSource& src, const std::string& metric_kind,
                                  VertexId base, double radius, double trunc) {
  const bool generated = !src.generator.empty() && !make_finite(src.generator, parse_params(src.params), ctx.seed);
  if (!generated || src.window >= 0) return load_graph(ctx, src);
  const auto gen = make_generator(src.generator, parse_params(src.params));
  int hops = std::max(8, int(std::ceil(radius)) + 2);
  for (;;) {
    WeightedGraph g = gen.window(hops, src.halo);
    const auto o = g.find(base);
    if (!o) fail(Errc::UnknownVertex, "base vertex " + std::to_string(base) + " is not in the family");
    const PseudoMetric rho = make_metric(g, metric_kind, *o, trunc);
    if (rho.certified_radius() > radius + rho.jump_size()) return finish(ctx, std::move(g));
    if (g.size() > 2'000'000 || hops > (1 << 20))
      fail(Errc::WindowTooSmall, "no window up to " + std::to_string(hops) + " hops certifies radius " +
                                     std::to_string(radius));
    hops *= 2;
  }
}

std::vector<Index> parse_region(const WeightedGraph& g, const std::string& text) {
  std::smatch m;
  std::vector<Index> out;
  if (text == "all" || text == "complete") return g.complete_vertices();
  static const std::regex absx(R"(\s*\|x\|\s*(<=|<)\s*(-?\d+)\s*)");
  static const std::regex range(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
  if (std::regex_match(text, m, absx)) {
    const long long n = std::stoll(m[2]);
    const bool strict = m[1] == "<";
    for (Index x = 0; x < g.size(); ++x) {
      const long long a = std::llabs(g.id(x));
      if (strict ? a < n : a <= n) out.push_back(x);
    }
    return out;
  }
  if (std::regex_match(text, m, range)) {
    const long long a = std::stoll(m[1]), b = std::stoll(m[2]);
    for (Index x = 0; x < g.size(); ++x)
      if (g.id(x) >= a && g.id(x) <= b) out.push_back(x);
    return out;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    long long id = 0;
    try {
      id = std::stoll(tok, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (tok.empty() || used != tok.size()) fail(Errc::UsageError, "cannot parse region '" + text + "'");
    out.push_back(g.index(id));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const double a = std::stod(text.substr(0, dots));
      std::string rest = text.substr(dots + 2);
      double step = 1.0;
      if (const auto colon = rest.find(':'); colon != std::string::npos) {
        step = std::stod(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
      }
      const double b = std::stod(rest);
      if (!(step > 0)) fail(Errc::UsageError, "range step must be positive");
      const auto n = std::size_t(std::floor((b - a) / step + 1e-9));
      for (std::size_t i = 0; i <= n; ++i) out.push_back(a + double(i) * step);
      return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  } catch (const std::invalid_argument&) {
    fail(Errc::UsageError, "cannot parse list '" + text + "'");
  }
  if (out.empty()) fail(Errc::UsageError, "empty list");
  return out;
}

Exhaustion parse_exhaustion(const WeightedGraph& g, const std::string& text, Index base, const PseudoMetric* rho) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(Errc::UsageError, "exhaustion must be hops:... or balls:...");
  const std::string kind = text.substr(0, colon);
  const auto values = parse_list(text.substr(colon + 1));
  if (kind == "hops") {
    std::vector<int> hops;
    for (double v : values) hops.push_back(int(std::lround(v)));
    return hop_exhaustion(g, base, hops);
  }
  if (kind == "balls") {
    if (!rho) fail(Errc::UsageError, "ball exhaustion needs a metric");
    return ball_exhaustion(*rho, values);
  }
  fail(Errc::UsageError, "unknown exhaustion rule '" + kind + "'");
}

ScalarField make_field(const LoadedGraph& lg, const std::string& name) {
  const WeightedGraph& g = lg.graph;
  if (name == "graph") {
    if (!lg.field) fail(Errc::UsageError, "input has no #field section");
    return *lg.field;
  }
  auto harmonic = [](VertexId x) { return x >= kAttachmentIdOffset ? 0.0 : to_double(decaying_line_harmonic(x)); };
  if (name == "abs") return ScalarField::from_ids(g, [](VertexId x) { return std::abs(double(x)); });
  if (name == "pos") return ScalarField::from_ids(g, [](VertexId x) { return std::max(0.0, double(x)); });
  if (name == "id") return ScalarField::from_ids(g, [](VertexId x) { return double(x); });
  if (name == "harmonic") return ScalarField::from_ids(g, harmonic);
  if (name == "abs-harmonic") return ScalarField::from_ids(g, [&](VertexId x) { return std::abs(harmonic(x)); });
  if (name.rfind("const:", 0) == 0) return ScalarField::constant(g.size(), std::stod(name.substr(6)));
  fail(Errc::UsageError, "unknown field '" + name + "'");
}

Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json id_list(const WeightedGraph& g, const std::vector<Index>& v) {
  Json a = Json::array();
  for (Index x : v) a.push_back(g.id(x));
  return a;
}

}  // namespace wgpt::cli
