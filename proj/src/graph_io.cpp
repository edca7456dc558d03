#include "wgpt/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "wgpt/error.hpp"

namespace wgpt {

namespace {

enum class Section { none, vertices, edges, field, halo, window, generator };

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

VertexId parse_id(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(Errc::ParseError, "line " + std::to_string(line_no) + ": bad vertex id '" + s + "'");
  }
}

Rational parse_value(const std::string& s, int line_no) {
  try {
    return parse_rational(s);
  } catch (const Error& e) {
    fail(Errc::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace

GraphFile read_graph(std::istream& in) {
  GraphFile out;
  struct VertexLine {
    VertexId id;
    Rational m;
  };
  struct EdgeLine {
    VertexId a, b;
    Rational mu;
  };
  std::vector<VertexLine> vertices;
  std::vector<EdgeLine> edges;
  std::vector<std::pair<VertexId, Rational>> field, halo;
  std::optional<WindowInfo> window;
  bool saw_vertices = false;

  Section section = Section::none;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '%') continue;
    if (toks[0][0] == '#') {
      const std::string& h = toks[0];
      if (h == "#vertices") {
        section = Section::vertices;
        saw_vertices = true;
      } else if (h == "#edges") {
        section = Section::edges;
      } else if (h == "#field") {
        section = Section::field;
      } else if (h == "#halo") {
        section = Section::halo;
      } else if (h == "#window") {
        section = Section::window;
      } else if (h == "#generator") {
        section = Section::generator;
      } else {
        fail(Errc::ParseError, "line " + std::to_string(line_no) + ": unknown section '" + h + "'");
      }
      continue;
    }
    auto expect = [&](std::size_t n) {
      if (toks.size() != n)
        fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " fields");
    };
    switch (section) {
      case Section::none:
        fail(Errc::ParseError, "line " + std::to_string(line_no) + ": data before any section header");
      case Section::vertices:
        expect(2);
        vertices.push_back({parse_id(toks[0], line_no), parse_value(toks[1], line_no)});
        break;
      case Section::edges:
        expect(3);
        edges.push_back({parse_id(toks[0], line_no), parse_id(toks[1], line_no), parse_value(toks[2], line_no)});
        break;
      case Section::field:
        expect(2);
        field.emplace_back(parse_id(toks[0], line_no), parse_value(toks[1], line_no));
        break;
      case Section::halo:
        expect(2);
        halo.emplace_back(parse_id(toks[0], line_no), parse_value(toks[1], line_no));
        break;
      case Section::window:
        expect(4);
        window = WindowInfo{toks[0], parse_id(toks[1], line_no), static_cast<int>(parse_id(toks[2], line_no)),
                            static_cast<int>(parse_id(toks[3], line_no))};
        break;
      case Section::generator: {
        GeneratorSpec spec;
        spec.name = toks[0];
        for (std::size_t i = 1; i < toks.size(); ++i) {
          const auto eq = toks[i].find('=');
          if (eq == std::string::npos)
            fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected key=value, got '" + toks[i] + "'");
          spec.params[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
        }
        out.generator = std::move(spec);
        break;
      }
    }
  }

  if (!saw_vertices) {
    if (!out.generator) fail(Errc::ParseError, "input has neither a #vertices section nor a #generator block");
    return out;
  }
  GraphBuilder b(true);
  for (const auto& v : vertices) b.add_vertex(v.id, v.m);
  for (const auto& e : edges) b.add_edge(e.a, e.b, e.mu);
  for (const auto& [id, rs] : halo) b.set_incomplete(id, to_double(rs), true);
  if (window) b.set_window(*window);
  out.graph = b.build();
  if (!field.empty()) {
    const auto& g = *out.graph;
    std::vector<Rational> vals(g.size());
    std::vector<char> seen(g.size(), 0);
    for (const auto& [id, val] : field) {
      const Index x = g.index(id);
      vals[x] = val;
      seen[x] = 1;
    }
    ExactField ef(std::move(vals));
    for (Index x = 0; x < g.size(); ++x)
      if (!seen[x]) ef.unset(x);
    out.field = ef.to_double();
    out.exact_field = std::move(ef);
  }
  return out;
}

GraphFile read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::UsageError, "cannot open graph file '" + path + "'");
  return read_graph(in);
}

std::string format_double(double v) {
  // Shortest representation that round-trips.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_graph(std::ostream& out, const WeightedGraph& g, const ScalarField* f, const ExactField* f_exact,
                 const WriteOptions& opts) {
  const bool exact = opts.exact && g.has_exact();
  out << "#vertices\n";
  for (Index x = 0; x < g.size(); ++x)
    out << g.id(x) << ' ' << (exact ? to_string(g.exact_measure(x)) : format_double(g.measure(x))) << '\n';
  out << "#edges\n";
  for (Index x = 0; x < g.size(); ++x) {
    const auto nb = g.neighbors(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] < x) continue;
      out << g.id(x) << ' ' << g.id(nb[k]) << ' '
          << (exact ? to_string(g.exact_weights(x)[k]) : format_double(g.weights(x)[k])) << '\n';
    }
  }
  if (!g.all_complete()) {
    out << "#halo\n";
    for (Index x = 0; x < g.size(); ++x)
      if (!g.complete(x)) out << g.id(x) << ' ' << format_double(g.row_sum(x)) << '\n';
  }
  if (g.window()) {
    const auto& w = *g.window();
    out << "#window\n" << w.family << ' ' << w.root << ' ' << w.core_hops << ' ' << w.halo_hops << '\n';
  }
  if (f_exact && opts.exact) {
    out << "#field\n";
    for (Index x = 0; x < g.size(); ++x)
      if (f_exact->defined(x)) out << g.id(x) << ' ' << to_string((*f_exact)(x)) << '\n';
  } else if (f) {
    out << "#field\n";
    for (Index x = 0; x < g.size(); ++x)
      if (f->defined(x)) out << g.id(x) << ' ' << format_double((*f)(x)) << '\n';
  }
}

}  // namespace wgpt
