#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/cli.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = wgpt::cli::run_cli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("wgpt_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("reports carry the schema version and command") {
  const Run r = run({"graph", "info", "--generator", "line", "--window", "5"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "graph info");
  CHECK(j["vertices"] == 13);
  CHECK(j["window"]["truncated"] == true);
  CHECK(r.err.find("truncated window") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"no-such-command"}).code == 1);
  CHECK(run({"graph", "info", "--graph", "/nonexistent/graph.txt"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  // Natural metric on Z with mu = m = 1 is not intrinsic: an audit failure.
  CHECK(run({"metric", "verify", "--generator", "line", "--window", "10", "--kind", "natural"}).code == 2);
  CHECK(run({"metric", "verify", "--generator", "line", "--window", "10", "--kind", "delta"}).code == 0);
  const Run bad = run({"hmap", "solve", "--generator", "line", "--window", "10", "--target", "euclidean:1", "--map",
                       "-", "--region", "0<x<9"},
                      "0 0\n9 1\n");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("cannot parse region") != std::string::npos);
  CHECK(run({"mvi", "--a", "1", "--b", "2", "--p", "1"}).code == 1);
}

TEST_CASE("identical invocations give identical output") {
  const std::vector<std::string> args{"--seed", "7", "mvi", "--grid", "2000"};
  const Run a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = a.json();
  CHECK(j["seed"] == 7);
  const Run c = run({"--seed", "8", "mvi", "--grid", "2000"});
  CHECK(c.out != a.out);
}

TEST_CASE("single mean-value inequality") {
  const auto j = run({"mvi", "--a", "1", "--b", "2", "--p", "3"}).json();
  CHECK(j["lhs"] == 3.0);
  CHECK(j["bound_a"] == 1.5);
  CHECK(j["holds_a"] == true);
}

TEST_CASE("example graph piped into classify is exactly harmonic") {
  const Run ex = run({"--exact", "examples", "finite-volume", "--N", "20", "--out", "-"});
  REQUIRE(ex.code == 0);
  const Run c = run({"--exact", "classify", "--graph", "-", "--region", "|x|<=20"}, ex.out);
  REQUIRE(c.code == 0);
  const auto j = c.json();
  CHECK(j["verdict"] == "harmonic");
  CHECK(j["residual"] == 0.0);
  CHECK(j["exact"] == true);
  CHECK(j["region_size"] == 41);
}

TEST_CASE("--json and --csv write files") {
  const std::string jp = temp_path("karp.json"), cp = temp_path("karp.csv");
  const Run r = run({"--json", jp, "--csv", cp, "liouville", "karp", "--generator", "line", "--window", "150", "--field",
                     "abs", "--p", "2", "--radii", "10..100:10"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto j = nlohmann::json::parse(slurp(jp));
  CHECK(j["verdict"] == "convergent-evidence");
  const std::string csv = slurp(cp);
  CHECK(csv.rfind("radius,v\n10,2030\n", 0) == 0);
  std::remove(jp.c_str());
  std::remove(cp.c_str());
}

TEST_CASE("harmonic map round trip through standard input") {
  const std::vector<std::string> common{"--generator", "line", "--window", "10", "--target", "euclidean:1"};
  auto with = [&](std::vector<std::string> head, std::vector<std::string> tail) {
    head.insert(head.end(), common.begin(), common.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  const Run s = run(with({"hmap", "solve"}, {"--map", "-", "--region", "1..8", "--out", "-"}), "0 0\n9 1\n");
  REQUIRE(s.code == 0);
  std::istringstream rows(s.out);
  long id;
  double v;
  int n = 0;
  while (rows >> id >> v) {
    CHECK(v == doctest::Approx(double(id) / 9.0).epsilon(1e-9));
    ++n;
  }
  CHECK(n == 10);
  const Run c = run(with({"hmap", "check"}, {"--map", "-"}), s.out);
  CHECK(c.json()["harmonic"] == true);
  const Run sub = run(with({"hmap", "subharmonic"}, {"--map", "-", "--samples", "5"}), s.out);
  CHECK(sub.code == 0);
  CHECK(sub.json()["pass"] == true);
  const Run e = run(with({"hmap", "energy"}, {"--map", "-"}), s.out);
  CHECK(e.json()["energy"].get<double>() == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("recurrence verdicts") {
  const auto z = run({"recurrence", "--generator", "line", "--radii", "10..60:10"}).json();
  CHECK(z["verdict"] == "recurrent-evidence");
  const auto t = run({"potential", "recurrence", "--generator", "binary-tree", "--exhaustion", "hops:6..10"}).json();
  CHECK(t["verdict"] == "transient-evidence");
}

}  // TEST_SUITE
