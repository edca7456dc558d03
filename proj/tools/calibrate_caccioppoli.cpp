// Recomputes the maximum audit ratios of the built-in suite and writes the
// golden file consumed by the regression test.
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "wgpt/audit_suite.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : "tests/golden/caccioppoli_ratios.json";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : wgpt::run_audit_suite(wgpt::audit_suite())) {
    rows.push_back({{"instance", row.instance},
                    {"p", row.p},
                    {"audit", wgpt::to_string(row.kind)},
                    {"constant", row.constant},
                    {"pairs", row.pairs},
                    {"failures", row.failures},
                    {"max_ratio", row.max_ratio}});
    std::cout << row.instance << " p=" << row.p << ' ' << wgpt::to_string(row.kind) << " max_ratio=" << row.max_ratio
              << " constant=" << row.constant << " failures=" << row.failures << '\n';
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << '\n';
    return 1;
  }
  out << nlohmann::ordered_json{{"schema", 1}, {"rows", rows}}.dump(2) << '\n';
  return 0;
}
