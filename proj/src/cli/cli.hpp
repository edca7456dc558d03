#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wgpt::cli {

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 2 audit failure, 1 usage or data error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace wgpt::cli
