#include "cli/cli.hpp"

#include <algorithm>
#include <iostream>

#include "cli/context.hpp"
#include "wgpt/error.hpp"
#include "wgpt/kernels.hpp"

namespace wgpt::cli {

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.in = &in;
  ctx.out = &out;
  ctx.err = &err;

  CLI::App app{"Potential theory on weighted graphs: Laplacians, intrinsic metrics, recurrence, "
               "Liouville-type audits and harmonic maps into Hadamard spaces.",
               "wgpt"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--exact", ctx.exact, "Exact rational arithmetic where supported");
  app.add_option("--tol", ctx.tol, "Tolerance for classifications and audits")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { ctx.tol_set = true; });
  app.add_option("--seed", ctx.seed, "Seed for randomized audits");
  app.add_option("--threads", ctx.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
  app.add_option("--json", ctx.json_path, "Write the JSON report to this file instead of standard output");
  app.add_option("--csv", ctx.csv_path, "Write the per-radius table to this CSV file");

  register_graph_commands(app, ctx);
  register_metric_commands(app, ctx);
  register_potential_commands(app, ctx);
  register_liouville_commands(app, ctx);
  register_example_commands(app, ctx);
  register_hmap_commands(app, ctx);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  try {
    if (ctx.threads > 0) kernels::set_threads(ctx.threads);
    if (!ctx.action) {
      err << "error: no command selected\n";
      return kExitError;
    }
    return ctx.action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace wgpt::cli
