#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cli/context.hpp"
#include "wgpt/growth_fit.hpp"
#include "wgpt/potential.hpp"

namespace wgpt::cli {

/// Subcommand whose callback installs `run` as the context action.
CLI::App* add_command(CLI::App* parent, Context& ctx, const std::string& name, const std::string& desc,
                      std::function<int()> run);

/// Exact counterpart of make_field when the graph carries rational data.
std::optional<ExactField> exact_field_named(const LoadedGraph& lg, const std::string& name);

Index vertex_index(const WeightedGraph& g, VertexId v, const char* what);
Json sequence_json(const MonotoneSequence& s);
Json diagnosis_json(const SequenceDiagnosis& d);
double max_of(const std::vector<double>& v);

/// finite-volume and infinite-volume generators under `parent`.
void add_example_commands(CLI::App* parent, Context& ctx);

}  // namespace wgpt::cli
