#include <iostream>

#include <CLI11.hpp>

#include "torelli/cli.hpp"
#include "torelli/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stable dual graphs, extremal assignments and Torelli classes"};
  app.set_version_flag("--version", torelli::kToolVersion);
  app.require_subcommand(1);
  torelli::RunConfig config;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", config.out, "Write the artifact here");
    sub->add_option("--format", config.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    sub->add_option("--jobs", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", config.timing, "Include wall time in the report");
  };
  auto catalog = [&](CLI::App* sub) {
    sub->add_option("--genus,-g", config.genus, "Genus")->required();
    sub->add_option("--markings,-n", config.markings, "Number of markings");
    sub->add_option("--bound", config.bound, "Cap on 3g-3+n");
    sub->add_flag("--no-cache", [&](std::int64_t) { config.use_cache = false; }, "Do not use the catalog cache");
  };

  auto* en = app.add_subcommand("enumerate", "Enumerate stable graphs of type (g,n)");
  catalog(en);
  common(en);
  auto* va = app.add_subcommand("verify-assignment", "Check the extremal assignment axioms on a catalog");
  catalog(va);
  va->add_option("--assignment", config.assignment, "F or a table JSON path");
  common(va);
  auto* co = app.add_subcommand("contract", "Contract Z(G) to an axis graph");
  co->add_option("--graph", config.graph_path, "Graph JSON")->required();
  co->add_option("--assignment", config.assignment, "F or a table JSON path");
  common(co);
  auto* fi = app.add_subcommand("fiber", "Enumerate the combinatorial fiber over an axis graph");
  fi->add_option("--axis", config.axis_path, "Axis graph JSON")->required();
  common(fi);
  auto* tc = app.add_subcommand("torelli-classes", "Group a catalog by Torelli key");
  catalog(tc);
  common(tc);
  auto* fc = app.add_subcommand("fiber-check", "Decide whether the Torelli class is constant on the fiber");
  fc->add_option("--axis", config.axis_path, "Axis graph JSON")->required();
  common(fc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  config.command = app.get_subcommands().front()->get_name();
  return torelli::run_command(config, std::cout, std::cerr);
}
