#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "torelli/enumerate.hpp"

namespace torelli {

struct RunConfig {
  std::string command;
  int genus = -1;
  int markings = 0;
  int bound = 8;
  std::string assignment = "F";  // builtin name or table path
  std::string graph_path;
  std::string axis_path;
  std::string out;
  std::string format = "json";  // json | dot
  int jobs = 1;
  bool timing = false;
  bool use_cache = true;
};

nlohmann::json catalog_to_json(const GraphCatalog& catalog, int bound);
GraphCatalog catalog_from_json(const nlohmann::json& j);

/// $TORELLI_GRAPHS_CACHE, else $XDG_CACHE_HOME/torelli-graphs, else
/// $HOME/.cache/torelli-graphs.
std::filesystem::path cache_dir();
/// Loads (g, n) from the cache or enumerates and stores it.
GraphCatalog load_or_enumerate(int g, int n, int bound, int jobs, bool use_cache);

/// Runs one subcommand. The report (or the requested artifact) goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace torelli
