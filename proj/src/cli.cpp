#include "torelli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "torelli/assignment.hpp"
#include "torelli/axis.hpp"
#include "torelli/canonical.hpp"
#include "torelli/error.hpp"
#include "torelli/io.hpp"
#include "torelli/torelli.hpp"

namespace torelli {

using nlohmann::json;

json catalog_to_json(const GraphCatalog& catalog, int bound) {
  json j;
  j["schema"] = kSchema;
  j["g"] = catalog.g;
  j["n"] = catalog.n;
  j["count"] = catalog.size();
  j["tool_version"] = kToolVersion;
  j["bound"] = bound;
  j["graphs"] = json::array();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    json gj = graph_to_json(catalog.graphs[i]);
    gj["key"] = to_hex(catalog.keys[i]);
    j["graphs"].push_back(std::move(gj));
  }
  return j;
}

GraphCatalog catalog_from_json(const json& j) {
  if (!j.is_object() || !j.contains("graphs") || !j.at("graphs").is_array()) {
    throw ParseError("catalog JSON needs a \"graphs\" array");
  }
  const int g = j.value("g", -1), n = j.value("n", -1);
  std::vector<Graph> graphs;
  for (const auto& gj : j.at("graphs")) {
    Graph graph = graph_from_json(gj);
    graph.validate_dual_graph();
    if (genus(graph) != g || graph.num_legs() != n || !is_stable(graph)) {
      throw StructuralError("catalog entry is not a stable graph of type (" + std::to_string(g) +
                            "," + std::to_string(n) + ")");
    }
    graphs.push_back(std::move(graph));
  }
  GraphCatalog cat = make_catalog(g, n, std::move(graphs));
  if (j.contains("count") && j.at("count") != cat.size()) throw ParseError("catalog count mismatch");
  return cat;
}

std::filesystem::path cache_dir() {
  if (const char* dir = std::getenv("TORELLI_GRAPHS_CACHE"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "torelli-graphs";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "torelli-graphs";
  }
  return std::filesystem::temp_directory_path() / "torelli-graphs";
}

GraphCatalog load_or_enumerate(int g, int n, int bound, int jobs, bool use_cache) {
  EnumerationOptions opt;
  opt.bound = bound;
  opt.jobs = jobs;
  if (!use_cache) return enumerate_stable_graphs(g, n, opt);
  // Validate (g, n, bound) before touching the disk.
  if (2 * g - 2 + n <= 0 || 3 * g - 3 + n > bound) return enumerate_stable_graphs(g, n, opt);
  const auto dir = cache_dir();
  const auto file = dir / ("catalog-g" + std::to_string(g) + "-n" + std::to_string(n) + "-b" +
                           std::to_string(bound) + "-v" + kToolVersion + ".json");
  std::error_code ec;
  if (std::filesystem::exists(file, ec)) {
    try {
      const json j = read_json_file(file.string());
      if (j.value("tool_version", std::string()) == kToolVersion && j.value("g", -1) == g &&
          j.value("n", -1) == n && j.value("bound", -1) == bound) {
        return catalog_from_json(j);
      }
    } catch (const Error&) {
      // Unreadable cache entry: rebuild below.
    }
  }
  GraphCatalog cat = enumerate_stable_graphs(g, n, opt);
  std::filesystem::create_directories(dir, ec);
  if (!ec) {
    const auto tmp = file.string() + ".tmp";
    try {
      write_text_file(tmp, catalog_to_json(cat, bound).dump());
      std::filesystem::rename(tmp, file, ec);
    } catch (const Error&) {
      // Cache is best effort.
    }
  }
  return cat;
}

namespace {

json config_echo(const RunConfig& c) {
  json j;
  if (c.genus >= 0) {
    j["genus"] = c.genus;
    j["markings"] = c.markings;
    j["bound"] = c.bound;
  }
  if (c.command == "verify-assignment" || c.command == "contract") j["assignment"] = c.assignment;
  if (!c.graph_path.empty()) j["graph"] = c.graph_path;
  if (!c.axis_path.empty()) j["axis"] = c.axis_path;
  if (!c.out.empty()) j["out"] = c.out;
  j["format"] = c.format;
  return j;
}

void require_genus(const RunConfig& c) {
  if (c.genus < 0) throw DomainError("--genus is required");
  if (c.markings < 0) throw DomainError("--markings must be nonnegative");
  if (2 * c.genus - 2 + c.markings <= 0) {
    throw DomainError("need 2g-2+n > 0, got g=" + std::to_string(c.genus) + " n=" + std::to_string(c.markings));
  }
}

ExtremalAssignment load_assignment(const std::string& source) {
  if (source == "F") return ExtremalAssignment::builtin_F();
  return ExtremalAssignment::from_json(read_json_file(source));
}

std::string dot_of_graphs(const std::vector<Graph>& graphs, const std::string& prefix) {
  std::string out;
  for (std::size_t i = 0; i < graphs.size(); ++i) out += graph_to_dot(graphs[i], prefix + std::to_string(i));
  return out;
}

json vertex_set_json(const VertexSet& s) { return json(s); }

struct Outcome {
  json payload;
  std::string dot;        // artifact in DOT form, if supported
  bool dot_ok = false;
  json artifact;          // artifact in JSON form written to --out
  bool has_artifact = false;
  int exit_code = 0;
};

Outcome do_enumerate(const RunConfig& c) {
  require_genus(c);
  const GraphCatalog cat = load_or_enumerate(c.genus, c.markings, c.bound, c.jobs, c.use_cache);
  Outcome o;
  o.payload = {{"g", cat.g}, {"n", cat.n}, {"count", cat.size()}};
  o.artifact = catalog_to_json(cat, c.bound);
  o.has_artifact = true;
  o.dot = dot_of_graphs(cat.graphs, "G");
  o.dot_ok = true;
  return o;
}

Outcome do_verify(const RunConfig& c) {
  require_genus(c);
  const ExtremalAssignment A = load_assignment(c.assignment);
  const GraphCatalog cat = load_or_enumerate(c.genus, c.markings, c.bound, c.jobs, c.use_cache);
  const VerificationReport r = verify_extremal(A, cat, c.jobs);
  Outcome o;
  json a1 = json::array(), a2 = json::array();
  for (const auto& v : r.axiom1) {
    a1.push_back({{"graph", to_hex(cat.keys[v.graph])}, {"reason", v.reason}, {"declared", vertex_set_json(v.declared)}});
  }
  for (const auto& v : r.axiom2) {
    a2.push_back({{"source", to_hex(cat.keys[v.source])},
                  {"target", to_hex(cat.keys[v.target])},
                  {"edges", v.edges},
                  {"vertex", v.vertex},
                  {"vertex_in_Z", v.in_source},
                  {"M", vertex_set_json(v.M)}});
  }
  o.payload = {{"assignment", r.assignment},
               {"graphs", r.graphs},
               {"degenerations", r.degenerations},
               {"verified", r.ok()},
               {"axiom1_violations", a1},
               {"axiom2_violations", a2}};
  o.exit_code = r.ok() ? 0 : 2;
  return o;
}

json classification_json(const AxisClassification& cls) {
  json points = json::array();
  for (const auto& p : cls.points) {
    points.push_back({{"point", p.point}, {"type", {p.g_sing, p.m}}, {"class", p.cls}, {"profile", p.profile}});
  }
  return {{"points", points},
          {"is_axis_like", cls.is_axis_like},
          {"is_separating_axis_like", cls.is_separating_axis_like},
          {"is_quasi_separating_axis_like", cls.is_quasi_separating_axis_like}};
}

Outcome do_contract(const RunConfig& c) {
  if (c.graph_path.empty()) throw DomainError("--graph is required");
  const Graph g = graph_from_json(read_json_file(c.graph_path));
  g.validate_dual_graph();
  if (!is_stable(g)) throw DomainError("input graph is not stable");
  const ExtremalAssignment A = load_assignment(c.assignment);
  const auto Z = A.evaluate(g);
  if (!Z) throw CoverageError("assignment " + A.name() + " is undefined on the input graph");
  const ZContraction zc = z_contract(g, *Z);
  Outcome o;
  o.artifact = axis_to_json(zc.axis);
  o.has_artifact = true;
  o.payload = {{"Z", vertex_set_json(*Z)},
               {"axis", o.artifact},
               {"genus", genus(zc.axis)},
               {"marked_singularity", zc.marked_singularity},
               {"classification", classification_json(classify_axis_points(zc.axis))}};
  o.dot = graph_to_dot(star_graph(zc.axis), "axis");
  o.dot_ok = true;
  return o;
}

AxisGraph read_axis(const RunConfig& c) {
  if (c.axis_path.empty()) throw DomainError("--axis is required");
  return axis_from_json(read_json_file(c.axis_path));
}

Outcome do_fiber(const RunConfig& c) {
  const AxisGraph a = read_axis(c);
  const FiberStrata fs = fiber_strata(a);
  Outcome o;
  json graphs = json::array();
  std::vector<Graph> plain;
  for (const auto& fg : fs.graphs) {
    json gj = graph_to_json(fg.graph);
    gj["choice"] = fg.choice;
    graphs.push_back(std::move(gj));
    plain.push_back(fg.graph);
  }
  o.payload = {{"points", fs.points},
               {"per_point", fs.per_point},
               {"count", fs.graphs.size()},
               {"moduli_positive", fs.moduli_positive},
               {"graphs", graphs}};
  o.artifact = {{"schema", kSchema}, {"kind", "fiber"}, {"graphs", graphs}};
  o.has_artifact = true;
  o.dot = dot_of_graphs(plain, "F");
  o.dot_ok = true;
  return o;
}

Outcome do_classes(const RunConfig& c) {
  require_genus(c);
  if (c.genus < 1) throw DomainError("torelli-classes needs genus >= 1");
  const GraphCatalog cat = load_or_enumerate(c.genus, c.markings, c.bound, c.jobs, c.use_cache);
  std::vector<TorelliKey> keys(cat.size());
  parallel_for(cat.size(), c.jobs, [&](std::size_t i) { keys[i] = torelli_key(cat.graphs[i]); });
  std::map<TorelliKey, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < cat.size(); ++i) classes[keys[i]].push_back(i);
  json table = json::array();
  std::vector<Graph> reps;
  for (const auto& [key, members] : classes) {
    json m = json::array();
    for (std::size_t i : members) m.push_back(to_hex(cat.keys[i]));
    table.push_back({{"key", to_hex(key)}, {"members", m}});
    reps.push_back(canonical_representative(pst(cat.graphs[members.front()]).graph));
  }
  Outcome o;
  o.payload = {{"graphs", cat.size()}, {"class_count", classes.size()}, {"classes", table}};
  o.artifact = {{"schema", kSchema}, {"kind", "torelli-classes"}, {"classes", table}};
  o.has_artifact = true;
  o.dot = dot_of_graphs(reps, "pst");
  o.dot_ok = true;
  return o;
}

Outcome do_fiber_check(const RunConfig& c) {
  const AxisGraph a = read_axis(c);
  const FiberVerdict v = fiber_constant(a, c.jobs);
  Outcome o;
  json witness = nullptr;
  if (v.witness) {
    witness = {{"kind", "differing_keys"}, {"fiber_graphs", {v.witness->first, v.witness->second}}};
  } else if (v.remnant) {
    witness = {{"kind", "moduli_remnant"},
               {"fiber_graph", v.remnant->fiber_graph},
               {"vertex", v.remnant->vertex},
               {"valence", v.remnant->valence}};
  }
  o.payload = {{"verdict", v.constant ? "constant" : "varies"},
               {"reason", v.reason},
               {"fiber_size", v.fiber_size},
               {"distinct_keys", v.distinct_keys},
               {"quasi_separating", v.criterion},
               {"witness", witness}};
  if (v.constant) o.payload["key"] = to_hex(v.key);
  o.exit_code = v.constant ? 0 : 2;
  return o;
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.format != "json" && config.format != "dot") {
      throw DomainError("--format must be json or dot");
    }
    if (config.jobs < 1) throw DomainError("--jobs must be at least 1");
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    if (config.command == "enumerate") {
      o = do_enumerate(config);
    } else if (config.command == "verify-assignment") {
      o = do_verify(config);
    } else if (config.command == "contract") {
      o = do_contract(config);
    } else if (config.command == "fiber") {
      o = do_fiber(config);
    } else if (config.command == "torelli-classes") {
      o = do_classes(config);
    } else if (config.command == "fiber-check") {
      o = do_fiber_check(config);
    } else {
      throw DomainError("unknown command " + config.command);
    }
    const bool dot = config.format == "dot";
    if (dot && !o.dot_ok) throw DomainError("--format dot is not available for " + config.command);

    json report;
    report["schema"] = kSchema;
    report["command"] = config.command;
    report["tool_version"] = kToolVersion;
    report["config"] = config_echo(config);
    if (config.timing) {
      report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    if (!config.out.empty()) {
      if (dot) {
        write_text_file(config.out, o.dot);
      } else {
        write_text_file(config.out, (o.has_artifact ? o.artifact : o.payload).dump(2) + "\n");
      }
      if (o.payload.contains("graphs") && o.payload["graphs"].is_array()) o.payload.erase("graphs");
      report["payload"] = o.payload;
      out << report.dump(2) << "\n";
    } else if (dot) {
      out << o.dot;
    } else {
      if (config.command == "enumerate") o.payload["graphs"] = o.artifact["graphs"];
      report["payload"] = o.payload;
      out << report.dump(2) << "\n";
    }
    return o.exit_code;
  } catch (const std::exception& e) {
    const char* kind = "error";
    if (dynamic_cast<const ParseError*>(&e)) kind = "parse error";
    else if (dynamic_cast<const StructuralError*>(&e)) kind = "structural error";
    else if (dynamic_cast<const DomainError*>(&e)) kind = "domain error";
    else if (dynamic_cast<const ResourceError*>(&e)) kind = "resource error";
    else if (dynamic_cast<const CoverageError*>(&e)) kind = "coverage error";
    else if (dynamic_cast<const IoError*>(&e)) kind = "io error";
    err << "torelli-graphs " << config.command << ": " << kind << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace torelli
