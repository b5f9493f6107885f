#include "torelli/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "torelli/error.hpp"

namespace torelli {

using nlohmann::json;

json graph_to_json(const Graph& g) {
  json j;
  j["vertices"] = json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    json vj{{"id", v}, {"genus", g.vertex_genus(v)}};
    if (g.vertex_tag(v) != 0) vj["tag"] = g.vertex_tag(v);
    j["vertices"].push_back(std::move(vj));
  }
  j["halfedges"] = json::array();
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    j["halfedges"].push_back({{"id", h}, {"vertex", g.halfedge(h).vertex}});
  }
  j["edges"] = json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    j["edges"].push_back({g.edge(e)[0], g.edge(e)[1]});
  }
  j["legs"] = json::object();
  for (auto [label, h] : g.legs()) j["legs"][std::to_string(label)] = h;
  if (g.num_branch_points() > 0) {
    j["branch_points"] = json::array();
    for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
      if (g.is_branch_point(h)) {
        j["branch_points"].push_back({{"halfedge", h}, {"origin", g.halfedge(h).origin}});
      }
    }
  }
  return j;
}

namespace {

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string("expected integer for ") + what);
  return j.get<int>();
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ParseError(std::string("missing field \"") + name + "\"");
  }
  return j.at(name);
}

}  // namespace

Graph graph_from_json(const json& j, bool allow_branch_points) {
  if (!j.is_object()) throw ParseError("graph must be a JSON object");
  Graph g;
  std::map<int, VertexId> vertex_index;
  const json& vertices = field(j, "vertices");
  if (!vertices.is_array()) throw ParseError("\"vertices\" must be an array");
  for (const json& v : vertices) {
    const int id = as_int(field(v, "id"), "vertex id");
    const int genus = as_int(field(v, "genus"), "vertex genus");
    if (genus < 0 || genus > kMaxGenus) {
      throw ParseError("vertex " + std::to_string(id) + " genus out of range [0, 65536]");
    }
    const int tag = v.contains("tag") ? as_int(v.at("tag"), "vertex tag") : 0;
    if (!vertex_index.emplace(id, g.num_vertices()).second) {
      throw ParseError("duplicate vertex id " + std::to_string(id));
    }
    g.add_vertex(genus, tag);
  }
  std::map<int, HalfEdgeId> half_index;
  const json& halfedges = field(j, "halfedges");
  if (!halfedges.is_array()) throw ParseError("\"halfedges\" must be an array");
  for (const json& h : halfedges) {
    const int id = as_int(field(h, "id"), "halfedge id");
    const int vertex = as_int(field(h, "vertex"), "halfedge vertex");
    const auto it = vertex_index.find(vertex);
    if (it == vertex_index.end()) {
      throw StructuralError("dangling halfedge " + std::to_string(id) + " at unknown vertex " +
                            std::to_string(vertex));
    }
    if (!half_index.emplace(id, g.num_halfedges()).second) {
      throw ParseError("duplicate halfedge id " + std::to_string(id));
    }
    g.add_halfedge(it->second);
  }
  auto lookup = [&](const json& x) {
    const int id = as_int(x, "halfedge reference");
    const auto it = half_index.find(id);
    if (it == half_index.end()) throw StructuralError("unknown halfedge id " + std::to_string(id));
    return it->second;
  };
  if (j.contains("edges")) {
    for (const json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("each edge must be a pair of halfedge ids");
      g.pair(lookup(e[0]), lookup(e[1]));
    }
  }
  if (j.contains("legs")) {
    const json& legs = j.at("legs");
    if (!legs.is_object()) throw ParseError("\"legs\" must be an object from label to halfedge");
    for (const auto& [label, h] : legs.items()) {
      int value = 0;
      try {
        std::size_t used = 0;
        value = std::stoi(label, &used);
        if (used != label.size()) throw ParseError("bad leg label");
      } catch (const std::logic_error&) {
        throw ParseError("leg label \"" + label + "\" is not an integer");
      }
      g.set_leg(lookup(h), value);
    }
  }
  if (j.contains("branch_points")) {
    if (!allow_branch_points) throw ParseError("branch points are not allowed here");
    // Origins are informational; a branch point is any unpaired unlabeled halfedge.
  }
  g.validate();
  if (!allow_branch_points && g.num_branch_points() > 0) {
    throw StructuralError("unpaired halfedge without a leg label");
  }
  return g;
}

std::string graph_to_dot(const Graph& g, const std::string& name) {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out << "  v" << v << " [label=\"v" << v << ":g" << g.vertex_genus(v) << "\"];\n";
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    out << "  v" << a << " -- v" << b << ";\n";
  }
  for (auto [label, h] : g.legs()) {
    out << "  leg" << label << " [shape=point];\n";
    out << "  v" << g.halfedge(h).vertex << " -- leg" << label << " [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace torelli
