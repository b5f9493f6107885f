#include "torelli/axis.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "torelli/assignment.hpp"
#include "torelli/enumerate.hpp"
#include "torelli/error.hpp"
#include "torelli/io.hpp"

namespace torelli {

void validate(const AxisGraph& a) {
  const int C = a.num_components();
  if (C == 0) throw StructuralError("axis graph has no components");
  std::vector<int> special(C, 0);
  for (int c = 0; c < C; ++c) {
    if (a.genus[c] < 0 || a.genus[c] > kMaxGenus) {
      throw StructuralError("component " + std::to_string(c) + " has genus out of range");
    }
  }
  std::set<int> labels;
  auto check_label = [&](int label) {
    if (label <= 0) throw StructuralError("leg labels must be positive");
    if (!labels.insert(label).second) {
      throw StructuralError("leg label " + std::to_string(label) + " used twice");
    }
  };
  for (auto [label, c] : a.legs) {
    check_label(label);
    if (c < 0 || c >= C) throw StructuralError("leg on unknown component " + std::to_string(c));
    ++special[c];
  }
  std::set<Slot> used;
  for (std::size_t p = 0; p < a.points.size(); ++p) {
    const SingularPoint& pt = a.points[p];
    if (pt.g_sing < 0 || pt.g_sing > kMaxGenus) throw StructuralError("singular point genus out of range");
    if (pt.m() < 1 || (pt.g_sing == 0 && pt.m() < 2)) {
      throw StructuralError("singular point " + std::to_string(p) + " of type (" +
                            std::to_string(pt.g_sing) + "," + std::to_string(pt.m()) +
                            ") has too few branches");
    }
    for (const Slot& s : pt.slots) {
      if (s.first < 0 || s.first >= C) {
        throw StructuralError("slot on unknown component " + std::to_string(s.first));
      }
      if (!used.insert(s).second) {
        throw StructuralError("slot [" + std::to_string(s.first) + "," + std::to_string(s.second) +
                              "] used twice");
      }
      ++special[s.first];
    }
    for (int label : pt.legs) check_label(label);
  }
  for (int c = 0; c < C; ++c) {
    if (2 * a.genus[c] - 2 + special[c] <= 0) {
      throw StructuralError("component " + std::to_string(c) + " is unstable");
    }
  }
  if (!is_connected(star_graph(a))) throw StructuralError("axis graph is not connected");
}

Graph star_graph(const AxisGraph& a) {
  Graph g;
  for (int c = 0; c < a.num_components(); ++c) g.add_vertex(a.genus[c], 0);
  for (const SingularPoint& pt : a.points) {
    const VertexId s = g.add_vertex(pt.g_sing, 1 + pt.g_sing);
    for (const Slot& slot : pt.slots) g.add_edge(slot.first, s);
  }
  for (auto [label, c] : a.legs) g.add_leg(c, label);
  for (std::size_t p = 0; p < a.points.size(); ++p) {
    for (int label : a.points[p].legs) g.add_leg(a.num_components() + static_cast<int>(p), label);
  }
  return g;
}

int genus(const AxisGraph& a) { return genus(star_graph(a)); }

CanonicalKey axis_canonical_form(const AxisGraph& a) { return "AX" + canonical_form(star_graph(a)); }

nlohmann::json axis_to_json(const AxisGraph& a) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = "axis";
  j["vertices"] = nlohmann::json::array();
  for (int c = 0; c < a.num_components(); ++c) j["vertices"].push_back({{"id", c}, {"genus", a.genus[c]}});
  j["legs"] = nlohmann::json::object();
  for (auto [label, c] : a.legs) j["legs"][std::to_string(label)] = c;
  j["singular_points"] = nlohmann::json::array();
  for (const SingularPoint& pt : a.points) {
    nlohmann::json pj;
    pj["type"] = {pt.g_sing, pt.m()};
    pj["slots"] = nlohmann::json::array();
    for (const Slot& s : pt.slots) pj["slots"].push_back({s.first, s.second});
    if (!pt.legs.empty()) pj["legs"] = pt.legs;
    j["singular_points"].push_back(std::move(pj));
  }
  return j;
}

namespace {

int get_int(const nlohmann::json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError("expected integer for " + what);
  return j.get<int>();
}

}  // namespace

AxisGraph axis_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("axis graph must be a JSON object");
  if (j.contains("kind") && j.at("kind") != "axis") throw ParseError("expected \"kind\":\"axis\"");
  if (!j.contains("vertices") || !j.at("vertices").is_array()) {
    throw ParseError("axis graph needs a \"vertices\" array");
  }
  AxisGraph a;
  std::map<int, int> index;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_object() || !v.contains("id") || !v.contains("genus")) {
      throw ParseError("each vertex needs \"id\" and \"genus\"");
    }
    const int id = get_int(v.at("id"), "vertex id");
    const int g = get_int(v.at("genus"), "vertex genus");
    if (g < 0 || g > kMaxGenus) throw ParseError("vertex genus out of range [0, 65536]");
    if (!index.emplace(id, a.num_components()).second) {
      throw ParseError("duplicate vertex id " + std::to_string(id));
    }
    a.genus.push_back(g);
  }
  auto component = [&](const nlohmann::json& x) {
    const int id = get_int(x, "component id");
    const auto it = index.find(id);
    if (it == index.end()) throw StructuralError("reference to unknown component " + std::to_string(id));
    return it->second;
  };
  if (j.contains("legs")) {
    if (!j.at("legs").is_object()) throw ParseError("\"legs\" must map labels to components");
    for (const auto& [label, c] : j.at("legs").items()) {
      int value = 0;
      try {
        std::size_t used = 0;
        value = std::stoi(label, &used);
        if (used != label.size()) throw std::invalid_argument(label);
      } catch (const std::logic_error&) {
        throw ParseError("leg label \"" + label + "\" is not an integer");
      }
      a.legs.emplace_back(value, component(c));
    }
    std::sort(a.legs.begin(), a.legs.end());
  }
  if (j.contains("singular_points")) {
    if (!j.at("singular_points").is_array()) throw ParseError("\"singular_points\" must be an array");
    for (const auto& pj : j.at("singular_points")) {
      if (!pj.is_object() || !pj.contains("slots") || !pj.at("slots").is_array()) {
        throw ParseError("each singular point needs a \"slots\" array");
      }
      SingularPoint pt;
      for (const auto& s : pj.at("slots")) {
        if (!s.is_array() || s.size() != 2) throw ParseError("each slot must be [component, slot]");
        pt.slots.emplace_back(component(s[0]), get_int(s[1], "slot number"));
      }
      if (pj.contains("type")) {
        const auto& t = pj.at("type");
        if (!t.is_array() || t.size() != 2) throw ParseError("\"type\" must be [g, m]");
        pt.g_sing = get_int(t[0], "singularity genus");
        if (get_int(t[1], "singularity multiplicity") != pt.m()) {
          throw StructuralError("singular point type multiplicity does not match its slot count");
        }
      }
      if (pj.contains("legs")) {
        for (const auto& l : pj.at("legs")) pt.legs.push_back(get_int(l, "leg label"));
      }
      a.points.push_back(std::move(pt));
    }
  }
  validate(a);
  return a;
}

ZContraction z_contract(const Graph& g, const VertexSet& Z) {
  g.validate();
  const int V = g.num_vertices();
  std::vector<int> in(V, 0);
  for (VertexId v : Z) {
    if (v < 0 || v >= V) throw StructuralError("unknown vertex id " + std::to_string(v));
    in[v] = 1;
  }
  const int zcount = static_cast<int>(std::count(in.begin(), in.end(), 1));
  if (zcount >= V) throw DomainError("Z must be a proper subset of the vertices");

  // Components of the subgraph on Z.
  std::vector<char> removed(g.num_edges(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    removed[e] = !(in[a] && in[b]);
  }
  const auto label = component_labels(g, removed);
  std::map<int, int> zpoint;  // component label -> Z_j index
  std::vector<VertexSet> zsets;
  for (VertexId v = 0; v < V; ++v) {
    if (!in[v]) continue;
    auto [it, fresh] = zpoint.emplace(label[v], static_cast<int>(zsets.size()));
    if (fresh) zsets.emplace_back();
    zsets[it->second].push_back(v);
  }

  ZContraction out;
  std::vector<int> comp(V, -1);
  for (VertexId v = 0; v < V; ++v) {
    if (in[v]) continue;
    comp[v] = out.axis.num_components();
    out.axis.genus.push_back(g.vertex_genus(v));
    out.component_origin.push_back(v);
  }
  // Nodes first, in edge order.
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    if (in[a] || in[b]) continue;
    SingularPoint pt;
    pt.slots = {{comp[a], g.edge(e)[0]}, {comp[b], g.edge(e)[1]}};
    out.axis.points.push_back(std::move(pt));
    out.point_origin.push_back({});
  }
  const auto inc = g.incidence();
  for (const VertexSet& zj : zsets) {
    SingularPoint pt;
    pt.g_sing = subgraph_genus(g, zj);
    for (EdgeId e : attaching_edges(g, zj)) {
      for (HalfEdgeId h : g.edge(e)) {
        const VertexId v = g.halfedge(h).vertex;
        if (!in[v]) pt.slots.emplace_back(comp[v], h);
      }
    }
    for (VertexId v : zj) {
      for (HalfEdgeId h : inc[v]) {
        if (g.is_leg(h)) pt.legs.push_back(g.halfedge(h).leg);
        if (g.is_branch_point(h)) throw DomainError("z_contract needs a graph without branch points");
      }
      if (2 * g.vertex_genus(v) - 2 + static_cast<int>(inc[v].size()) <= 0) {
        throw DomainError("vertex " + std::to_string(v) + " of Z is unstable");
      }
    }
    std::sort(pt.legs.begin(), pt.legs.end());
    const int special = pt.m() + static_cast<int>(pt.legs.size());
    if (2 * pt.g_sing - 2 + special <= 0) {
      throw DomainError("component of Z has type (" + std::to_string(pt.g_sing) + "," +
                        std::to_string(special) + "), which is not stable");
    }
    if (!pt.legs.empty()) out.marked_singularity = true;
    out.axis.points.push_back(std::move(pt));
    out.point_origin.push_back(zj);
  }
  for (auto [lab, h] : g.legs()) {
    const VertexId v = g.halfedge(h).vertex;
    if (!in[v]) out.axis.legs.emplace_back(lab, comp[v]);
  }
  return out;
}

AxisClassification classify_axis_points(const AxisGraph& a) {
  const Graph star = star_graph(a);
  const int C = a.num_components();
  AxisClassification out;
  out.is_axis_like = true;
  bool separating = true, quasi = true;
  // Star edges are added point by point, slot by slot.
  EdgeId first = 0;
  for (std::size_t p = 0; p < a.points.size(); ++p) {
    const SingularPoint& pt = a.points[p];
    if (pt.g_sing != 0) out.is_axis_like = false;
    std::vector<char> removed(star.num_edges(), 0);
    for (int i = 0; i < pt.m(); ++i) removed[first + i] = 1;
    const auto label = component_labels(star, removed);
    std::map<int, int> branches;
    for (const Slot& s : pt.slots) ++branches[label[s.first]];
    AxisPointClass cls;
    cls.point = static_cast<int>(p);
    cls.m = pt.m();
    cls.g_sing = pt.g_sing;
    for (const auto& [c, k] : branches) {
      (void)c;
      cls.profile.push_back(k);
    }
    std::sort(cls.profile.rbegin(), cls.profile.rend());
    if (pt.is_node()) {
      cls.cls = "node";
    } else {
      cls.cls = to_string(classify_profile(cls.profile));
    }
    if (pt.is_axis_point()) {
      if (cls.cls != "separating") separating = false;
      if (cls.cls == "general") quasi = false;
    }
    out.points.push_back(std::move(cls));
    first += pt.m();
  }
  (void)C;
  out.is_separating_axis_like = out.is_axis_like && separating;
  out.is_quasi_separating_axis_like = out.is_axis_like && quasi;
  return out;
}

std::vector<Graph> stable_trees(int m) {
  if (m < 3) throw DomainError("stable genus-0 trees need at least 3 leaves");
  static std::mutex mutex;
  static std::map<int, std::vector<Graph>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) {
    EnumerationOptions opt;
    opt.bound = std::max(opt.bound, m - 3);
    it = cache.emplace(m, enumerate_stable_graphs(0, m, opt).graphs).first;
  }
  return it->second;
}

FiberStrata fiber_strata(const AxisGraph& a) {
  validate(a);
  FiberStrata out;
  const auto classes = classify_axis_points(a);
  if (!classes.is_axis_like) throw DomainError("fiber strata need an axis-like graph (all points of type (0,m))");
  out.moduli_positive = !classes.is_quasi_separating_axis_like;

  Graph base;
  std::vector<VertexId> comp_vertex;
  for (int c = 0; c < a.num_components(); ++c) comp_vertex.push_back(base.add_vertex(a.genus[c]));
  for (auto [label, c] : a.legs) base.add_leg(comp_vertex[c], label);
  std::vector<std::vector<Graph>> trees;
  for (std::size_t p = 0; p < a.points.size(); ++p) {
    const SingularPoint& pt = a.points[p];
    if (pt.is_node()) {
      base.add_edge(comp_vertex[pt.slots[0].first], comp_vertex[pt.slots[1].first]);
      continue;
    }
    out.points.push_back(static_cast<int>(p));
    trees.push_back(stable_trees(pt.m() + static_cast<int>(pt.legs.size())));
    out.per_point.push_back(trees.back().size());
  }

  std::vector<std::size_t> choice(out.points.size(), 0);
  while (true) {
    FiberGraph fg;
    fg.graph = base;
    fg.choice = choice;
    fg.component_vertex = comp_vertex;
    for (std::size_t k = 0; k < out.points.size(); ++k) {
      const SingularPoint& pt = a.points[out.points[k]];
      const Graph& t = trees[k][choice[k]];
      const VertexId offset = fg.graph.num_vertices();
      VertexSet ids;
      for (VertexId v = 0; v < t.num_vertices(); ++v) ids.push_back(fg.graph.add_vertex(0));
      for (EdgeId e = 0; e < t.num_edges(); ++e) {
        const auto [x, y] = t.endpoints(e);
        fg.graph.add_edge(x + offset, y + offset);
      }
      for (auto [leaf, h] : t.legs()) {
        const VertexId at = t.halfedge(h).vertex + offset;
        if (leaf <= pt.m()) {
          fg.graph.add_edge(at, comp_vertex[pt.slots[leaf - 1].first]);
        } else {
          fg.graph.add_leg(at, pt.legs[leaf - pt.m() - 1]);
        }
      }
      fg.inserted.push_back(std::move(ids));
    }
    out.graphs.push_back(std::move(fg));
    int k = static_cast<int>(choice.size()) - 1;
    while (k >= 0 && ++choice[k] == out.per_point[k]) choice[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

}  // namespace torelli
