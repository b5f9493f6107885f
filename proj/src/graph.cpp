#include "torelli/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "torelli/error.hpp"

namespace torelli {

VertexId Graph::add_vertex(int genus, int tag) {
  genus_.push_back(genus);
  tag_.push_back(tag);
  return num_vertices() - 1;
}

HalfEdgeId Graph::add_halfedge(VertexId v) {
  if (v < 0 || v >= num_vertices()) {
    throw StructuralError("halfedge attached to unknown vertex " + std::to_string(v));
  }
  half_.push_back(HalfEdge{v, -1, 0, -1});
  return num_halfedges() - 1;
}

EdgeId Graph::pair(HalfEdgeId a, HalfEdgeId b) {
  if (a < 0 || b < 0 || a >= num_halfedges() || b >= num_halfedges() || a == b) {
    throw StructuralError("cannot pair halfedges " + std::to_string(a) + " and " +
                          std::to_string(b));
  }
  if (half_[a].edge >= 0 || half_[b].edge >= 0 || half_[a].leg || half_[b].leg) {
    throw StructuralError("halfedge already paired or labeled");
  }
  const EdgeId e = num_edges();
  edges_.push_back({a, b});
  half_[a].edge = e;
  half_[b].edge = e;
  half_[a].origin = -1;
  half_[b].origin = -1;
  return e;
}

EdgeId Graph::add_edge(VertexId u, VertexId v) {
  const HalfEdgeId a = add_halfedge(u);
  const HalfEdgeId b = add_halfedge(v);
  return pair(a, b);
}

HalfEdgeId Graph::add_leg(VertexId v, int label) {
  const HalfEdgeId h = add_halfedge(v);
  set_leg(h, label);
  return h;
}

HalfEdgeId Graph::add_branch_point(VertexId v, int origin) {
  const HalfEdgeId h = add_halfedge(v);
  half_[h].origin = origin;
  return h;
}

void Graph::set_leg(HalfEdgeId h, int label) {
  if (h < 0 || h >= num_halfedges()) throw StructuralError("unknown halfedge " + std::to_string(h));
  if (label <= 0) throw StructuralError("leg labels must be positive");
  if (half_[h].edge >= 0) throw StructuralError("paired halfedge cannot carry a leg");
  half_[h].leg = label;
  half_[h].origin = -1;
}

void Graph::set_genus(VertexId v, int genus) { genus_.at(v) = genus; }
void Graph::set_tag(VertexId v, int tag) { tag_.at(v) = tag; }

bool Graph::is_loop(EdgeId e) const {
  return half_[edges_[e][0]].vertex == half_[edges_[e][1]].vertex;
}

HalfEdgeId Graph::partner(HalfEdgeId h) const {
  const EdgeId e = half_[h].edge;
  if (e < 0) return -1;
  return edges_[e][0] == h ? edges_[e][1] : edges_[e][0];
}

int Graph::valence(VertexId v) const {
  int count = 0;
  for (const auto& h : half_) count += (h.vertex == v);
  return count;
}

std::vector<std::vector<HalfEdgeId>> Graph::incidence() const {
  std::vector<std::vector<HalfEdgeId>> inc(num_vertices());
  for (HalfEdgeId h = 0; h < num_halfedges(); ++h) inc[half_[h].vertex].push_back(h);
  return inc;
}

std::vector<std::pair<int, HalfEdgeId>> Graph::legs() const {
  std::vector<std::pair<int, HalfEdgeId>> out;
  for (HalfEdgeId h = 0; h < num_halfedges(); ++h) {
    if (is_leg(h)) out.emplace_back(half_[h].leg, h);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Graph::num_legs() const {
  int count = 0;
  for (HalfEdgeId h = 0; h < num_halfedges(); ++h) count += is_leg(h);
  return count;
}

int Graph::num_branch_points() const {
  int count = 0;
  for (HalfEdgeId h = 0; h < num_halfedges(); ++h) count += is_branch_point(h);
  return count;
}

void Graph::validate() const {
  if (tag_.size() != genus_.size()) throw StructuralError("tag/genus size mismatch");
  for (VertexId v = 0; v < num_vertices(); ++v) {
    if (genus_[v] < 0 || genus_[v] > kMaxGenus) {
      throw StructuralError("vertex " + std::to_string(v) + " has genus out of range");
    }
  }
  std::set<int> labels;
  for (HalfEdgeId h = 0; h < num_halfedges(); ++h) {
    const HalfEdge& he = half_[h];
    if (he.vertex < 0 || he.vertex >= num_vertices()) {
      throw StructuralError("dangling halfedge " + std::to_string(h));
    }
    if (he.edge >= 0) {
      if (he.edge >= num_edges()) throw StructuralError("halfedge refers to unknown edge");
      const auto& e = edges_[he.edge];
      if (e[0] != h && e[1] != h) throw StructuralError("broken edge involution at " + std::to_string(h));
      if (he.leg != 0) throw StructuralError("paired halfedge carries a leg label");
    } else if (he.leg != 0) {
      if (he.leg < 0) throw StructuralError("negative leg label");
      if (!labels.insert(he.leg).second) {
        throw StructuralError("leg label " + std::to_string(he.leg) + " used twice");
      }
    }
  }
  for (EdgeId e = 0; e < num_edges(); ++e) {
    for (HalfEdgeId h : edges_[e]) {
      if (h < 0 || h >= num_halfedges() || half_[h].edge != e) {
        throw StructuralError("broken edge involution on edge " + std::to_string(e));
      }
    }
    if (edges_[e][0] == edges_[e][1]) throw StructuralError("edge pairs a halfedge with itself");
  }
}

void Graph::validate_dual_graph() const {
  validate();
  if (num_vertices() == 0) throw StructuralError("graph has no vertices");
  const auto ls = legs();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i].first != static_cast<int>(i) + 1) {
      throw StructuralError("leg labels must be exactly 1..n");
    }
  }
  if (num_branch_points() != 0) throw StructuralError("unpaired halfedge without a leg label");
  if (!is_connected(*this)) throw StructuralError("graph is not connected");
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Tarjan low-link over a multigraph, skipping the tree edge by id so that
// parallel edges are never bridges.
struct BridgeSearch {
  const Graph& g;
  std::span<const char> removed;
  std::vector<std::vector<HalfEdgeId>> inc;
  std::vector<int> disc, low;
  std::vector<EdgeId> bridges;
  int timer = 0;

  BridgeSearch(const Graph& graph, std::span<const char> rem)
      : g(graph), removed(rem), inc(graph.incidence()),
        disc(graph.num_vertices(), -1), low(graph.num_vertices(), 0) {}

  bool skip(EdgeId e) const { return !removed.empty() && removed[e]; }

  void dfs(VertexId v, EdgeId via) {
    disc[v] = low[v] = timer++;
    for (HalfEdgeId h : inc[v]) {
      const EdgeId e = g.halfedge(h).edge;
      if (e < 0 || e == via || skip(e) || g.is_loop(e)) continue;
      const VertexId w = g.halfedge(g.partner(h)).vertex;
      if (disc[w] < 0) {
        dfs(w, e);
        low[v] = std::min(low[v], low[w]);
        if (low[w] > disc[v]) bridges.push_back(e);
      } else {
        low[v] = std::min(low[v], disc[w]);
      }
    }
  }
};

}  // namespace

std::vector<int> component_labels(const Graph& g, std::span<const char> edge_removed) {
  const int n = g.num_vertices();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!edge_removed.empty() && edge_removed[e]) continue;
    const auto [a, b] = g.endpoints(e);
    parent[find_root(parent, a)] = find_root(parent, b);
  }
  std::vector<int> label(n, -1), root_label(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    const int r = find_root(parent, v);
    if (root_label[r] < 0) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

std::vector<int> component_labels(const Graph& g) { return component_labels(g, {}); }

int num_components(const Graph& g) {
  const auto labels = component_labels(g);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool is_connected(const Graph& g) { return num_components(g) == 1; }

int genus(const Graph& g) {
  g.validate();
  long total = 0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) total += g.vertex_genus(v);
  return static_cast<int>(total + g.num_edges() - g.num_vertices() + 1);
}

int total_genus(const Graph& g) {
  g.validate();
  long total = 0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) total += g.vertex_genus(v);
  return static_cast<int>(total + g.num_edges() - g.num_vertices() + num_components(g));
}

bool is_stable(const Graph& g) {
  g.validate();
  if (g.num_vertices() == 0 || !is_connected(g)) return false;
  std::vector<int> val(g.num_vertices(), 0);
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) ++val[g.halfedge(h).vertex];
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (2 * g.vertex_genus(v) - 2 + val[v] <= 0) return false;
  }
  return true;
}

std::vector<EdgeId> separating_edges(const Graph& g, std::span<const char> edge_removed) {
  BridgeSearch search(g, edge_removed);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (search.disc[v] < 0) search.dfs(v, -1);
  }
  std::sort(search.bridges.begin(), search.bridges.end());
  return search.bridges;
}

std::vector<EdgeId> separating_edges(const Graph& g) { return separating_edges(g, {}); }

Graph cut_edges(const Graph& g, std::span<const EdgeId> cut) {
  std::vector<char> is_cut(g.num_edges(), 0);
  for (EdgeId e : cut) {
    if (e < 0 || e >= g.num_edges()) throw StructuralError("unknown edge id " + std::to_string(e));
    is_cut[e] = 1;
  }
  Graph out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) out.add_vertex(g.vertex_genus(v), g.vertex_tag(v));
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    const HalfEdge& he = g.halfedge(h);
    if (he.leg) {
      out.add_leg(he.vertex, he.leg);
    } else if (he.edge >= 0 && is_cut[he.edge]) {
      out.add_branch_point(he.vertex, he.edge);
    } else if (he.edge < 0) {
      out.add_branch_point(he.vertex, he.origin);
    } else {
      out.add_halfedge(he.vertex);
    }
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!is_cut[e]) out.pair(g.edge(e)[0], g.edge(e)[1]);
  }
  return out;
}

std::vector<Piece> split_components(const Graph& g) {
  const auto label = component_labels(g);
  const int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<Piece> pieces(count);
  std::vector<VertexId> local_vertex(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    Piece& p = pieces[label[v]];
    local_vertex[v] = p.graph.add_vertex(g.vertex_genus(v), g.vertex_tag(v));
    p.vertex_origin.push_back(v);
  }
  std::vector<HalfEdgeId> local_half(g.num_halfedges());
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    const HalfEdge& he = g.halfedge(h);
    Piece& p = pieces[label[he.vertex]];
    const VertexId lv = local_vertex[he.vertex];
    if (he.leg) {
      local_half[h] = p.graph.add_leg(lv, he.leg);
    } else if (he.edge < 0) {
      local_half[h] = p.graph.add_branch_point(lv, he.origin);
    } else {
      local_half[h] = p.graph.add_halfedge(lv);
    }
    p.halfedge_origin.push_back(h);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.edge(e);
    pieces[label[g.halfedge(a).vertex]].graph.pair(local_half[a], local_half[b]);
  }
  return pieces;
}

std::vector<Piece> normalize_at(const Graph& g, std::span<const EdgeId> cut) {
  return split_components(cut_edges(g, cut));
}

Graph forget_markings(const Graph& g) {
  Graph out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) out.add_vertex(g.vertex_genus(v), g.vertex_tag(v));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    out.add_edge(a, b);
  }
  return out;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph out = a;
  const int offset_v = a.num_vertices();
  const int offset_h = a.num_halfedges();
  for (VertexId v = 0; v < b.num_vertices(); ++v) out.add_vertex(b.vertex_genus(v), b.vertex_tag(v));
  for (HalfEdgeId h = 0; h < b.num_halfedges(); ++h) {
    const HalfEdge& he = b.halfedge(h);
    if (he.leg) {
      out.add_leg(he.vertex + offset_v, he.leg);
    } else if (he.edge < 0) {
      out.add_branch_point(he.vertex + offset_v, he.origin);
    } else {
      out.add_halfedge(he.vertex + offset_v);
    }
  }
  for (EdgeId e = 0; e < b.num_edges(); ++e) {
    out.pair(b.edge(e)[0] + offset_h, b.edge(e)[1] + offset_h);
  }
  return out;
}

VertexSet make_vertex_set(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

namespace {

std::vector<char> membership(const Graph& g, const VertexSet& vertices) {
  std::vector<char> in(g.num_vertices(), 0);
  for (VertexId v : vertices) {
    if (v < 0 || v >= g.num_vertices()) throw StructuralError("unknown vertex id " + std::to_string(v));
    in[v] = 1;
  }
  return in;
}

}  // namespace

std::vector<EdgeId> internal_edges(const Graph& g, const VertexSet& vertices) {
  const auto in = membership(g, vertices);
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    if (in[a] && in[b]) out.push_back(e);
  }
  return out;
}

std::vector<EdgeId> attaching_edges(const Graph& g, const VertexSet& vertices) {
  const auto in = membership(g, vertices);
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    if (in[a] != in[b]) out.push_back(e);
  }
  return out;
}

int subgraph_genus(const Graph& g, const VertexSet& vertices) {
  long total = 0;
  for (VertexId v : vertices) total += g.vertex_genus(v);
  const auto internal = internal_edges(g, vertices);
  return static_cast<int>(total + static_cast<long>(internal.size()) -
                          static_cast<long>(vertices.size()) + 1);
}

Piece induced_subgraph(const Graph& g, const VertexSet& vertices) {
  const auto in = membership(g, vertices);
  Piece p;
  std::vector<VertexId> local(g.num_vertices(), -1);
  for (VertexId v : vertices) {
    local[v] = p.graph.add_vertex(g.vertex_genus(v), g.vertex_tag(v));
    p.vertex_origin.push_back(v);
  }
  std::vector<HalfEdgeId> local_half(g.num_halfedges(), -1);
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    const HalfEdge& he = g.halfedge(h);
    if (!in[he.vertex]) continue;
    if (he.leg) {
      local_half[h] = p.graph.add_leg(local[he.vertex], he.leg);
    } else if (he.edge < 0) {
      local_half[h] = p.graph.add_branch_point(local[he.vertex], he.origin);
    } else if (!in[g.halfedge(g.partner(h)).vertex]) {
      local_half[h] = p.graph.add_branch_point(local[he.vertex], he.edge);
    } else {
      local_half[h] = p.graph.add_halfedge(local[he.vertex]);
    }
    p.halfedge_origin.push_back(h);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.edge(e);
    if (in[g.halfedge(a).vertex] && in[g.halfedge(b).vertex]) {
      p.graph.pair(local_half[a], local_half[b]);
    }
  }
  return p;
}

}  // namespace torelli
