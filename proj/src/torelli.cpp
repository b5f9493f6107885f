#include "torelli/torelli.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "torelli/canonical.hpp"
#include "torelli/enumerate.hpp"
#include "torelli/error.hpp"

namespace torelli {

PolystableGraph stabilize(const Graph& g, std::uint64_t seed) {
  g.validate();
  if (g.num_legs() > 0 || g.num_branch_points() > 0) {
    throw DomainError("stabilize expects a graph without legs or branch points");
  }
  const int V = g.num_vertices();
  std::vector<char> alive(V, 1);
  std::vector<std::array<int, 2>> edges;
  std::vector<char> edge_alive;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    edges.push_back({a, b});
    edge_alive.push_back(1);
  }
  std::mt19937_64 rng(seed);
  std::vector<int> val(V), loops(V);
  std::vector<VertexId> candidates;
  while (true) {
    std::fill(val.begin(), val.end(), 0);
    std::fill(loops.begin(), loops.end(), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!edge_alive[e]) continue;
      ++val[edges[e][0]];
      ++val[edges[e][1]];
      if (edges[e][0] == edges[e][1]) ++loops[edges[e][0]];
    }
    candidates.clear();
    for (VertexId v = 0; v < V; ++v) {
      if (!alive[v] || g.vertex_genus(v) != 0) continue;
      if (val[v] == 1 || (val[v] == 2 && loops[v] == 0)) candidates.push_back(v);
    }
    if (candidates.empty()) break;
    const VertexId v =
        seed == 0 ? candidates.front()
                  : candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    std::vector<int> other;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!edge_alive[e]) continue;
      if (edges[e][0] == v) {
        other.push_back(edges[e][1]);
        edge_alive[e] = 0;
      } else if (edges[e][1] == v) {
        other.push_back(edges[e][0]);
        edge_alive[e] = 0;
      }
    }
    alive[v] = 0;
    if (other.size() == 2) {
      edges.push_back({other[0], other[1]});
      edge_alive.push_back(1);
    }
  }
  PolystableGraph out;
  std::vector<VertexId> local(V, -1);
  for (VertexId v = 0; v < V; ++v) {
    if (!alive[v]) continue;
    local[v] = out.graph.add_vertex(g.vertex_genus(v), g.vertex_tag(v));
    out.vertex_origin.push_back(v);
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edge_alive[e]) out.graph.add_edge(local[edges[e][0]], local[edges[e][1]]);
  }
  return out;
}

PolystableGraph pst(const Graph& g) {
  const Graph bare = forget_markings(g);
  const auto sep = separating_edges(bare);
  const Graph cut = forget_markings(cut_edges(bare, sep));
  const PolystableGraph st = stabilize(cut);
  const auto label = component_labels(st.graph);
  const int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<long> gsum(count, 0), verts(count, 0), edges(count, 0);
  for (VertexId v = 0; v < st.graph.num_vertices(); ++v) {
    gsum[label[v]] += st.graph.vertex_genus(v);
    ++verts[label[v]];
  }
  for (EdgeId e = 0; e < st.graph.num_edges(); ++e) ++edges[label[st.graph.endpoints(e)[0]]];
  std::vector<VertexId> keep;
  for (VertexId v = 0; v < st.graph.num_vertices(); ++v) {
    const int c = label[v];
    if (gsum[c] + edges[c] - verts[c] + 1 > 0) keep.push_back(v);
  }
  const Piece piece = induced_subgraph(st.graph, keep);
  PolystableGraph out;
  out.graph = piece.graph;
  for (VertexId v : piece.vertex_origin) out.vertex_origin.push_back(st.vertex_origin[v]);
  return out;
}

C1Partition c1_sets(const Graph& g) {
  const auto sep = separating_edges(g);
  if (!sep.empty()) {
    throw DomainError("C1-sets need a graph without separating edges; edge " +
                      std::to_string(sep.front()) + " is separating");
  }
  const int E = g.num_edges();
  std::vector<std::vector<EdgeId>> S(E);
  std::vector<char> removed(E, 0);
  for (EdgeId p = 0; p < E; ++p) {
    removed[p] = 1;
    S[p] = separating_edges(g, removed);
    removed[p] = 0;
    S[p].push_back(p);
    std::sort(S[p].begin(), S[p].end());
  }
  C1Partition out;
  out.block_of.assign(E, -1);
  for (EdgeId p = 0; p < E; ++p) {
    for (EdgeId q : S[p]) {
      if (S[q] != S[p]) {
        throw std::logic_error("C1 partition is not well defined at edges " + std::to_string(p) +
                               " and " + std::to_string(q));
      }
    }
    if (out.block_of[p] >= 0) continue;
    const int id = static_cast<int>(out.blocks.size());
    for (EdgeId q : S[p]) out.block_of[q] = id;
    out.blocks.push_back(S[p]);
  }
  return out;
}

std::vector<bool> moduli_flags(const Graph& g) {
  const auto label = component_labels(g);
  const int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<bool> flag(count, false);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (3 * g.vertex_genus(v) - 3 + g.valence(v) > 0) flag[label[v]] = true;
  }
  return flag;
}

namespace {

struct Incidence {
  const Graph& g;
  C1Partition c1;
  // count[v][B]: halfedges at v whose edge lies in B.
  std::vector<std::vector<int>> count;
  std::vector<std::vector<std::pair<int, int>>> signature;
  std::vector<int> component;
  std::vector<bool> flag;

  explicit Incidence(const Graph& graph) : g(graph), c1(c1_sets(graph)) {
    const int V = g.num_vertices(), B = static_cast<int>(c1.blocks.size());
    count.assign(V, std::vector<int>(B, 0));
    for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
      const EdgeId e = g.halfedge(h).edge;
      if (e < 0) throw DomainError("polystable graphs carry no legs or branch points");
      ++count[g.halfedge(h).vertex][c1.block_of[e]];
    }
    signature.resize(V);
    for (int v = 0; v < V; ++v) {
      for (int b = 0; b < B; ++b) {
        if (count[v][b]) signature[v].emplace_back(static_cast<int>(c1.blocks[b].size()), count[v][b]);
      }
      std::sort(signature[v].begin(), signature[v].end());
    }
    component = component_labels(g);
    flag = moduli_flags(g);
  }
};

struct EquivalenceSearch {
  const Incidence& A;
  const Incidence& B;
  std::vector<VertexId> phi;
  std::vector<char> used;
  std::vector<int> beta;

  bool blocks_match() {
    const int nb = static_cast<int>(A.c1.blocks.size());
    const int V = A.g.num_vertices();
    auto column = [&](const Incidence& I, int b, bool transport) {
      std::vector<int> col(V, 0);
      for (int v = 0; v < V; ++v) col[transport ? phi[v] : v] = I.count[v][b];
      return col;
    };
    std::vector<std::pair<std::vector<int>, int>> ca, cb;
    for (int b = 0; b < nb; ++b) {
      ca.emplace_back(column(A, b, true), b);
      cb.emplace_back(column(B, b, false), b);
    }
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    beta.assign(nb, -1);
    for (int i = 0; i < nb; ++i) {
      if (ca[i].first != cb[i].first) return false;
      beta[ca[i].second] = cb[i].second;
    }
    return true;
  }

  bool flags_match() const {
    for (VertexId v = 0; v < A.g.num_vertices(); ++v) {
      if (A.flag[A.component[v]] != B.flag[B.component[phi[v]]]) return false;
    }
    return true;
  }

  bool extend(VertexId v) {
    const int V = A.g.num_vertices();
    if (v == V) return blocks_match() && flags_match();
    for (VertexId w = 0; w < V; ++w) {
      if (used[w] || A.g.vertex_genus(v) != B.g.vertex_genus(w)) continue;
      if (A.signature[v] != B.signature[w]) continue;
      used[w] = 1;
      phi[v] = w;
      if (extend(v + 1)) return true;
      used[w] = 0;
    }
    return false;
  }
};

}  // namespace

C1Equivalence c1_equivalent(const Graph& a, const Graph& b) {
  C1Equivalence out;
  if (a.num_vertices() != b.num_vertices() || a.num_halfedges() != b.num_halfedges()) return out;
  const Incidence A(a), B(b);
  if (A.c1.blocks.size() != B.c1.blocks.size()) return out;
  EquivalenceSearch s{A, B, std::vector<VertexId>(a.num_vertices(), -1),
                      std::vector<char>(a.num_vertices(), 0), {}};
  if (!s.extend(0)) return out;
  out.equivalent = true;
  out.vertex_map = s.phi;
  out.block_map = s.beta;
  out.halfedge_map.assign(a.num_halfedges(), -1);
  // Halfedges at v in block B go to those at phi(v) in beta(B), in id order.
  std::map<std::pair<int, int>, std::vector<HalfEdgeId>> at_b;
  for (HalfEdgeId h = 0; h < b.num_halfedges(); ++h) {
    at_b[{b.halfedge(h).vertex, B.c1.block_of[b.halfedge(h).edge]}].push_back(h);
  }
  std::map<std::pair<int, int>, std::size_t> next;
  for (HalfEdgeId h = 0; h < a.num_halfedges(); ++h) {
    const std::pair<int, int> target{s.phi[a.halfedge(h).vertex], s.beta[A.c1.block_of[a.halfedge(h).edge]]};
    out.halfedge_map[h] = at_b[target][next[target]++];
  }
  return out;
}

TorelliKey torelli_key_of_polystable(const Graph& p) {
  const C1Partition c1 = c1_sets(p);
  const auto label = component_labels(p);
  const auto flag = moduli_flags(p);
  Graph inc;
  for (VertexId v = 0; v < p.num_vertices(); ++v) {
    inc.add_vertex(p.vertex_genus(v), 2 + (flag[label[v]] ? 1 : 0));
  }
  const int offset = p.num_vertices();
  for (std::size_t b = 0; b < c1.blocks.size(); ++b) inc.add_vertex(0, 1);
  for (HalfEdgeId h = 0; h < p.num_halfedges(); ++h) {
    const EdgeId e = p.halfedge(h).edge;
    if (e < 0) throw DomainError("polystable graphs carry no legs or branch points");
    inc.add_edge(p.halfedge(h).vertex, offset + c1.block_of[e]);
  }
  return "TK1" + canonical_form(inc);
}

TorelliKey torelli_key(const Graph& g) {
  g.validate();
  if (total_genus(g) < 1) throw DomainError("torelli_key needs genus >= 1");
  return torelli_key_of_polystable(pst(g).graph);
}

FiberVerdict fiber_constant(const AxisGraph& a, int jobs) {
  validate(a);
  const auto classes = classify_axis_points(a);
  if (!classes.is_axis_like) {
    throw DomainError("fiber-check needs an axis-like graph: every singular point of type (0,m)");
  }
  if (genus(a) < 1) throw DomainError("fiber-check needs genus >= 1");
  for (const SingularPoint& pt : a.points) {
    if (!pt.legs.empty()) throw DomainError("singular points of an axis-like curve avoid markings");
  }
  const FiberStrata strata = fiber_strata(a);
  const std::size_t N = strata.graphs.size();
  std::vector<TorelliKey> keys(N);
  std::vector<std::optional<Remnant>> remnants(N);
  parallel_for(N, jobs, [&](std::size_t i) {
    const FiberGraph& fg = strata.graphs[i];
    const PolystableGraph p = pst(fg.graph);
    keys[i] = torelli_key_of_polystable(p.graph);
    std::vector<char> inserted(fg.graph.num_vertices(), 0);
    for (const VertexSet& s : fg.inserted) {
      for (VertexId v : s) inserted[v] = 1;
    }
    for (VertexId u = 0; u < p.graph.num_vertices(); ++u) {
      const VertexId origin = p.vertex_origin[u];
      const int val = p.graph.valence(u);
      if (inserted[origin] && 3 * p.graph.vertex_genus(u) - 3 + val > 0) {
        remnants[i] = Remnant{i, origin, val};
        break;
      }
    }
  });

  FiberVerdict out;
  out.fiber_size = N;
  out.criterion = classes.is_quasi_separating_axis_like;
  std::vector<TorelliKey> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  out.distinct_keys = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  for (std::size_t i = 1; i < N; ++i) {
    if (keys[i] != keys[0]) {
      out.witness = std::make_pair(std::size_t{0}, i);
      break;
    }
  }
  for (const auto& r : remnants) {
    if (r) {
      out.remnant = r;
      break;
    }
  }
  out.constant = !out.witness && !out.remnant;
  if (out.constant) {
    out.key = keys.front();
    out.reason = "all fiber graphs share one Torelli class and no inserted component keeps moduli";
  } else if (out.witness) {
    out.reason = "fiber graphs " + std::to_string(out.witness->first) + " and " +
                 std::to_string(out.witness->second) + " have different Torelli keys";
  } else {
    out.reason = "fiber graph " + std::to_string(out.remnant->fiber_graph) + " keeps vertex " +
                 std::to_string(out.remnant->vertex) + " of an inserted tree with valence " +
                 std::to_string(out.remnant->valence) + " after pst (positive moduli)";
  }
  return out;
}

}  // namespace torelli
