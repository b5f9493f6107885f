#include "torelli/assignment.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "torelli/canonical.hpp"
#include "torelli/error.hpp"
#include "torelli/io.hpp"

namespace torelli {

std::string to_string(BridgeClass c) {
  switch (c) {
    case BridgeClass::Separating: return "separating";
    case BridgeClass::QuasiSeparating: return "quasi-separating";
    case BridgeClass::General: return "general";
  }
  return "general";
}

BridgeClass classify_profile(const std::vector<int>& profile) {
  int big = 0, worst = 0;
  for (int k : profile) {
    if (k > 1) {
      ++big;
      worst = std::max(worst, k);
    }
  }
  if (big == 0) return BridgeClass::Separating;
  if (big == 1 && worst <= 3) return BridgeClass::QuasiSeparating;
  return BridgeClass::General;
}

namespace {

int root(std::vector<int>& p, int x) {
  while (p[x] != x) x = p[x] = p[p[x]];
  return x;
}

bool eligible(const Graph& g, VertexId v, const std::vector<std::vector<HalfEdgeId>>& inc) {
  if (g.vertex_genus(v) != 0) return false;
  for (HalfEdgeId h : inc[v]) {
    if (g.halfedge(h).edge < 0) return false;
  }
  return true;
}

// Fills m, attaching, profile and class for a vertex set already known to be
// a leg-free genus-0 tree.
Multibridge describe(const Graph& g, const VertexSet& vertices) {
  Multibridge b;
  b.vertices = vertices;
  std::vector<char> in(g.num_vertices(), 0);
  for (VertexId v : vertices) in[v] = 1;
  std::vector<int> parent(g.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, c] = g.endpoints(e);
    if (in[a] != in[c]) b.attaching.push_back(e);
    if (!in[a] && !in[c]) parent[root(parent, a)] = root(parent, c);
  }
  b.m = static_cast<int>(b.attaching.size());
  std::map<int, int> per_component;
  for (EdgeId e : b.attaching) {
    const auto [a, c] = g.endpoints(e);
    ++per_component[root(parent, in[a] ? c : a)];
  }
  for (const auto& [r, k] : per_component) {
    (void)r;
    b.profile.push_back(k);
  }
  std::sort(b.profile.rbegin(), b.profile.rend());
  b.cls = classify_profile(b.profile);
  return b;
}

bool is_tree_subset(const Graph& g, const VertexSet& vertices) {
  const auto internal = internal_edges(g, vertices);
  if (internal.size() + 1 != vertices.size()) return false;
  std::map<VertexId, int> local;
  for (VertexId v : vertices) local.emplace(v, static_cast<int>(local.size()));
  std::vector<int> parent(vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (EdgeId e : internal) {
    const auto [a, c] = g.endpoints(e);
    const int ra = root(parent, local[a]), rc = root(parent, local[c]);
    if (ra == rc) return false;
    parent[ra] = rc;
  }
  return true;
}

}  // namespace

std::optional<Multibridge> classify_multibridge(const Graph& g, const VertexSet& vertices) {
  if (vertices.empty()) return std::nullopt;
  const auto inc = g.incidence();
  for (VertexId v : vertices) {
    if (v < 0 || v >= g.num_vertices()) throw StructuralError("unknown vertex id " + std::to_string(v));
    if (!eligible(g, v, inc)) return std::nullopt;
  }
  if (!is_tree_subset(g, vertices)) return std::nullopt;
  Multibridge b = describe(g, vertices);
  if (b.m < 3) return std::nullopt;
  return b;
}

namespace {

std::vector<Multibridge> all_bridges(const Graph& g) {
  std::vector<Multibridge> bridges;
  const int n = g.num_vertices();
  if (n > 64) throw DomainError("graph too large for multibridge search");
  const auto inc = g.incidence();
  std::vector<char> ok(n, 0);
  std::vector<std::uint64_t> nbr(n, 0);
  for (VertexId v = 0; v < n; ++v) ok[v] = eligible(g, v, inc);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, c] = g.endpoints(e);
    if (a != c && ok[a] && ok[c]) {
      nbr[a] |= 1ULL << c;
      nbr[c] |= 1ULL << a;
    }
  }
  // Grow connected eligible sets; a set with a cycle never extends to a tree.
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> frontier, trees;
  for (VertexId v = 0; v < n; ++v) {
    if (ok[v] && seen.insert(1ULL << v).second) frontier.push_back(1ULL << v);
  }
  auto to_set = [&](std::uint64_t mask) {
    VertexSet s;
    for (int v = 0; v < n; ++v) {
      if ((mask >> v) & 1ULL) s.push_back(v);
    }
    return s;
  };
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t mask : frontier) {
      if (!is_tree_subset(g, to_set(mask))) continue;
      trees.push_back(mask);
      std::uint64_t ext = 0;
      for (int v = 0; v < n; ++v) {
        if ((mask >> v) & 1ULL) ext |= nbr[v];
      }
      ext &= ~mask;
      for (int v = 0; v < n; ++v) {
        if (!((ext >> v) & 1ULL)) continue;
        const std::uint64_t grown = mask | (1ULL << v);
        if (seen.insert(grown).second) next.push_back(grown);
      }
    }
    frontier = std::move(next);
  }
  for (std::uint64_t mask : trees) {
    Multibridge b = describe(g, to_set(mask));
    if (b.m < 3) continue;  // cannot happen in a stable graph
    b.maximal = true;
    for (std::uint64_t other : trees) {
      if (other != mask && (other & mask) == mask) {
        b.maximal = false;
        break;
      }
    }
    bridges.push_back(std::move(b));
  }
  std::sort(bridges.begin(), bridges.end(), [](const auto& x, const auto& y) {
    if (x.vertices.size() != y.vertices.size()) return x.vertices.size() < y.vertices.size();
    return x.vertices < y.vertices;
  });
  return bridges;
}

}  // namespace

BridgeReport rational_multibridges(const Graph& g) {
  BridgeReport report;
  report.host = canonical_form(g);
  report.bridges = all_bridges(g);
  return report;
}

VertexSet assignment_F(const Graph& g) {
  std::vector<VertexId> out;
  for (const Multibridge& b : all_bridges(g)) {
    if (b.cls == BridgeClass::Separating) out.insert(out.end(), b.vertices.begin(), b.vertices.end());
  }
  return make_vertex_set(std::move(out));
}

ExtremalAssignment ExtremalAssignment::intrinsic(std::string name, Rule rule) {
  ExtremalAssignment a;
  a.name_ = std::move(name);
  a.rule_ = std::move(rule);
  return a;
}

ExtremalAssignment ExtremalAssignment::builtin_F() {
  return intrinsic("F", [](const Graph& g) { return assignment_F(g); });
}

ExtremalAssignment ExtremalAssignment::table(std::string name,
                                             std::map<CanonicalKey, VertexSet> declared,
                                             bool default_empty) {
  ExtremalAssignment a;
  a.name_ = std::move(name);
  for (auto& [key, set] : declared) a.table_.emplace(key, make_vertex_set(set));
  a.default_empty_ = default_empty;
  return a;
}

ExtremalAssignment ExtremalAssignment::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("assignment table must be a JSON object");
  const std::string name = j.value("name", std::string("table"));
  const bool default_empty = j.value("default_empty", false);
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw ParseError("assignment table needs an \"entries\" array");
  }
  std::map<CanonicalKey, VertexSet> declared;
  for (const auto& entry : j.at("entries")) {
    if (!entry.is_object() || !entry.contains("vertices") || !entry.at("vertices").is_array()) {
      throw ParseError("each assignment entry needs a \"vertices\" array");
    }
    std::vector<VertexId> vs;
    for (const auto& v : entry.at("vertices")) {
      if (!v.is_number_integer()) throw ParseError("vertex ids must be integers");
      vs.push_back(v.get<int>());
    }
    CanonicalKey key;
    if (entry.contains("graph")) {
      const Graph g = graph_from_json(entry.at("graph"));
      const CanonicalLabeling lab = canonical_labeling(g);
      for (VertexId& v : vs) {
        if (v < 0 || v >= g.num_vertices()) throw ParseError("vertex id out of range in entry");
        v = lab.position[v];
      }
      key = lab.key;
    } else if (entry.contains("key") && entry.at("key").is_string()) {
      key = from_hex(entry.at("key").get<std::string>());
    } else {
      throw ParseError("each assignment entry needs \"key\" or \"graph\"");
    }
    if (!declared.emplace(key, make_vertex_set(vs)).second) {
      throw ParseError("duplicate assignment entry for one graph");
    }
  }
  return table(name, std::move(declared), default_empty);
}

std::optional<VertexSet> ExtremalAssignment::declared(const Graph& canonical_graph,
                                                      const CanonicalKey& key) const {
  if (rule_) return rule_(canonical_graph);
  const auto it = table_.find(key);
  if (it == table_.end()) {
    if (default_empty_) return VertexSet{};
    return std::nullopt;
  }
  for (VertexId v : it->second) {
    if (v < 0 || v >= canonical_graph.num_vertices()) {
      throw DomainError("assignment table names vertex " + std::to_string(v) +
                        " outside its graph");
    }
  }
  return it->second;
}

std::optional<VertexSet> ExtremalAssignment::evaluate(const Graph& canonical_graph,
                                                      const CanonicalKey& key) const {
  auto set = declared(canonical_graph, key);
  if (!set || rule_ || set->empty()) return set;
  std::vector<VertexId> closed;
  for (const auto& sigma : automorphisms(canonical_graph).vertex_permutations) {
    for (VertexId v : *set) closed.push_back(sigma[v]);
  }
  return make_vertex_set(std::move(closed));
}

std::optional<VertexSet> ExtremalAssignment::evaluate(const Graph& g) const {
  if (rule_) return rule_(g);
  const CanonicalLabeling lab = canonical_labeling(g);
  const Graph rep = canonical_relabel(g, lab.position);
  auto set = evaluate(rep, lab.key);
  if (!set) return set;
  std::vector<VertexId> inv(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) inv[lab.position[v]] = v;
  std::vector<VertexId> out;
  for (VertexId p : *set) out.push_back(inv[p]);
  return make_vertex_set(std::move(out));
}

VerificationReport verify_extremal(const ExtremalAssignment& A, const GraphCatalog& catalog, int jobs) {
  VerificationReport report;
  report.g = catalog.g;
  report.n = catalog.n;
  report.assignment = A.name();
  report.graphs = catalog.size();

  const std::size_t N = catalog.size();
  std::vector<VertexSet> Z(N);
  std::vector<std::uint64_t> zmask(N, 0);
  std::vector<std::optional<Axiom1Violation>> a1(N);
  parallel_for(N, jobs, [&](std::size_t i) {
    const Graph& g = catalog.graphs[i];
    if (g.num_vertices() > 64) throw DomainError("graph too large to verify");
    const auto declared = A.declared(g, catalog.keys[i]);
    if (!declared) {
      throw CoverageError("assignment " + A.name() + " is undefined on catalog entry " +
                          std::to_string(i) + " (key " + to_hex(catalog.keys[i]) + ")");
    }
    const auto closed = A.evaluate(g, catalog.keys[i]);
    Z[i] = *closed;
    for (VertexId v : Z[i]) zmask[i] |= 1ULL << v;
    bool invariant = true;
    if (!declared->empty()) {
      for (const auto& sigma : automorphisms(g).vertex_permutations) {
        for (VertexId v : *declared) {
          if (!std::binary_search(declared->begin(), declared->end(), sigma[v])) invariant = false;
        }
      }
    }
    if (!invariant) {
      a1[i] = Axiom1Violation{i, "not invariant", *declared};
    } else if (static_cast<int>(closed->size()) == g.num_vertices()) {
      a1[i] = Axiom1Violation{i, "not proper", *declared};
    }
  });
  for (auto& v : a1) {
    if (v) report.axiom1.push_back(std::move(*v));
  }

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, N));
  std::vector<std::vector<Axiom2Violation>> found(workers);
  std::vector<std::uint64_t> counted(workers, 0);
  parallel_for(workers, static_cast<int>(workers), [&](std::size_t t) {
    const std::size_t lo = N * t / workers, hi = N * (t + 1) / workers;
    for (std::size_t target = lo; target < hi; ++target) {
      for_each_degeneration(catalog, target, [&](const Degeneration& d) {
        ++counted[t];
        const std::uint64_t zs = zmask[d.source], zt = zmask[d.target];
        for (VertexId v = 0; v < static_cast<VertexId>(d.M.size()); ++v) {
          std::uint64_t m = 0;
          for (VertexId w : d.M[v]) m |= 1ULL << w;
          const bool lhs = (zs >> v) & 1ULL;
          const bool rhs = (m & ~zt) == 0;
          if (lhs != rhs) {
            found[t].push_back(Axiom2Violation{d.source, d.target, d.edges, v, lhs, d.M[v]});
          }
        }
      });
    }
  });
  for (std::size_t t = 0; t < workers; ++t) {
    report.degenerations += counted[t];
    for (auto& v : found[t]) report.axiom2.push_back(std::move(v));
  }
  return report;
}

bool is_Z_quasi_separating(const Graph& g, const VertexSet& Z) {
  if (Z.empty()) return true;
  const auto piece = induced_subgraph(g, Z);
  for (const Piece& comp : split_components(piece.graph)) {
    std::vector<VertexId> host;
    for (VertexId v : comp.vertex_origin) host.push_back(piece.vertex_origin[v]);
    const auto b = classify_multibridge(g, make_vertex_set(host));
    if (!b || b->cls == BridgeClass::General) return false;
  }
  return true;
}

bool is_Z_quasi_separating(const Graph& g, const ExtremalAssignment& A) {
  const auto Z = A.evaluate(g);
  if (!Z) throw CoverageError("assignment " + A.name() + " is undefined on this graph");
  return is_Z_quasi_separating(g, *Z);
}

}  // namespace torelli
