#include "torelli/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <thread>

#include "torelli/error.hpp"

namespace torelli {

long GraphCatalog::find(const CanonicalKey& key) const {
  const auto it = index.find(key);
  return it == index.end() ? -1 : static_cast<long>(it->second);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&, t] {
      const std::size_t lo = count * t / workers, hi = count * (t + 1) / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

using Level = std::unordered_map<CanonicalKey, Graph>;

// Splits vertex v into v (genus a, halfedges in `keep`) and a new vertex w
// (genus g_v - a, remaining halfedges) joined by a new edge.
Graph split_vertex(const Graph& g, VertexId v, int a, const std::vector<char>& keep) {
  Graph out;
  for (VertexId u = 0; u < g.num_vertices(); ++u) out.add_vertex(u == v ? a : g.vertex_genus(u));
  const VertexId w = out.add_vertex(g.vertex_genus(v) - a);
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    const HalfEdge& he = g.halfedge(h);
    const VertexId at = (he.vertex == v && !keep[h]) ? w : he.vertex;
    if (he.leg) {
      out.add_leg(at, he.leg);
    } else {
      out.add_halfedge(at);
    }
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) out.pair(g.edge(e)[0], g.edge(e)[1]);
  out.add_edge(v, w);
  return out;
}

void add_children(const Graph& parent, Level& found) {
  const auto inc = parent.incidence();
  std::vector<char> keep(parent.num_halfedges(), 0);
  for (VertexId v = 0; v < parent.num_vertices(); ++v) {
    const auto& hs = inc[v];
    const int d = static_cast<int>(hs.size());
    const int gv = parent.vertex_genus(v);
    // Swapping the two halves gives an isomorphic child, so the first
    // halfedge always stays on v.
    const unsigned long masks = d == 0 ? 1UL : (1UL << (d - 1));
    for (unsigned long m = 0; m < masks; ++m) {
      const unsigned long mask = d == 0 ? 0UL : ((m << 1) | 1UL);
      const int k1 = std::popcount(mask);
      const int k2 = d - k1;
      for (int i = 0; i < d; ++i) keep[hs[i]] = (mask >> i) & 1UL;
      for (int a = 0; a <= gv; ++a) {
        const int b = gv - a;
        if (d == 0 && a > b) break;
        if (2 * a - 2 + k1 + 1 <= 0 || 2 * b - 2 + k2 + 1 <= 0) continue;
        Graph child = split_vertex(parent, v, a, keep);
        CanonicalLabeling lab = canonical_labeling(child);
        if (found.count(lab.key)) continue;
        found.emplace(std::move(lab.key), canonical_relabel(child, lab.position));
      }
    }
    for (HalfEdgeId h : hs) keep[h] = 0;
  }
}

}  // namespace

GraphCatalog make_catalog(int g, int n, std::vector<Graph> graphs) {
  GraphCatalog cat;
  cat.g = g;
  cat.n = n;
  std::vector<std::pair<CanonicalKey, std::size_t>> order;
  order.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) order.emplace_back(canonical_form(graphs[i]), i);
  std::sort(order.begin(), order.end());
  cat.graphs.reserve(graphs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && order[i].first == order[i - 1].first) {
      throw StructuralError("catalog contains isomorphic entries");
    }
    cat.index.emplace(order[i].first, i);
    cat.keys.push_back(order[i].first);
    cat.graphs.push_back(canonical_representative(graphs[order[i].second]));
  }
  return cat;
}

GraphCatalog enumerate_stable_graphs(int g, int n, const EnumerationOptions& options) {
  if (g < 0 || n < 0) throw DomainError("genus and marking count must be nonnegative");
  if (2 * g - 2 + n <= 0) {
    throw DomainError("no stable graphs of type (" + std::to_string(g) + "," + std::to_string(n) +
                      "): need 2g-2+n > 0");
  }
  const int required = 3 * g - 3 + n;
  if (required > options.bound) {
    throw ResourceError("3g-3+n = " + std::to_string(required) + " exceeds the bound " +
                            std::to_string(options.bound) + "; rerun with --bound " +
                            std::to_string(required),
                        required);
  }

  // One-vertex seeds: genus h plus g - h loops, all legs.
  Level level;
  for (int h = 0; h <= g; ++h) {
    Graph seed;
    seed.add_vertex(h);
    for (int l = 0; l < g - h; ++l) seed.add_edge(0, 0);
    for (int i = 1; i <= n; ++i) seed.add_leg(0, i);
    if (!is_stable(seed)) continue;
    CanonicalLabeling lab = canonical_labeling(seed);
    level.emplace(std::move(lab.key), canonical_relabel(seed, lab.position));
  }

  std::vector<std::pair<CanonicalKey, Graph>> all;
  while (!level.empty()) {
    const std::size_t begin = all.size();
    for (auto& [key, graph] : level) all.emplace_back(key, std::move(graph));
    level.clear();

    const int workers = std::max(1, options.jobs);
    const std::size_t count = all.size() - begin;
    if (workers == 1 || count < 64) {
      for (std::size_t i = begin; i < all.size(); ++i) add_children(all[i].second, level);
    } else {
      std::vector<Level> partial(workers);
      parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t t) {
        const std::size_t lo = begin + count * t / workers, hi = begin + count * (t + 1) / workers;
        for (std::size_t i = lo; i < hi; ++i) add_children(all[i].second, partial[t]);
      });
      for (auto& part : partial) {
        for (auto& [key, graph] : part) level.try_emplace(key, std::move(graph));
      }
    }
  }

  std::sort(all.begin(), all.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  GraphCatalog cat;
  cat.g = g;
  cat.n = n;
  cat.graphs.reserve(all.size());
  cat.keys.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    cat.index.emplace(all[i].first, i);
    cat.keys.push_back(std::move(all[i].first));
    cat.graphs.push_back(std::move(all[i].second));
  }
  return cat;
}

Contraction contract_edges_with_map(const Graph& g, const std::vector<EdgeId>& S) {
  std::vector<char> in_s(g.num_edges(), 0);
  for (EdgeId e : S) {
    if (e < 0 || e >= g.num_edges()) throw StructuralError("unknown edge id " + std::to_string(e));
    in_s[e] = 1;
  }
  std::vector<char> keep_mask(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) keep_mask[e] = !in_s[e];
  // Components of (V, S): the complement of S is "removed".
  const auto label = component_labels(g, keep_mask);
  const int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<long> gen(count, 0), verts(count, 0), edges(count, 0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    gen[label[v]] += g.vertex_genus(v);
    ++verts[label[v]];
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (in_s[e]) ++edges[label[g.endpoints(e)[0]]];
  }
  Contraction out;
  for (int c = 0; c < count; ++c) {
    out.graph.add_vertex(static_cast<int>(gen[c] + edges[c] - verts[c] + 1));
  }
  out.vertex_image = label;
  std::vector<HalfEdgeId> local(g.num_halfedges(), -1);
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    const HalfEdge& he = g.halfedge(h);
    if (he.edge >= 0 && in_s[he.edge]) continue;
    const VertexId at = label[he.vertex];
    if (he.leg) {
      local[h] = out.graph.add_leg(at, he.leg);
    } else if (he.edge < 0) {
      local[h] = out.graph.add_branch_point(at, he.origin);
    } else {
      local[h] = out.graph.add_halfedge(at);
    }
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!in_s[e]) out.graph.pair(local[g.edge(e)[0]], local[g.edge(e)[1]]);
  }
  return out;
}

Graph contract_edges(const Graph& g, const std::vector<EdgeId>& S) {
  return contract_edges_with_map(g, S).graph;
}

void for_each_degeneration(const GraphCatalog& catalog, std::size_t target,
                           const std::function<void(const Degeneration&)>& f) {
  const Graph& host = catalog.graphs.at(target);
  const int E = host.num_edges();
  if (E >= 63) throw ResourceError("too many edges for subset enumeration", E);
  Degeneration d;
  d.target = target;
  for (unsigned long long mask = 0; mask < (1ULL << E); ++mask) {
    d.edges.clear();
    for (int e = 0; e < E; ++e) {
      if ((mask >> e) & 1ULL) d.edges.push_back(e);
    }
    const Contraction c = contract_edges_with_map(host, d.edges);
    const CanonicalLabeling lab = canonical_labeling(c.graph);
    const long src = catalog.find(lab.key);
    if (src < 0) {
      throw StructuralError("contraction of catalog entry " + std::to_string(target) +
                            " is not in the catalog");
    }
    d.source = static_cast<std::size_t>(src);
    const int nv = c.graph.num_vertices();
    d.M.assign(nv, {});
    // Catalog entries are stored in canonical order, so canonical position
    // is the catalog vertex id.
    for (VertexId v = 0; v < host.num_vertices(); ++v) {
      d.M[lab.position[c.vertex_image[v]]].push_back(v);
    }
    f(d);
  }
}

void for_each_degeneration(const GraphCatalog& catalog,
                           const std::function<void(const Degeneration&)>& f) {
  for (std::size_t t = 0; t < catalog.size(); ++t) for_each_degeneration(catalog, t, f);
}

std::vector<Degeneration> degenerations_between(const GraphCatalog& catalog) {
  std::vector<Degeneration> out;
  for_each_degeneration(catalog, [&](const Degeneration& d) { out.push_back(d); });
  return out;
}

}  // namespace torelli
