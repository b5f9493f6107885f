#include "torelli/canonical.hpp"

#include <algorithm>
#include <numeric>
#include <map>
#include <set>
#include <stdexcept>

#include "torelli/error.hpp"

namespace torelli {

namespace {

struct Compact {
  int n = 0;
  // Per-vertex invariant: tag, genus, loops, branch points, leg count, labels.
  std::vector<std::vector<std::uint32_t>> attr;
  // Off-diagonal edge multiplicities, row-major n x n.
  std::vector<std::uint32_t> mult;

  std::uint32_t m(int u, int v) const { return mult[u * n + v]; }
};

Compact compact(const Graph& g) {
  Compact c;
  c.n = g.num_vertices();
  c.mult.assign(static_cast<std::size_t>(c.n) * c.n, 0);
  std::vector<std::uint32_t> loops(c.n, 0), branches(c.n, 0);
  std::vector<std::vector<std::uint32_t>> labels(c.n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    if (a == b) {
      ++loops[a];
    } else {
      ++c.mult[a * c.n + b];
      ++c.mult[b * c.n + a];
    }
  }
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    const HalfEdge& he = g.halfedge(h);
    if (he.edge >= 0) continue;
    if (he.leg) {
      labels[he.vertex].push_back(static_cast<std::uint32_t>(he.leg));
    } else {
      ++branches[he.vertex];
    }
  }
  c.attr.resize(c.n);
  for (int v = 0; v < c.n; ++v) {
    std::sort(labels[v].begin(), labels[v].end());
    auto& a = c.attr[v];
    a.reserve(5 + labels[v].size());
    a.push_back(static_cast<std::uint32_t>(g.vertex_tag(v)));
    a.push_back(static_cast<std::uint32_t>(g.vertex_genus(v)));
    a.push_back(loops[v]);
    a.push_back(branches[v]);
    a.push_back(static_cast<std::uint32_t>(labels[v].size()));
    a.insert(a.end(), labels[v].begin(), labels[v].end());
  }
  return c;
}

// Relabels colours by sorted signature; returns the number of cells.
int refine(const Compact& c, std::vector<int>& col, int cells) {
  const int n = c.n;
  std::vector<std::vector<std::uint32_t>> sig(n);
  std::vector<int> order(n);
  std::vector<int> next(n);
  while (true) {
    for (int v = 0; v < n; ++v) {
      auto& s = sig[v];
      s.clear();
      for (int u = 0; u < n; ++u) {
        const std::uint32_t k = c.m(v, u);
        if (k) s.push_back((static_cast<std::uint32_t>(col[u]) << 12) | k);
      }
      std::sort(s.begin(), s.end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (col[a] != col[b]) return col[a] < col[b];
      return sig[a] < sig[b];
    });
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (i > 0) {
        const int a = order[i - 1], b = order[i];
        if (col[a] != col[b] || sig[a] != sig[b]) ++count;
      }
      next[order[i]] = count;
    }
    ++count;
    if (n == 0) count = 0;
    col.swap(next);
    if (count == cells) return count;
    cells = count;
  }
}

struct Search {
  const Compact& c;
  bool collect_all;
  bool have_best = false;
  std::vector<std::uint32_t> best;
  std::vector<int> best_position;
  std::vector<std::vector<int>> ties;  // positions of leaves equal to best

  std::vector<std::uint32_t> encode(const std::vector<int>& position) const {
    const int n = c.n;
    std::vector<int> inv(n);
    for (int v = 0; v < n; ++v) inv[position[v]] = v;
    std::vector<std::uint32_t> tri;
    tri.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) tri.push_back(c.m(inv[p], inv[q]));
    }
    return tri;
  }

  void run(std::vector<int> col, int cells) {
    cells = refine(c, col, cells);
    if (cells == c.n) {
      auto tri = encode(col);
      if (!have_best || tri < best) {
        have_best = true;
        best = std::move(tri);
        best_position = col;
        ties.clear();
        ties.push_back(col);
      } else if (tri == best && collect_all) {
        ties.push_back(col);
      }
      return;
    }
    std::vector<int> size(cells, 0);
    for (int v = 0; v < c.n; ++v) ++size[col[v]];
    int target = -1;
    for (int k = 0; k < cells; ++k) {
      if (size[k] > 1 && (target < 0 || size[k] < size[target])) target = k;
    }
    for (int v = 0; v < c.n; ++v) {
      if (col[v] != target) continue;
      std::vector<int> child(c.n);
      for (int u = 0; u < c.n; ++u) {
        if (col[u] < target) {
          child[u] = col[u];
        } else if (col[u] == target) {
          child[u] = (u == v) ? target : target + 1;
        } else {
          child[u] = col[u] + 1;
        }
      }
      run(std::move(child), cells + 1);
    }
  }
};

std::vector<int> initial_colours(const Compact& c, int& cells) {
  std::vector<int> order(c.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return c.attr[a] < c.attr[b]; });
  std::vector<int> col(c.n, 0);
  int count = 0;
  for (int i = 0; i < c.n; ++i) {
    if (i > 0 && c.attr[order[i - 1]] != c.attr[order[i]]) ++count;
    col[order[i]] = count;
  }
  cells = c.n == 0 ? 0 : count + 1;
  return col;
}

void put16(std::string& out, std::uint32_t value) {
  if (value > 0xFFFF) throw DomainError("graph too large to canonicalize");
  out.push_back(static_cast<char>((value >> 8) & 0xFF));
  out.push_back(static_cast<char>(value & 0xFF));
}

CanonicalKey build_key(const Compact& c, const std::vector<int>& position,
                       const std::vector<std::uint32_t>& tri) {
  std::vector<int> inv(c.n);
  for (int v = 0; v < c.n; ++v) inv[position[v]] = v;
  CanonicalKey key;
  key.reserve(2 + 12 * c.n + 2 * tri.size());
  put16(key, static_cast<std::uint32_t>(c.n));
  for (int p = 0; p < c.n; ++p) {
    for (std::uint32_t x : c.attr[inv[p]]) put16(key, x);
  }
  for (std::uint32_t x : tri) put16(key, x);
  return key;
}

Search run_search(const Compact& c, bool collect_all) {
  int cells = 0;
  auto col = initial_colours(c, cells);
  Search s{c, collect_all, false, {}, {}, {}};
  s.run(std::move(col), cells);
  return s;
}

}  // namespace

CanonicalLabeling canonical_labeling(const Graph& g) {
  const Compact c = compact(g);
  Search s = run_search(c, false);
  CanonicalLabeling out;
  out.position = s.best_position;
  out.key = build_key(c, s.best_position, s.best);
  return out;
}

CanonicalKey canonical_form(const Graph& g) { return canonical_labeling(g).key; }

Graph canonical_relabel(const Graph& g, const std::vector<int>& position) {
  const int n = g.num_vertices();
  std::vector<int> inv(n);
  for (int v = 0; v < n; ++v) inv[position[v]] = v;
  Graph out;
  for (int p = 0; p < n; ++p) out.add_vertex(g.vertex_genus(inv[p]), g.vertex_tag(inv[p]));
  std::vector<std::pair<int, int>> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.endpoints(e);
    int pa = position[a], pb = position[b];
    if (pa > pb) std::swap(pa, pb);
    edges.emplace_back(pa, pb);
  }
  std::sort(edges.begin(), edges.end());
  for (auto [a, b] : edges) out.add_edge(a, b);
  for (auto [label, h] : g.legs()) out.add_leg(position[g.halfedge(h).vertex], label);
  std::vector<std::pair<int, int>> branches;
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    if (g.is_branch_point(h)) branches.emplace_back(position[g.halfedge(h).vertex], g.halfedge(h).origin);
  }
  std::sort(branches.begin(), branches.end());
  for (auto [v, origin] : branches) out.add_branch_point(v, origin);
  return out;
}

Graph canonical_representative(const Graph& g) {
  return canonical_relabel(g, canonical_labeling(g).position);
}

std::vector<HalfEdgeId> lift_to_halfedges(const Graph& g, const std::vector<VertexId>& vmap) {
  const int n = g.num_vertices();
  auto class_key = [&](VertexId a, VertexId b) {
    return std::pair<int, int>(std::min(a, b), std::max(a, b));
  };
  std::map<std::pair<int, int>, std::vector<EdgeId>> classes;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.endpoints(e);
    classes[class_key(a, b)].push_back(e);
  }
  std::vector<HalfEdgeId> hmap(g.num_halfedges(), -1);
  for (const auto& [ends, edges] : classes) {
    const auto it = classes.find(class_key(vmap[ends.first], vmap[ends.second]));
    if (it == classes.end() || it->second.size() != edges.size()) {
      throw DomainError("vertex map is not an automorphism");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto src = g.edge(edges[i]);
      auto dst = g.edge(it->second[i]);
      if (g.halfedge(dst[0]).vertex != vmap[g.halfedge(src[0]).vertex]) std::swap(dst[0], dst[1]);
      hmap[src[0]] = dst[0];
      hmap[src[1]] = dst[1];
    }
  }
  std::map<int, HalfEdgeId> leg_at;
  std::vector<std::vector<HalfEdgeId>> branches(n);
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    if (g.is_leg(h)) leg_at[g.halfedge(h).leg] = h;
    if (g.is_branch_point(h)) branches[g.halfedge(h).vertex].push_back(h);
  }
  for (const auto& [label, h] : leg_at) {
    (void)label;
    if (vmap[g.halfedge(h).vertex] != g.halfedge(h).vertex) {
      throw DomainError("vertex map moves a leg");
    }
    hmap[h] = h;
  }
  for (VertexId v = 0; v < n; ++v) {
    const auto& to = branches[vmap[v]];
    if (to.size() != branches[v].size()) throw DomainError("vertex map is not an automorphism");
    for (std::size_t i = 0; i < to.size(); ++i) hmap[branches[v][i]] = to[i];
  }
  return hmap;
}

namespace {

std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
  // (a o b)(x) = a(b(x))
  std::vector<int> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

std::set<std::vector<int>> closure(const std::vector<std::vector<int>>& gens, int n) {
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> group{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        auto y = compose(s, x);
        if (group.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  return group;
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace

AutomorphismGroup automorphisms(const Graph& g) {
  g.validate();
  const Compact c = compact(g);
  Search s = run_search(c, true);
  const int n = c.n;
  std::vector<int> best_inv(n);
  for (int v = 0; v < n; ++v) best_inv[s.best_position[v]] = v;

  AutomorphismGroup group;
  for (const auto& pos : s.ties) {
    std::vector<VertexId> sigma(n);
    for (int v = 0; v < n; ++v) sigma[v] = best_inv[pos[v]];
    group.vertex_permutations.push_back(std::move(sigma));
  }
  std::sort(group.vertex_permutations.begin(), group.vertex_permutations.end());

  // Greedy generating set for the vertex action.
  std::vector<std::vector<int>> vertex_gens;
  std::set<std::vector<int>> generated = closure(vertex_gens, n);
  for (const auto& p : group.vertex_permutations) {
    if (generated.count(p)) continue;
    vertex_gens.push_back(p);
    generated = closure(vertex_gens, n);
  }
  std::vector<int> identity_v(n);
  std::iota(identity_v.begin(), identity_v.end(), 0);
  for (const auto& p : vertex_gens) {
    group.generators.push_back(Automorphism{p, lift_to_halfedges(g, p)});
  }

  // Automorphisms fixing every vertex: permute parallel edges, permute and
  // flip loops, permute branch points at a vertex.
  std::uint64_t kernel = 1;
  std::vector<HalfEdgeId> identity_h(g.num_halfedges());
  std::iota(identity_h.begin(), identity_h.end(), 0);
  std::vector<std::vector<EdgeId>> classes;
  {
    std::vector<std::pair<std::pair<int, int>, EdgeId>> keyed;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      auto [a, b] = g.endpoints(e);
      if (a > b) std::swap(a, b);
      keyed.push_back({{a, b}, e});
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      if (i == 0 || keyed[i].first != keyed[i - 1].first) classes.emplace_back();
      classes.back().push_back(keyed[i].second);
    }
  }
  for (const auto& cls : classes) {
    const bool loop = g.is_loop(cls.front());
    kernel *= factorial(static_cast<int>(cls.size()));
    for (std::size_t i = 0; i + 1 < cls.size(); ++i) {
      auto h = identity_h;
      const auto e1 = g.edge(cls[i]), e2 = g.edge(cls[i + 1]);
      // Align orientation: the halfedge at the smaller endpoint first.
      auto oriented = [&](std::array<HalfEdgeId, 2> e) {
        if (g.halfedge(e[0]).vertex > g.halfedge(e[1]).vertex) std::swap(e[0], e[1]);
        return e;
      };
      const auto o1 = oriented(e1), o2 = oriented(e2);
      h[o1[0]] = o2[0];
      h[o2[0]] = o1[0];
      h[o1[1]] = o2[1];
      h[o2[1]] = o1[1];
      group.generators.push_back(Automorphism{identity_v, std::move(h)});
    }
    if (loop) {
      for (EdgeId e : cls) {
        kernel *= 2;
        auto h = identity_h;
        std::swap(h[g.edge(e)[0]], h[g.edge(e)[1]]);
        group.generators.push_back(Automorphism{identity_v, std::move(h)});
      }
    }
  }
  std::vector<std::vector<HalfEdgeId>> branch_at(n);
  for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
    if (g.is_branch_point(h)) branch_at[g.halfedge(h).vertex].push_back(h);
  }
  for (const auto& bs : branch_at) {
    kernel *= factorial(static_cast<int>(bs.size()));
    for (std::size_t i = 0; i + 1 < bs.size(); ++i) {
      auto h = identity_h;
      std::swap(h[bs[i]], h[bs[i + 1]]);
      group.generators.push_back(Automorphism{identity_v, std::move(h)});
    }
  }
  group.order = static_cast<std::uint64_t>(group.vertex_permutations.size()) * kernel;
  return group;
}

std::string to_hex(const CanonicalKey& key) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(key.size() * 2);
  for (unsigned char ch : key) {
    out.push_back(digits[ch >> 4]);
    out.push_back(digits[ch & 0xF]);
  }
  return out;
}

CanonicalKey from_hex(const std::string& hex) {
  if (hex.size() % 2) throw ParseError("canonical key hex has odd length");
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw ParseError(std::string("invalid hex digit '") + ch + "'");
  };
  CanonicalKey out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace torelli
