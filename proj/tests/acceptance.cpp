// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "torelli/assignment.hpp"
#include "torelli/axis.hpp"
#include "torelli/canonical.hpp"
#include "torelli/enumerate.hpp"
#include "torelli/error.hpp"
#include "torelli/torelli.hpp"

using namespace torelli;

namespace {

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<std::pair<int, int>> types() {
  std::vector<std::pair<int, int>> out;
  for (int g = 0; g <= 3; ++g) {
    for (int n = 0; 3 * g - 3 + n <= 6; ++n) {
      if (2 * g - 2 + n > 0) out.emplace_back(g, n);
    }
  }
  return out;
}

std::map<std::pair<int, int>, GraphCatalog>& catalogs() {
  static std::map<std::pair<int, int>, GraphCatalog> cats;
  if (cats.empty()) {
    EnumerationOptions opt;
    opt.jobs = jobs();
    for (auto [g, n] : types()) cats.emplace(std::pair{g, n}, enumerate_stable_graphs(g, n, opt));
  }
  return cats;
}

std::uint64_t trees(int m) {
  static std::map<int, std::uint64_t> memo;
  auto it = memo.find(m);
  if (it == memo.end()) it = memo.emplace(m, oracle::tree_count(m)).first;
  return it->second;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
std::set<int> only;

void run(int number, const char* title, const std::function<Outcome()>& body) {
  if (!only.empty() && !only.count(number)) return;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", o.pass ? "PASS" : "FAIL", number, title, o.detail.c_str(), s);
  std::fflush(stdout);
}

std::string pair_name(std::pair<int, int> t) { return "(" + std::to_string(t.first) + "," + std::to_string(t.second) + ")"; }

// ---- 1 ----
Outcome extremality() {
  std::uint64_t degens = 0, violations = 0;
  std::string bad;
  const auto F = ExtremalAssignment::builtin_F();
  for (const auto& [t, cat] : catalogs()) {
    const auto r = verify_extremal(F, cat, jobs());
    degens += r.degenerations;
    if (!r.ok()) {
      violations += r.axiom1.size() + r.axiom2.size();
      bad += " " + pair_name(t);
    }
  }
  return {violations == 0, std::to_string(catalogs().size()) + " catalogs, " + std::to_string(degens) +
                               " degenerations, " + std::to_string(violations) + " violations" + bad};
}

// ---- 2 ----
// Independent: a connected set of genus-0 vertices spanning a tree whose
// complement splits into as many components as there are attaching edges
// (at least three).
bool has_separating_rational_bridge(const Graph& g) {
  std::vector<VertexId> rational;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.vertex_genus(v) == 0) rational.push_back(v);
  }
  const auto inc = g.incidence();
  for (unsigned mask = 1; mask < (1u << rational.size()); ++mask) {
    std::vector<char> in(g.num_vertices(), 0);
    bool legs = false;
    for (std::size_t i = 0; i < rational.size(); ++i) {
      if (mask >> i & 1) in[rational[i]] = 1;
    }
    int inner = 0, attach = 0, k = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (!in[v]) continue;
      ++k;
      for (HalfEdgeId h : inc[v]) {
        if (g.halfedge(h).edge < 0) legs = true;
        else if (in[g.halfedge(g.partner(h)).vertex]) ++inner;
        else ++attach;
      }
    }
    if (legs || inner / 2 != k - 1 || attach < 3) continue;
    std::vector<torelli::EdgeId> removed;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const auto [a, b] = g.endpoints(e);
      if (in[a] || in[b]) removed.push_back(e);
    }
    // Components after deleting every edge touching the set: the set's own
    // vertices become k singletons, and a tree has connected inside.
    const int comps = oracle::components_without(g, removed) - k;
    std::vector<EdgeId> inner_edges;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const auto [a, b] = g.endpoints(e);
      if (!(in[a] && in[b])) inner_edges.push_back(e);
    }
    const bool connected_set = oracle::components_without(g, inner_edges) -
                                   (g.num_vertices() - k) == 1;
    if (connected_set && comps == attach) return true;
  }
  return false;
}

Outcome genus3_example() {
  const GraphCatalog& cat = catalogs().at({3, 0});
  int nonempty = 0, mismatch = 0;
  for (const Graph& g : cat.graphs) {
    const VertexSet F = assignment_F(g);
    const bool oracle_says = has_separating_rational_bridge(g);
    const ZContraction z = z_contract(g, F);
    bool axis = false;
    for (const auto& p : z.axis.points) axis = axis || p.is_axis_point();
    int sep_nodes = 0;
    {
      const Graph s = star_graph(z.axis);
      // Nodes are sentinels of type (0,2); count separating ones.
      for (std::size_t i = 0; i < z.axis.points.size(); ++i) {
        if (!z.axis.points[i].is_node()) continue;
        AxisGraph cut = z.axis;
        cut.points.erase(cut.points.begin() + static_cast<long>(i));
        const Graph t = star_graph(cut);
        if (num_components(t) > num_components(s)) ++sep_nodes;
      }
    }
    const bool fewer = sep_nodes < static_cast<int>(separating_edges(g).size());
    const bool nonempty_F = !F.empty();
    bool ok = nonempty_F == (axis || fewer) && nonempty_F == oracle_says;
    if (nonempty_F) {
      ++nonempty;
      const Graph p = pst(g).graph;
      // Three one-vertex components of arithmetic genus 1 (smooth or nodal).
      bool shape = p.num_vertices() == 3 && num_components(p) == 3;
      for (VertexId v = 0; v < p.num_vertices(); ++v) shape = shape && genus(induced_subgraph(p, {v}).graph) == 1;
      ok = ok && shape;
    }
    if (!ok) ++mismatch;
  }
  return {mismatch == 0, std::to_string(cat.size()) + " graphs, " + std::to_string(nonempty) + " with F nonempty, " +
                             std::to_string(mismatch) + " mismatches"};
}

// ---- 3 ----
AxisGraph four_point(int components, const std::vector<int>& where) {
  AxisGraph a;
  a.genus.assign(components, 1);
  SingularPoint p;
  int s = 0;
  for (int c : where) p.slots.push_back({c, s++});
  a.points.push_back(p);
  return a;
}

Outcome dichotomy() {
  const auto sep = fiber_constant(four_point(4, {0, 1, 2, 3}), jobs());
  Graph points;
  for (int i = 0; i < 4; ++i) points.add_vertex(1);
  const bool sep_ok = sep.constant && sep.criterion && sep.key == torelli_key_of_polystable(points);
  const auto p4 = fiber_constant(four_point(1, {0, 0, 0, 0}), jobs());
  const auto p22 = fiber_constant(four_point(2, {0, 0, 1, 1}), jobs());
  const bool ok = sep_ok && !p4.constant && !p4.criterion && !p22.constant && !p22.criterion;
  auto word = [](const FiberVerdict& v) { return std::string(v.constant ? "constant" : "varies"); };
  return {ok, "separating " + word(sep) + (sep_ok ? " with 4 genus-1 points" : " WRONG KEY") + ", (4) " + word(p4) +
                  ", (2,2) " + word(p22)};
}

// ---- 4 ----
Outcome fiber_products() {
  if (trees(4) != 4 || trees(5) != 26) return {false, "tree oracle disagrees on m=4 or m=5"};
  if (stable_trees(4).size() != 4 || stable_trees(5).size() != 26) return {false, "stable_trees m=4/5"};
  std::set<CanonicalKey> seen;
  std::size_t axes = 0, mismatch = 0, fibers = 0;
  for (const auto& [t, cat] : catalogs()) {
    for (const Graph& g : cat.graphs) {
      const auto report = rational_multibridges(g);
      std::vector<VertexSet> Zs;
      VertexSet all_max;
      for (const auto& b : report.bridges) {
        Zs.push_back(b.vertices);
        if (b.maximal) all_max.insert(all_max.end(), b.vertices.begin(), b.vertices.end());
      }
      if (!all_max.empty()) Zs.push_back(make_vertex_set(all_max));
      for (const VertexSet& Z : Zs) {
        ZContraction z;
        try {
          z = z_contract(g, Z);
        } catch (const DomainError&) {
          continue;
        }
        if (!classify_axis_points(z.axis).is_axis_like) continue;
        if (!seen.insert(axis_canonical_form(z.axis)).second) continue;
        ++axes;
        std::uint64_t expected = 1;
        std::vector<std::uint64_t> per;
        for (const auto& p : z.axis.points) {
          const int k = p.m() + static_cast<int>(p.legs.size());
          if (p.g_sing == 0 && k >= 3) {
            expected *= trees(k);
            per.push_back(trees(k));
          }
        }
        const FiberStrata fs = fiber_strata(z.axis);
        fibers += fs.graphs.size();
        std::vector<std::uint64_t> got(fs.per_point.begin(), fs.per_point.end());
        if (fs.graphs.size() != expected || got != per) ++mismatch;
      }
    }
  }
  return {mismatch == 0 && axes > 0, std::to_string(axes) + " axis graphs, " + std::to_string(fibers) +
                                         " fiber graphs, " + std::to_string(mismatch) + " mismatches"};
}

// ---- 5 ----
Outcome c1_law() {
  std::size_t graphs = 0, bad = 0;
  for (const auto& [t, cat] : catalogs()) {
    for (const Graph& g : cat.graphs) {
      if (!oracle::naive_separating_edges(g).empty()) continue;
      ++graphs;
      const C1Partition c1 = c1_sets(g);
      bool ok = true;
      std::vector<int> hits(g.num_edges(), 0);
      for (std::size_t b = 0; b < c1.blocks.size(); ++b) {
        for (EdgeId e : c1.blocks[b]) {
          ++hits[e];
          ok = ok && c1.block_of[e] == static_cast<int>(b);
        }
      }
      for (int h : hits) ok = ok && h == 1;
      const int base = oracle::components_without(g, std::vector<EdgeId>{});
      for (const auto& S : c1.blocks) {
        for (EdgeId p : S) {
          const int cp = oracle::components_without(g, p);
          if (cp != base && !g.is_loop(p)) ok = false;
          std::vector<EdgeId> sep;
          for (EdgeId q = 0; q < g.num_edges(); ++q) {
            if (q == p || g.is_loop(q)) continue;
            if (oracle::components_without(g, std::vector<EdgeId>{p, q}) > cp) sep.push_back(q);
          }
          std::vector<EdgeId> rest;
          for (EdgeId q : S) {
            if (q != p) rest.push_back(q);
          }
          ok = ok && sep == rest;
        }
      }
      if (!ok) ++bad;
    }
  }
  return {bad == 0, std::to_string(graphs) + " bridgeless graphs, " + std::to_string(bad) + " failures"};
}

// ---- 6 ----
Outcome torelli_consistency() {
  std::size_t pairs = 0, mismatch = 0, equal_keys = 0;
  for (auto t : std::vector<std::pair<int, int>>{{2, 0}, {1, 2}, {2, 1}}) {
    const GraphCatalog& cat = catalogs().at(t);
    std::vector<Graph> p;
    std::vector<TorelliKey> k;
    for (const Graph& g : cat.graphs) {
      p.push_back(pst(g).graph);
      k.push_back(torelli_key_of_polystable(p.back()));
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        ++pairs;
        const C1Equivalence eq = c1_equivalent(p[i], p[j]);
        bool direct = eq.equivalent;
        if (direct) {
          const auto fa = moduli_flags(p[i]), fb = moduli_flags(p[j]);
          const auto la = component_labels(p[i]), lb = component_labels(p[j]);
          for (VertexId v = 0; v < p[i].num_vertices(); ++v) {
            direct = direct && fa[la[v]] == fb[lb[eq.vertex_map[v]]];
          }
        }
        if (k[i] == k[j]) ++equal_keys;
        if (direct != (k[i] == k[j])) ++mismatch;
      }
    }
  }
  return {mismatch == 0, std::to_string(pairs) + " ordered pairs, " + std::to_string(equal_keys) + " key-equal, " +
                             std::to_string(mismatch) + " mismatches"};
}

// ---- 7 ----
std::vector<int> labels(const Graph& g) {
  std::vector<int> out;
  for (const auto& [label, h] : g.legs()) out.push_back(label);
  std::sort(out.begin(), out.end());
  return out;
}

Outcome conservation() {
  std::vector<const Graph*> pool;
  for (const auto& [t, cat] : catalogs()) {
    if (t.first == 0 && t.second > 7) continue;
    for (const Graph& g : cat.graphs) pool.push_back(&g);
  }
  std::mt19937_64 rng(20261016);
  std::size_t bad = 0, z_checked = 0, fiber_checked = 0;
  for (int it = 0; it < 10000; ++it) {
    const Graph& g = *pool[rng() % pool.size()];
    const int G = genus(g);
    const auto S = oracle::random_subset(g, rng);
    const Graph c = contract_edges(g, S);
    if (genus(c) != G || labels(c) != labels(g)) ++bad;

    VertexSet Z;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (rng() % 2) Z.push_back(v);
    }
    if (!Z.empty() && static_cast<int>(Z.size()) < g.num_vertices()) {
      try {
        const ZContraction z = z_contract(g, Z);
        ++z_checked;
        if (genus(z.axis) != G) ++bad;
      } catch (const DomainError&) {
      }
    }

    const auto report = rational_multibridges(g);
    if (report.bridges.empty()) continue;
    const auto& b = report.bridges[rng() % report.bridges.size()];
    if (b.m > 6) continue;
    const ZContraction z = z_contract(g, b.vertices);
    const FiberStrata fs = fiber_strata(z.axis);
    const CanonicalKey want = canonical_form(g);
    bool found = false;
    for (const FiberGraph& fg : fs.graphs) {
      if (genus(fg.graph) != G) ++bad;
      found = found || canonical_form(fg.graph) == want;
    }
    ++fiber_checked;
    if (!found) ++bad;
  }

  std::size_t pst_graphs = 0, stab_graphs = 0;
  for (const auto& [t, cat] : catalogs()) {
    for (const Graph& g : cat.graphs) {
      ++pst_graphs;
      const Graph once = pst(g).graph;
      if (canonical_form(pst(once).graph) != canonical_form(once)) ++bad;
    }
    if (t.first == 0 && t.second > 7) continue;
    for (const Graph& g : cat.graphs) {
      ++stab_graphs;
      const Graph plain = forget_markings(g);
      const CanonicalKey ref = canonical_form(stabilize(plain).graph);
      for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        if (canonical_form(stabilize(plain, seed).graph) != ref) {
          ++bad;
          break;
        }
      }
    }
  }
  return {bad == 0, "10000 random cases (" + std::to_string(z_checked) + " z-contractions, " +
                        std::to_string(fiber_checked) + " fiber round trips), pst on " + std::to_string(pst_graphs) +
                        " graphs, stabilize x100 on " + std::to_string(stab_graphs) + ", " + std::to_string(bad) +
                        " failures"};
}

// ---- 8 ----
Outcome cross_validation() {
  std::size_t bad = 0;
  std::string detail;
  for (const auto& [t, cat] : catalogs()) {
    const std::uint64_t other = oracle::fibration_count(t.first, t.second);
    if (other != cat.size()) {
      ++bad;
      detail += " " + pair_name(t) + ":" + std::to_string(cat.size()) + "!=" + std::to_string(other);
    }
  }
  const bool anchors = catalogs().at({1, 1}).size() == 2 && catalogs().at({0, 3}).size() == 1;
  return {bad == 0 && anchors, std::to_string(catalogs().size()) + " types agree" + detail +
                                   (anchors ? ", (1,1)=2 (0,3)=1" : ", anchor mismatch")};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto t0 = std::chrono::steady_clock::now();
  catalogs();
  std::printf("catalogs enumerated in %.1fs on %d threads\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), jobs());
  run(1, "F is extremal on every catalog with 3g-3+n <= 6", extremality);
  run(2, "genus-3 catalog: F nonempty exactly on three elliptic tails around a rational bridge", genus3_example);
  run(3, "fiber verdicts: separating 4-axis constant, profiles (4) and (2,2) vary", dichotomy);
  run(4, "fiber strata sizes are products of stable tree counts", fiber_products);
  run(5, "C1-sets of bridgeless graphs", c1_law);
  run(6, "Torelli keys agree with direct C1-equivalence", torelli_consistency);
  run(7, "conservation and idempotence", conservation);
  run(8, "two generators agree on catalog sizes", cross_validation);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
