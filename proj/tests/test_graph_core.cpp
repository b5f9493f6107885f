#include <doctest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "torelli/canonical.hpp"
#include "torelli/enumerate.hpp"
#include "torelli/error.hpp"
#include "torelli/io.hpp"

using namespace torelli;

namespace {

std::vector<Graph> sample_graphs() {
  std::vector<Graph> out;
  for (auto [g, n] : std::vector<std::pair<int, int>>{{2, 0}, {3, 0}, {1, 2}, {1, 3}, {2, 1}, {0, 5}, {2, 2}}) {
    const auto cat = enumerate_stable_graphs(g, n);
    out.insert(out.end(), cat.graphs.begin(), cat.graphs.end());
  }
  return out;
}

Graph reglue(const std::vector<Piece>& pieces) {
  Graph g;
  std::map<int, std::vector<HalfEdgeId>> by_origin;
  for (const Piece& p : pieces) {
    const int ho = g.num_halfedges();
    g = disjoint_union(g, p.graph);
    for (HalfEdgeId h = 0; h < p.graph.num_halfedges(); ++h) {
      if (p.graph.is_branch_point(h)) by_origin[p.graph.halfedge(h).origin].push_back(h + ho);
    }
  }
  for (const auto& [origin, hs] : by_origin) {
    REQUIRE(hs.size() == 2);
    g.pair(hs[0], hs[1]);
  }
  return g;
}

}  // namespace

TEST_CASE("genus examples") {
  CHECK(genus(oracle::rose(2, 0, 0)) == 2);
  CHECK(genus(oracle::banana(1, 1, 2)) == 3);
  CHECK(genus(oracle::rose(0, 1, 1)) == 1);
}

TEST_CASE("genus rejects malformed graphs") {
  nlohmann::json j = {{"vertices", {{{"id", 0}, {"genus", 1}}}},
                      {"halfedges", {{{"id", 0}, {"vertex", 7}}}},
                      {"edges", nlohmann::json::array()},
                      {"legs", nlohmann::json::object()}};
  CHECK_THROWS_AS(graph_from_json(j), StructuralError);
  nlohmann::json k = {{"vertices", {{{"id", 0}, {"genus", 1}}}},
                      {"halfedges", {{{"id", 0}, {"vertex", 0}}, {{"id", 1}, {"vertex", 0}}}},
                      {"edges", {{0, 1}, {1, 0}}},
                      {"legs", nlohmann::json::object()}};
  CHECK_THROWS_AS(graph_from_json(k), StructuralError);
}

TEST_CASE("is_stable examples") {
  CHECK(is_stable(oracle::rose(0, 0, 3)));
  CHECK_FALSE(is_stable(oracle::rose(1, 0, 0)));
  CHECK_FALSE(is_stable(oracle::rose(0, 1, 0)));
}

TEST_CASE("canonical_form examples") {
  std::mt19937_64 rng(7);
  const Graph tri = oracle::cycle({0, 0, 0});
  CHECK(canonical_form(tri) == canonical_form(oracle::shuffled(tri, rng)));
  CHECK(canonical_form(oracle::banana(1, 0, 3)) == canonical_form(oracle::banana(0, 1, 3)));
  CHECK(canonical_form(oracle::banana(1, 0, 3)) != canonical_form(oracle::banana(1, 0, 2)));
}

TEST_CASE("canonical_form respects leg labels") {
  Graph a;
  a.add_vertex(0);
  a.add_vertex(0);
  a.add_edge(0, 1);
  a.add_leg(0, 1);
  a.add_leg(0, 2);
  a.add_leg(1, 3);
  a.add_leg(1, 4);
  Graph b;
  b.add_vertex(0);
  b.add_vertex(0);
  b.add_edge(0, 1);
  b.add_leg(0, 1);
  b.add_leg(0, 3);
  b.add_leg(1, 2);
  b.add_leg(1, 4);
  CHECK(canonical_form(a) != canonical_form(b));
  CHECK_FALSE(oracle::naive_isomorphic(a, b));
}

TEST_CASE("automorphism examples") {
  CHECK(automorphisms(oracle::rose(2, 0, 0)).order == 1);
  const Graph banana = oracle::banana(1, 1, 2);
  CHECK(oracle::brute_force_aut_order(banana) == 4);
  CHECK(automorphisms(banana).order == 4);
  const Graph square = oracle::cycle({1, 1, 1, 1});
  CHECK(oracle::brute_force_aut_order(square) == 8);
  CHECK(automorphisms(square).order == 8);
}

TEST_CASE("separating_edges examples") {
  CHECK(separating_edges(oracle::banana(1, 1, 1)) == std::vector<EdgeId>{0});
  CHECK(separating_edges(oracle::banana(1, 1, 2)).empty());
  Graph g = oracle::banana(1, 1, 1);
  g.add_edge(0, 0);
  CHECK(separating_edges(g) == std::vector<EdgeId>{0});
}

TEST_CASE("normalize_at examples") {
  const Graph chain = oracle::banana(1, 1, 1);
  const std::vector<EdgeId> cut{0};
  const auto pieces = normalize_at(chain, cut);
  REQUIRE(pieces.size() == 2);
  for (const Piece& p : pieces) {
    CHECK(genus(p.graph) == 1);
    CHECK(p.graph.num_branch_points() == 1);
  }
  const Graph b2 = oracle::banana(1, 1, 2);
  const auto one = normalize_at(b2, cut);
  REQUIRE(one.size() == 1);
  CHECK(genus(one[0].graph) == genus(b2) - 1);
  CHECK(one[0].graph.num_branch_points() == 2);
  const auto same = normalize_at(b2, {});
  REQUIRE(same.size() == 1);
  CHECK(canonical_form(same[0].graph) == canonical_form(b2));
  const std::vector<EdgeId> bad{9};
  CHECK_THROWS_AS(normalize_at(b2, bad), StructuralError);
}

TEST_CASE("canonical_form agrees with brute-force isomorphism") {
  const auto graphs = sample_graphs();
  std::mt19937_64 rng(11);
  for (const Graph& g : graphs) {
    REQUIRE(g.num_vertices() <= 7);
    const Graph h = oracle::shuffled(g, rng);
    CHECK(oracle::naive_isomorphic(g, h));
    CHECK(canonical_form(g) == canonical_form(h));
  }
  // Within a catalog all entries are pairwise non-isomorphic by brute force.
  for (auto [g, n] : std::vector<std::pair<int, int>>{{3, 0}, {2, 1}, {1, 3}}) {
    const auto cat = enumerate_stable_graphs(g, n);
    for (std::size_t i = 0; i < cat.size(); ++i) {
      for (std::size_t j = i + 1; j < cat.size(); ++j) {
        CHECK_FALSE(oracle::naive_isomorphic(cat.graphs[i], cat.graphs[j]));
      }
    }
  }
}

TEST_CASE("automorphism order matches brute force and generators are automorphisms") {
  for (const Graph& g : sample_graphs()) {
    if (g.num_halfedges() > 12) continue;
    const auto group = automorphisms(g);
    CHECK(group.order == oracle::brute_force_aut_order(g));
    CHECK(group.vertex_permutations.size() == oracle::naive_vertex_automorphisms(g).size());
    for (const Automorphism& a : group.generators) {
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        CHECK(g.vertex_genus(a.vertex_map[v]) == g.vertex_genus(v));
      }
      for (HalfEdgeId h = 0; h < g.num_halfedges(); ++h) {
        const HalfEdgeId k = a.halfedge_map[h];
        CHECK(g.halfedge(k).vertex == a.vertex_map[g.halfedge(h).vertex]);
        if (g.is_leg(h)) CHECK(k == h);
        if (g.halfedge(h).edge >= 0) CHECK(a.halfedge_map[g.partner(h)] == g.partner(k));
      }
    }
  }
}

TEST_CASE("re-gluing a normalization restores the graph") {
  std::mt19937_64 rng(5);
  for (const Graph& g : sample_graphs()) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto S = oracle::random_subset(g, rng);
      const auto pieces = normalize_at(g, S);
      const Graph back = reglue(pieces);
      CHECK(genus(back) == genus(g));
      CHECK(canonical_form(back) == canonical_form(g));
    }
  }
}

TEST_CASE("separating_edges matches naive connectivity") {
  for (const Graph& g : sample_graphs()) CHECK(separating_edges(g) == oracle::naive_separating_edges(g));
  const auto trees = enumerate_stable_graphs(0, 7).graphs;
  for (const Graph& t : trees) CHECK(separating_edges(t).size() == static_cast<std::size_t>(t.num_edges()));
}

TEST_CASE("json and dot round trip") {
  for (const Graph& g : sample_graphs()) {
    const auto j = graph_to_json(g);
    CHECK(graph_from_json(nlohmann::json::parse(j.dump())) == g);
  }
  const std::string dot = graph_to_dot(oracle::rose(0, 1, 1));
  CHECK(dot.find("v0:g0") != std::string::npos);
  CHECK(dot.find("label=\"1\"") != std::string::npos);
}

TEST_CASE("hex keys round trip") {
  const auto key = canonical_form(oracle::banana(2, 1, 3));
  CHECK(from_hex(to_hex(key)) == key);
  CHECK_THROWS_AS(from_hex("abc"), ParseError);
}
