#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "torelli/assignment.hpp"
#include "torelli/axis.hpp"
#include "torelli/canonical.hpp"
#include "torelli/error.hpp"

using namespace torelli;

namespace {

// One point joining genus-1 components; where[i] is the component of branch i.
AxisGraph one_point(int components, const std::vector<int>& where) {
  AxisGraph a;
  a.genus.assign(components, 1);
  SingularPoint p;
  int s = 0;
  for (int c : where) p.slots.push_back({c, s++});
  a.points.push_back(p);
  return a;
}

Graph two_sided(int to_a, int to_b) {
  Graph g;
  g.add_vertex(0);
  g.add_vertex(1);
  g.add_vertex(1);
  for (int i = 0; i < to_a; ++i) g.add_edge(0, 1);
  for (int i = 0; i < to_b; ++i) g.add_edge(0, 2);
  return g;
}

}  // namespace

TEST_CASE("z_contract of three elliptic tails") {
  const Graph g = oracle::star({1, 1, 1});
  const ZContraction z = z_contract(g, {0});
  CHECK(z.axis.genus == std::vector<int>{1, 1, 1});
  REQUIRE(z.axis.points.size() == 1);
  CHECK(z.axis.points[0].g_sing == 0);
  CHECK(z.axis.points[0].m() == 3);
  CHECK(z.point_origin[0] == VertexSet{0});
  CHECK_FALSE(z.marked_singularity);
  CHECK(genus(z.axis) == 3);
  const auto cls = classify_axis_points(z.axis);
  CHECK(cls.is_axis_like);
  CHECK(cls.is_separating_axis_like);
  CHECK(cls.points[0].cls == "separating");
}

TEST_CASE("z_contract keeps other edges as nodes") {
  const Graph g = oracle::cycle({1, 0, 1});
  const ZContraction z = z_contract(g, {});
  CHECK(z.axis.points.size() == 3);
  for (const auto& p : z.axis.points) CHECK(p.is_node());
  CHECK(genus(z.axis) == genus(g));
  // The genus-0 vertex of the cycle is unstable.
  CHECK_THROWS_AS(z_contract(g, {1}), DomainError);
}

TEST_CASE("z_contract records genus and markings of Z") {
  Graph g = oracle::banana(1, 1, 2);
  g.add_leg(0, 1);
  const ZContraction z = z_contract(g, {0});
  REQUIRE(z.axis.points.size() == 1);
  CHECK(z.axis.points[0].g_sing == 1);
  CHECK(z.axis.points[0].legs == std::vector<int>{1});
  CHECK(z.marked_singularity);
  CHECK_FALSE(classify_axis_points(z.axis).is_axis_like);
  CHECK(genus(z.axis) == genus(g));
}

TEST_CASE("z_contract errors") {
  const Graph g = oracle::star({1, 1, 1});
  CHECK_THROWS_AS(z_contract(g, {0, 1, 2, 3}), DomainError);
  CHECK_THROWS_AS(z_contract(g, {7}), StructuralError);
}

TEST_CASE("axis point classes") {
  const auto q = classify_axis_points(z_contract(two_sided(3, 1), {0}).axis);
  CHECK(q.points[0].profile == std::vector<int>{3, 1});
  CHECK(q.points[0].cls == "quasi-separating");
  CHECK(q.is_quasi_separating_axis_like);
  CHECK_FALSE(q.is_separating_axis_like);

  const auto gen = classify_axis_points(z_contract(oracle::parallel(4), {1}).axis);
  CHECK(gen.points[0].profile == std::vector<int>{4});
  CHECK(gen.points[0].cls == "general");
  CHECK_FALSE(gen.is_quasi_separating_axis_like);

  const auto twotwo = classify_axis_points(one_point(2, {0, 0, 1, 1}));
  CHECK(twotwo.points[0].profile == std::vector<int>{2, 2});
  CHECK(twotwo.points[0].cls == "general");

  const auto sep = classify_axis_points(one_point(4, {0, 1, 2, 3}));
  CHECK(sep.is_separating_axis_like);
}

TEST_CASE("stable tree counts agree with leaf splitting") {
  CHECK(oracle::tree_count(4) == 4);
  CHECK(oracle::tree_count(5) == 26);
  for (int m = 3; m <= 7; ++m) {
    CAPTURE(m);
    const auto trees = stable_trees(m);
    const auto direct = oracle::leaf_split_trees(m);
    CHECK(trees.size() == oracle::tree_count(m));
    CHECK(direct.size() == trees.size());
    std::set<CanonicalKey> a, b;
    for (const Graph& t : trees) a.insert(canonical_form(t));
    for (const Graph& t : direct) b.insert(canonical_form(t));
    CHECK(a == b);
    CHECK(b.size() == direct.size());
  }
  CHECK_THROWS_AS(stable_trees(2), DomainError);
}

TEST_CASE("fiber sizes") {
  CHECK(fiber_strata(z_contract(oracle::star({1, 1, 1}), {0}).axis).graphs.size() == 1);
  CHECK(fiber_strata(one_point(4, {0, 1, 2, 3})).graphs.size() == 4);
  CHECK(fiber_strata(one_point(1, {0, 0, 0, 0, 0})).graphs.size() == 26);

  // A 3-point and a 4-point on a chain of components.
  AxisGraph a;
  a.genus = {1, 1, 1, 1, 1};
  SingularPoint p3, p4;
  p3.slots = {{0, 0}, {1, 0}, {2, 0}};
  p4.slots = {{2, 1}, {3, 0}, {4, 0}, {4, 1}};
  a.points = {p3, p4};
  const FiberStrata fs = fiber_strata(a);
  CHECK(fs.per_point == std::vector<std::size_t>{1, 4});
  CHECK(fs.graphs.size() == 4);
  CHECK_FALSE(fs.moduli_positive);
  for (std::size_t i = 0; i < fs.graphs.size(); ++i) {
    CHECK(fs.graphs[i].choice == std::vector<std::size_t>{0, i});
    CHECK(is_stable(fs.graphs[i].graph));
    CHECK(genus(fs.graphs[i].graph) == genus(a));
  }
}

TEST_CASE("fiber strata with markings on the point") {
  AxisGraph a;
  a.genus = {1, 1};
  SingularPoint p;
  p.slots = {{0, 0}, {1, 0}};
  p.legs = {1, 2};
  a.points = {p};
  const FiberStrata fs = fiber_strata(a);
  CHECK(fs.graphs.size() == 4);
  for (const FiberGraph& fg : fs.graphs) CHECK(fg.graph.num_legs() == 2);
}

TEST_CASE("fiber strata need axis-like input") {
  AxisGraph a;
  a.genus = {1, 1};
  SingularPoint p;
  p.g_sing = 1;
  p.slots = {{0, 0}, {1, 0}};
  a.points = {p};
  CHECK_THROWS_AS(fiber_strata(a), DomainError);
}

TEST_CASE("contracting a bridge and refilling it gives the graph back") {
  std::mt19937_64 rng(17);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{3, 0}, {2, 2}, {1, 4}, {0, 7}}) {
    for (const Graph& G : enumerate_stable_graphs(g, n).graphs) {
      const auto report = rational_multibridges(G);
      if (report.bridges.empty()) continue;
      const auto& b = report.bridges[rng() % report.bridges.size()];
      const ZContraction z = z_contract(G, b.vertices);
      CHECK(genus(z.axis) == g);
      const FiberStrata fs = fiber_strata(z.axis);
      bool found = false;
      for (const FiberGraph& fg : fs.graphs) {
        CHECK(genus(fg.graph) == g);
        found = found || canonical_form(fg.graph) == canonical_form(G);
      }
      CHECK(found);
    }
  }
}

TEST_CASE("axis validation") {
  AxisGraph a = one_point(2, {0, 1, 1});
  CHECK_NOTHROW(validate(a));
  AxisGraph dup = a;
  dup.points[0].slots[2] = dup.points[0].slots[1];
  CHECK_THROWS_AS(validate(dup), StructuralError);
  AxisGraph unknown = a;
  unknown.points[0].slots[0].first = 5;
  CHECK_THROWS_AS(validate(unknown), StructuralError);
  AxisGraph apart = a;
  apart.genus.push_back(2);
  CHECK_THROWS_AS(validate(apart), StructuralError);
  AxisGraph unstable = one_point(2, {0, 1, 1});
  unstable.genus[0] = 0;
  CHECK_THROWS_AS(validate(unstable), StructuralError);
}

TEST_CASE("axis json round trip and canonical form") {
  AxisGraph a = one_point(3, {0, 1, 1, 2});
  a.legs = {{1, 2}};
  const AxisGraph b = axis_from_json(nlohmann::json::parse(axis_to_json(a).dump()));
  CHECK(b.genus == a.genus);
  CHECK(b.legs == a.legs);
  REQUIRE(b.points.size() == 1);
  CHECK(b.points[0].slots == a.points[0].slots);
  CHECK(axis_canonical_form(a) == axis_canonical_form(b));

  // Relabeling components does not change the key.
  AxisGraph c = a;
  c.points[0].slots = {{2, 0}, {1, 1}, {1, 2}, {0, 3}};
  c.legs = {{1, 0}};
  CHECK(axis_canonical_form(a) == axis_canonical_form(c));
  CHECK(axis_canonical_form(a) != axis_canonical_form(one_point(3, {0, 1, 1, 2})));

  nlohmann::json bad = axis_to_json(a);
  bad["singular_points"][0]["type"] = {0, 3};
  CHECK_THROWS_AS(axis_from_json(bad), StructuralError);
  CHECK_THROWS_AS(axis_from_json(nlohmann::json::array()), ParseError);
}
