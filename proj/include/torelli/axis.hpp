#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "torelli/canonical.hpp"
#include "torelli/graph.hpp"

namespace torelli {

/// One branch of a singular point: (component, slot). Slot numbers are local
/// names on the component and only need to be distinct there.
using Slot = std::pair<int, int>;

/// Singularity of type (g_sing, m) with m = slots.size(). Type (0,2) without
/// legs is an ordinary node; (0,m) with m >= 3 is an m-axis point.
struct SingularPoint {
  int g_sing = 0;
  std::vector<Slot> slots;
  std::vector<int> legs;  // markings sitting on the singular point

  int m() const { return static_cast<int>(slots.size()); }
  bool is_node() const { return g_sing == 0 && m() == 2 && legs.empty(); }
  bool is_axis_point() const { return g_sing == 0 && m() >= 3; }
};

/// Components (normalization pieces) joined by hyperedge singularities.
struct AxisGraph {
  std::vector<int> genus;                 // per component
  std::vector<std::pair<int, int>> legs;  // (label, component)
  std::vector<SingularPoint> points;

  int num_components() const { return static_cast<int>(genus.size()); }
};

/// Throws StructuralError: unknown component, repeated slot, duplicate leg
/// label, bad type, disconnected, or a component with 2g-2+slots+legs <= 0.
void validate(const AxisGraph& a);

/// Star expansion: components keep tag 0; each singular point becomes a
/// sentinel vertex with tag 1 + g_sing and genus g_sing joined to one
/// halfedge per slot. Point legs sit on the sentinel.
Graph star_graph(const AxisGraph& a);
int genus(const AxisGraph& a);
CanonicalKey axis_canonical_form(const AxisGraph& a);

nlohmann::json axis_to_json(const AxisGraph& a);
AxisGraph axis_from_json(const nlohmann::json& j);

struct ZContraction {
  AxisGraph axis;
  // Host vertex behind each component, host vertex set behind each point.
  std::vector<VertexId> component_origin;
  std::vector<VertexSet> point_origin;
  // Some Z_j carries a marking (not allowed on axis-like models).
  bool marked_singularity = false;
};

/// Collapses each connected component Z_j of Z to a singular point of type
/// (genus of Z_j, attaching edges of Z_j). Edges outside Z become nodes.
ZContraction z_contract(const Graph& g, const VertexSet& Z);

struct AxisPointClass {
  int point = 0;
  int m = 0;
  int g_sing = 0;
  std::string cls;  // node | separating | quasi-separating | general
  // Branches of the point per component of the normalization at it, sorted
  // decreasing.
  std::vector<int> profile;
};

struct AxisClassification {
  std::vector<AxisPointClass> points;
  bool is_axis_like = false;
  bool is_separating_axis_like = false;
  bool is_quasi_separating_axis_like = false;
};

AxisClassification classify_axis_points(const AxisGraph& a);

/// Stable genus-0 trees with m labeled leaves (the (0,m) catalog).
std::vector<Graph> stable_trees(int m);

struct FiberGraph {
  Graph graph;
  std::vector<std::size_t> choice;   // tree index per inserted point
  std::vector<VertexSet> inserted;   // vertex ids of each inserted tree
  std::vector<VertexId> component_vertex;
};

struct FiberStrata {
  std::vector<int> points;             // indices of the points that get trees
  std::vector<std::size_t> per_point;  // tree counts
  std::vector<FiberGraph> graphs;      // product order, last point fastest
  bool moduli_positive = false;        // some point is not quasi-separating
};

/// Replaces every (0,m) point with m + #legs >= 3 by each stable genus-0 tree
/// whose first m leaves go to the slots in order and the rest carry the
/// point's legs. Nodes become edges.
FiberStrata fiber_strata(const AxisGraph& a);

}  // namespace torelli
