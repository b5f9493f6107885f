#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace torelli {

using VertexId = int;
using HalfEdgeId = int;
using EdgeId = int;

// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<VertexId>;

inline constexpr int kMaxGenus = 1 << 16;

struct HalfEdge {
  VertexId vertex = -1;
  EdgeId edge = -1;  // -1 when unpaired
  int leg = 0;       // marking label; 0 for none
  int origin = -1;   // provenance id carried by unlabeled branch points

  bool operator==(const HalfEdge&) const = default;
};

/// Half-edge multigraph with genus-decorated vertices.
///
/// Paired halfedges form edges (a pair on one vertex is a loop). An unpaired
/// halfedge is either a leg carrying a marking label or an unlabeled branch
/// point left behind by cutting an edge. Vertices may carry an integer tag
/// that canonicalization treats as part of the vertex colour; ordinary dual
/// graphs leave every tag at 0.
class Graph {
 public:
  VertexId add_vertex(int genus, int tag = 0);
  EdgeId add_edge(VertexId u, VertexId v);
  HalfEdgeId add_leg(VertexId v, int label);
  HalfEdgeId add_branch_point(VertexId v, int origin = -1);
  HalfEdgeId add_halfedge(VertexId v);
  EdgeId pair(HalfEdgeId a, HalfEdgeId b);
  void set_leg(HalfEdgeId h, int label);
  void set_genus(VertexId v, int genus);
  void set_tag(VertexId v, int tag);

  int num_vertices() const { return static_cast<int>(genus_.size()); }
  int num_halfedges() const { return static_cast<int>(half_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  int vertex_genus(VertexId v) const { return genus_[v]; }
  int vertex_tag(VertexId v) const { return tag_[v]; }
  const HalfEdge& halfedge(HalfEdgeId h) const { return half_[h]; }
  std::array<HalfEdgeId, 2> edge(EdgeId e) const { return edges_[e]; }
  std::array<VertexId, 2> endpoints(EdgeId e) const {
    return {half_[edges_[e][0]].vertex, half_[edges_[e][1]].vertex};
  }
  bool is_loop(EdgeId e) const;
  HalfEdgeId partner(HalfEdgeId h) const;
  bool is_leg(HalfEdgeId h) const { return half_[h].edge < 0 && half_[h].leg > 0; }
  bool is_branch_point(HalfEdgeId h) const {
    return half_[h].edge < 0 && half_[h].leg == 0;
  }

  // Number of halfedges at v: loops count twice, legs and branch points once.
  int valence(VertexId v) const;
  std::vector<std::vector<HalfEdgeId>> incidence() const;
  // (label, halfedge) pairs sorted by label.
  std::vector<std::pair<int, HalfEdgeId>> legs() const;
  int num_legs() const;
  int num_branch_points() const;

  // Checks ids, the pairing involution and label uniqueness. Branch points
  // are allowed. Throws StructuralError.
  void validate() const;
  // validate() plus: no branch points, labels are exactly 1..n, connected,
  // genera within range.
  void validate_dual_graph() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<int> genus_;
  std::vector<int> tag_;
  std::vector<HalfEdge> half_;
  std::vector<std::array<HalfEdgeId, 2>> edges_;
};

/// Result of splitting a graph: one connected piece together with the ids its
/// vertices and halfedges had in the host.
struct Piece {
  Graph graph;
  std::vector<VertexId> vertex_origin;
  std::vector<HalfEdgeId> halfedge_origin;
};

/// Arithmetic genus sum_v g_v + #edges - #vertices + 1.
int genus(const Graph& g);
/// Sum over connected components of their arithmetic genera.
int total_genus(const Graph& g);

bool is_connected(const Graph& g);
int num_components(const Graph& g);
// Component index per vertex, numbered in order of first vertex.
std::vector<int> component_labels(const Graph& g);
std::vector<int> component_labels(const Graph& g, std::span<const char> edge_removed);

/// 2 g_v - 2 + val(v) > 0 at every vertex and the graph is connected.
bool is_stable(const Graph& g);

/// Non-loop edges whose deletion increases the number of components.
std::vector<EdgeId> separating_edges(const Graph& g);
/// Same, computed on g with the edges flagged in `edge_removed` deleted.
/// Returned ids refer to g.
std::vector<EdgeId> separating_edges(const Graph& g, std::span<const char> edge_removed);

/// Cuts the listed edges, turning both halfedges of each into branch points
/// whose origin is the cut edge id. Halfedge ids are preserved; surviving
/// edges are renumbered in order.
Graph cut_edges(const Graph& g, std::span<const EdgeId> cut);

std::vector<Piece> split_components(const Graph& g);

/// Normalization at a set of edges: cut them and return connected pieces.
std::vector<Piece> normalize_at(const Graph& g, std::span<const EdgeId> cut);

/// Removes every unpaired halfedge (legs and branch points).
Graph forget_markings(const Graph& g);

Graph disjoint_union(const Graph& a, const Graph& b);

/// Complete subgraph on `vertices`; attaching edges become branch points
/// whose origin is the host edge id. Legs inside are kept.
Piece induced_subgraph(const Graph& g, const VertexSet& vertices);

std::vector<EdgeId> internal_edges(const Graph& g, const VertexSet& vertices);
std::vector<EdgeId> attaching_edges(const Graph& g, const VertexSet& vertices);
/// Genus of the complete subgraph on `vertices` (must be connected in g).
int subgraph_genus(const Graph& g, const VertexSet& vertices);

VertexSet make_vertex_set(std::vector<VertexId> v);

}  // namespace torelli
