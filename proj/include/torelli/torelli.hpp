#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torelli/axis.hpp"
#include "torelli/graph.hpp"

namespace torelli {

/// Disjoint union of almost stable pieces, legs forgotten. vertex_origin maps
/// each vertex back to the graph it came from.
struct PolystableGraph {
  Graph graph;
  std::vector<VertexId> vertex_origin;
};

/// Contracts genus-0 vertices of valence 1 (tails) and valence 2 without a
/// loop (bridges; the two edges fuse, becoming a loop if they share the other
/// endpoint) until none remain. Input must have no legs or branch points.
/// A nonzero seed shuffles the contraction order.
PolystableGraph stabilize(const Graph& g, std::uint64_t seed = 0);

/// Forget legs, cut the separating edges, stabilize, drop genus-0 pieces.
PolystableGraph pst(const Graph& g);

struct C1Partition {
  std::vector<std::vector<EdgeId>> blocks;  // sorted; ordered by first edge
  std::vector<int> block_of;                // per edge
};

/// S(p) = {p} ∪ separating_edges(Γ ∖ p). Throws DomainError naming a
/// separating edge if Γ has one.
C1Partition c1_sets(const Graph& g);

/// 3 g_v - 3 + val(v) > 0 for some vertex v of each component.
std::vector<bool> moduli_flags(const Graph& g);

struct C1Equivalence {
  bool equivalent = false;
  std::vector<VertexId> vertex_map;
  std::vector<HalfEdgeId> halfedge_map;
  std::vector<int> block_map;
};

/// Direct backtracking search for a genus-preserving vertex bijection with a
/// halfedge bijection over it carrying C1-set preimages onto C1-set
/// preimages. Edge pairings inside a block are not compared.
C1Equivalence c1_equivalent(const Graph& a, const Graph& b);

using TorelliKey = std::string;

/// Canonical form of the vertex/C1-set incidence structure of pst(Γ), with
/// per-component moduli flags. Throws DomainError in genus 0.
TorelliKey torelli_key(const Graph& g);
TorelliKey torelli_key_of_polystable(const Graph& pst_graph);

struct Remnant {
  std::size_t fiber_graph = 0;
  VertexId vertex = 0;  // in the fiber graph
  int valence = 0;      // in pst
};

struct FiberVerdict {
  bool constant = false;
  TorelliKey key;  // when constant
  std::size_t fiber_size = 0;
  std::size_t distinct_keys = 0;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // differing keys
  std::optional<Remnant> remnant;
  std::string reason;
  bool criterion = false;  // every m >= 3 point is quasi-separating
};

/// Torelli classes over the fiber of an axis-like graph. Requires all points
/// of type (0,m), genus >= 1 and no markings on singular points.
FiberVerdict fiber_constant(const AxisGraph& a, int jobs = 1);

}  // namespace torelli
