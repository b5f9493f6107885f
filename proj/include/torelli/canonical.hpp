#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torelli/graph.hpp"

namespace torelli {

/// Byte string identifying a graph up to isomorphism (leg labels fixed,
/// branch points unlabeled, vertex tags respected).
using CanonicalKey = std::string;

struct CanonicalLabeling {
  CanonicalKey key;
  // position[v] = index of v in the canonical vertex order.
  std::vector<int> position;
};

/// Colour refinement on (tag, genus, loops, branch points, legs, valence),
/// then individualization over the smallest non-singleton cell. Every leaf of
/// the search tree is visited; the lexicographically least adjacency encoding
/// wins. Works on disconnected graphs.
CanonicalLabeling canonical_labeling(const Graph& g);
CanonicalKey canonical_form(const Graph& g);

/// Rebuilds g with vertices in canonical order, edges sorted by endpoint
/// positions, then legs by label, then branch points.
Graph canonical_relabel(const Graph& g, const std::vector<int>& position);
Graph canonical_representative(const Graph& g);

struct Automorphism {
  std::vector<VertexId> vertex_map;
  std::vector<HalfEdgeId> halfedge_map;
};

struct AutomorphismGroup {
  std::vector<Automorphism> generators;
  // Order of the full group acting on vertices and halfedges.
  std::uint64_t order = 1;
  // Every vertex permutation induced by some automorphism.
  std::vector<std::vector<VertexId>> vertex_permutations;
};

AutomorphismGroup automorphisms(const Graph& g);

/// Lifts a vertex automorphism to a halfedge map, pairing parallel edges,
/// loops and branch points in id order.
std::vector<HalfEdgeId> lift_to_halfedges(const Graph& g, const std::vector<VertexId>& vertex_map);

std::string to_hex(const CanonicalKey& key);
CanonicalKey from_hex(const std::string& hex);

}  // namespace torelli
