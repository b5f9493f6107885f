#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "torelli/canonical.hpp"
#include "torelli/graph.hpp"

namespace torelli {

struct EnumerationOptions {
  int bound = 8;  // cap on 3g - 3 + n
  int jobs = 1;
};

/// Every stable graph of type (g, n) up to isomorphism. Entries are stored in
/// canonical vertex order and sorted by canonical key.
struct GraphCatalog {
  int g = 0;
  int n = 0;
  std::vector<Graph> graphs;
  std::vector<CanonicalKey> keys;
  std::unordered_map<CanonicalKey, std::size_t> index;

  std::size_t size() const { return graphs.size(); }
  // Position of the entry with this key, or -1.
  long find(const CanonicalKey& key) const;
};

GraphCatalog enumerate_stable_graphs(int g, int n, const EnumerationOptions& options = {});

/// Builds a catalog from already canonical representatives (used when loading
/// from disk). Sorts and indexes; throws StructuralError on duplicates.
GraphCatalog make_catalog(int g, int n, std::vector<Graph> graphs);

struct Contraction {
  Graph graph;
  // vertex_image[v] = vertex of `graph` that v is merged into.
  std::vector<VertexId> vertex_image;
};

/// Contracts every edge in S. Non-loop edges merge their endpoints (genera
/// add); loops are deleted and raise the genus of their vertex by one.
Contraction contract_edges_with_map(const Graph& g, const std::vector<EdgeId>& S);
Graph contract_edges(const Graph& g, const std::vector<EdgeId>& S);

/// Target-first record of Γ₁ ⤳ Γ₂: contracting `edges` in catalog entry
/// `target` gives catalog entry `source`. `M[v]` is the vertex set of the
/// target collapsing onto vertex v of the source (catalog vertex ids).
struct Degeneration {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<EdgeId> edges;
  std::vector<VertexSet> M;
};

/// Calls f once per edge subset of catalog entry `target`.
void for_each_degeneration(const GraphCatalog& catalog, std::size_t target,
                           const std::function<void(const Degeneration&)>& f);
/// All degenerations of the catalog, ordered by target then subset bitmask.
void for_each_degeneration(const GraphCatalog& catalog,
                           const std::function<void(const Degeneration&)>& f);
std::vector<Degeneration> degenerations_between(const GraphCatalog& catalog);

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Each thread gets
/// a contiguous block, so per-index results stay deterministic.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace torelli
