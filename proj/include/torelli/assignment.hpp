#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torelli/enumerate.hpp"
#include "torelli/graph.hpp"

namespace torelli {

enum class BridgeClass { Separating, QuasiSeparating, General };

std::string to_string(BridgeClass c);

/// Classification from an attachment profile (attaching edges per
/// complement component).
BridgeClass classify_profile(const std::vector<int>& profile);

/// A rational multibridge: connected set of genus-0 vertices without legs
/// whose complete subgraph is a tree, attached to the rest by m edges.
struct Multibridge {
  VertexSet vertices;
  int m = 0;
  std::vector<EdgeId> attaching;
  // Attaching edges per connected component of the complement, sorted
  // in decreasing order.
  std::vector<int> profile;
  BridgeClass cls = BridgeClass::General;
  bool maximal = false;
};

struct BridgeReport {
  CanonicalKey host;
  // Every rational multibridge, ordered by (size, vertex list).
  std::vector<Multibridge> bridges;
};

BridgeReport rational_multibridges(const Graph& g);

/// nullopt unless `vertices` spans a rational multibridge of g.
std::optional<Multibridge> classify_multibridge(const Graph& g, const VertexSet& vertices);

/// Union of the vertex sets of all separating rational multibridges.
VertexSet assignment_F(const Graph& g);

/// A rule Γ ↦ Z(Γ). Intrinsic rules are evaluated on the graph; tables are
/// keyed by canonical key with vertex ids of the canonical representative.
class ExtremalAssignment {
 public:
  using Rule = std::function<VertexSet(const Graph&)>;

  static ExtremalAssignment intrinsic(std::string name, Rule rule);
  static ExtremalAssignment builtin_F();
  static ExtremalAssignment table(std::string name, std::map<CanonicalKey, VertexSet> declared,
                                  bool default_empty = false);
  /// {"name":..., "default_empty":bool, "entries":[{"key":hex | "graph":{...},
  /// "vertices":[ids]}]}. With "graph", vertex ids refer to that graph and
  /// are transported to the canonical representative.
  static ExtremalAssignment from_json(const nlohmann::json& j);

  const std::string& name() const { return name_; }
  bool is_table() const { return !rule_; }

  /// Declared set for a canonical representative, or nullopt if a table has
  /// no entry. No closure applied.
  std::optional<VertexSet> declared(const Graph& canonical_graph, const CanonicalKey& key) const;
  /// Declared set closed under the automorphism group (intrinsic rules are
  /// returned as computed).
  std::optional<VertexSet> evaluate(const Graph& canonical_graph, const CanonicalKey& key) const;
  /// Evaluate on any graph (canonicalizes internally); ids refer to g.
  std::optional<VertexSet> evaluate(const Graph& g) const;

 private:
  std::string name_;
  Rule rule_;
  std::map<CanonicalKey, VertexSet> table_;
  bool default_empty_ = false;
};

struct Axiom1Violation {
  std::size_t graph = 0;
  std::string reason;  // "not invariant" or "not proper"
  VertexSet declared;
};

struct Axiom2Violation {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<EdgeId> edges;
  VertexId vertex = 0;  // vertex of the source
  bool in_source = false;
  VertexSet M;
};

struct VerificationReport {
  int g = 0;
  int n = 0;
  std::string assignment;
  std::size_t graphs = 0;
  std::uint64_t degenerations = 0;
  std::vector<Axiom1Violation> axiom1;
  std::vector<Axiom2Violation> axiom2;

  bool ok() const { return axiom1.empty() && axiom2.empty(); }
};

/// Checks both axioms over the catalog and all its degenerations. Throws
/// CoverageError when a table misses a catalog entry.
VerificationReport verify_extremal(const ExtremalAssignment& A, const GraphCatalog& catalog,
                                   int jobs = 1);

/// Every component of the subgraph on Z is a separating or quasi-separating
/// rational multibridge.
bool is_Z_quasi_separating(const Graph& g, const VertexSet& Z);
bool is_Z_quasi_separating(const Graph& g, const ExtremalAssignment& A);

}  // namespace torelli
