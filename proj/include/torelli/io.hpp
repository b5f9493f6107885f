#pragma once

#include <string>

#include <json.hpp>

#include "torelli/graph.hpp"

namespace torelli {

inline constexpr const char* kSchema = "torelli-graphs/1";
inline constexpr const char* kToolVersion = "0.1.0";

/// Graph JSON:
///   {"vertices":[{"id":int,"genus":int}],
///    "halfedges":[{"id":int,"vertex":int}],
///    "edges":[[hid,hid]],
///    "legs":{"1":hid,...}}
/// Unpaired unlabeled halfedges are listed under "branch_points" as
/// {"halfedge":hid,"origin":int}; nonzero vertex tags appear as "tag".
nlohmann::json graph_to_json(const Graph& g);

/// Accepts arbitrary integer ids and renumbers them densely in listed order.
/// Throws ParseError on schema problems and StructuralError on a broken
/// pairing. Unpaired halfedges must be legs unless `allow_branch_points`.
Graph graph_from_json(const nlohmann::json& j, bool allow_branch_points = false);

/// Vertices labeled "v{id}:g{genus}", legs as pendant point nodes labeled by
/// marking.
std::string graph_to_dot(const Graph& g, const std::string& name = "G");

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace torelli
