#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/catalog.h"

namespace querygen {

struct JoinEdge {
  std::size_t a = 0;  // node indices, a < b
  std::size_t b = 0;
  std::vector<ForeignKey> fks;  // sorted; declared before inferred
};

// Undirected FK graph over tables. Node order follows the catalog.
struct JoinGraph {
  std::vector<std::string> nodes;
  std::vector<JoinEdge> edges;

  std::optional<std::size_t> index_of(const std::string& table) const;
  const JoinEdge* find_edge(std::size_t a, std::size_t b) const;
  // Bitmask of neighbours per node; valid for graphs of at most 64 nodes.
  std::vector<std::uint64_t> adjacency() const;
};

JoinGraph build_join_graph(const SchemaCatalog& catalog);

// Same as build_join_graph but keeps only edges of the given provenance.
JoinGraph build_join_graph(const SchemaCatalog& catalog, FkProvenance only);

struct Subschema {
  std::string id;                   // stable_hash of comma-joined sorted table names
  std::vector<std::string> tables;  // sorted
  std::vector<ForeignKey> spanning_joins;

  friend bool operator==(const Subschema&, const Subschema&) = default;
};

std::string subschema_id(const std::vector<std::string>& sorted_tables);

struct EnumerateOptions {
  std::size_t min_tables = 1;
  std::optional<std::size_t> max_tables;
  std::size_t safety_limit = 24;
};

// Every connected induced vertex subset within the size bounds, once each,
// ordered by size and then by the sorted table-name list.
// Throws GraphTooLargeError when the graph has more than safety_limit nodes.
std::vector<Subschema> enumerate_subschemas(const JoinGraph& graph,
                                            const EnumerateOptions& options = {});

// Only the node bitmasks, in discovery order. Used by enumerate_subschemas.
std::vector<std::uint64_t> connected_subsets(const JoinGraph& graph,
                                             const EnumerateOptions& options = {});

// Kruskal over the induced edges sorted by (table name, table name); one FK
// per chosen edge. Throws NotConnectedError, UnknownObjectError.
std::vector<ForeignKey> choose_spanning_joins(const JoinGraph& graph,
                                              const std::set<std::string>& tables);

bool is_connected(const JoinGraph& graph, const std::set<std::string>& tables);

nlohmann::ordered_json to_json(const Subschema& s);
Subschema subschema_from_json(const nlohmann::json& j);

void write_subschemas(const std::vector<Subschema>& list, const std::string& path);
std::vector<Subschema> read_subschemas(const std::string& path);

}  // namespace querygen
