#include "querygen/subschema.h"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "querygen/error.h"
#include "querygen/hash.h"
#include "querygen/jsonl.h"

namespace querygen {

std::optional<std::size_t> JoinGraph::index_of(const std::string& table) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == table) return i;
  return std::nullopt;
}

const JoinEdge* JoinGraph::find_edge(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges)
    if (e.a == a && e.b == b) return &e;
  return nullptr;
}

std::vector<std::uint64_t> JoinGraph::adjacency() const {
  std::vector<std::uint64_t> adj(nodes.size(), 0);
  for (const auto& e : edges) {
    adj[e.a] |= std::uint64_t{1} << e.b;
    adj[e.b] |= std::uint64_t{1} << e.a;
  }
  return adj;
}

namespace {

JoinGraph build(const SchemaCatalog& catalog, std::optional<FkProvenance> only) {
  JoinGraph g;
  for (const auto& t : catalog.tables) g.nodes.push_back(t.name);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<ForeignKey>> grouped;
  for (const auto& fk : catalog.fk_edges) {
    if (only && fk.provenance != *only) continue;
    auto a = g.index_of(fk.from_table);
    auto b = g.index_of(fk.to_table);
    if (!a || !b) throw UnknownObjectError("foreign key endpoint missing from catalog");
    if (*a == *b) continue;  // self-reference: no edge
    grouped[{std::min(*a, *b), std::max(*a, *b)}].push_back(fk);
  }
  for (auto& [key, fks] : grouped) {
    std::sort(fks.begin(), fks.end(), [](const ForeignKey& x, const ForeignKey& y) {
      if (x.provenance != y.provenance) return x.provenance < y.provenance;
      return x < y;
    });
    g.edges.push_back({key.first, key.second, std::move(fks)});
  }
  return g;
}

std::vector<std::string> names_of(const JoinGraph& g, std::uint64_t mask) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (mask >> i & 1) names.push_back(g.nodes[i]);
  std::sort(names.begin(), names.end());
  return names;
}

struct Enumerator {
  const std::vector<std::uint64_t>& adj;
  std::size_t max_size;
  std::vector<std::uint64_t>& out;

  // `subset` is connected; `frontier` holds extension candidates; `blocked`
  // marks vertices whose supersets are enumerated by another branch.
  void extend(std::uint64_t subset, std::uint64_t frontier, std::uint64_t blocked) {
    out.push_back(subset);
    if (static_cast<std::size_t>(std::popcount(subset)) >= max_size) return;
    while (frontier) {
      const std::uint64_t w = frontier & (~frontier + 1);
      frontier &= ~w;
      const int wi = std::countr_zero(w);
      const std::uint64_t grown = subset | w;
      const std::uint64_t added = adj[static_cast<std::size_t>(wi)] & ~grown & ~frontier & ~blocked;
      extend(grown, frontier | added, blocked);
      blocked |= w;
    }
  }
};

}  // namespace

JoinGraph build_join_graph(const SchemaCatalog& catalog) { return build(catalog, std::nullopt); }

JoinGraph build_join_graph(const SchemaCatalog& catalog, FkProvenance only) {
  return build(catalog, only);
}

std::string subschema_id(const std::vector<std::string>& sorted_tables) {
  std::string joined;
  for (std::size_t i = 0; i < sorted_tables.size(); ++i) {
    if (i) joined += ',';
    joined += sorted_tables[i];
  }
  return stable_hash(joined);
}

std::vector<std::uint64_t> connected_subsets(const JoinGraph& graph,
                                             const EnumerateOptions& options) {
  const std::size_t n = graph.nodes.size();
  if (n > options.safety_limit || n > 63)
    throw GraphTooLargeError("join graph has " + std::to_string(n) +
                             " tables; enumeration limit is " +
                             std::to_string(std::min<std::size_t>(options.safety_limit, 63)));
  const auto adj = graph.adjacency();
  const std::size_t cap = options.max_tables.value_or(n);
  std::vector<std::uint64_t> out;
  if (cap == 0) return out;
  Enumerator e{adj, cap, out};
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint64_t self = std::uint64_t{1} << v;
    const std::uint64_t lower = self - 1;  // smaller indices belong to other anchors
    e.extend(self, adj[v] & ~lower & ~self, lower | self);
  }
  std::erase_if(out, [&](std::uint64_t m) {
    return static_cast<std::size_t>(std::popcount(m)) < options.min_tables;
  });
  return out;
}

std::vector<Subschema> enumerate_subschemas(const JoinGraph& graph,
                                            const EnumerateOptions& options) {
  const auto masks = connected_subsets(graph, options);
  std::vector<Subschema> out;
  out.reserve(masks.size());
  for (auto m : masks) {
    Subschema s;
    s.tables = names_of(graph, m);
    s.id = subschema_id(s.tables);
    s.spanning_joins =
        choose_spanning_joins(graph, std::set<std::string>(s.tables.begin(), s.tables.end()));
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subschema& a, const Subschema& b) {
    if (a.tables.size() != b.tables.size()) return a.tables.size() < b.tables.size();
    return a.tables < b.tables;
  });
  return out;
}

std::vector<ForeignKey> choose_spanning_joins(const JoinGraph& graph,
                                              const std::set<std::string>& tables) {
  std::vector<std::size_t> idx;
  for (const auto& t : tables) {
    auto i = graph.index_of(t);
    if (!i) throw UnknownObjectError("table '" + t + "' is not in the join graph");
    idx.push_back(*i);
  }
  std::vector<const JoinEdge*> induced;
  for (const auto& e : graph.edges)
    if (std::count(idx.begin(), idx.end(), e.a) && std::count(idx.begin(), idx.end(), e.b))
      induced.push_back(&e);
  auto key = [&](const JoinEdge* e) {
    return std::minmax(graph.nodes[e->a], graph.nodes[e->b]);
  };
  std::sort(induced.begin(), induced.end(),
            [&](const JoinEdge* x, const JoinEdge* y) { return key(x) < key(y); });

  std::vector<std::size_t> parent(graph.nodes.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<ForeignKey> joins;
  for (const JoinEdge* e : induced) {
    const auto ra = find(e->a), rb = find(e->b);
    if (ra == rb) continue;
    parent[ra] = rb;
    joins.push_back(e->fks.front());
  }
  if (!tables.empty() && joins.size() + 1 != tables.size()) {
    std::string names;
    for (const auto& t : tables) names += (names.empty() ? "" : ", ") + t;
    throw NotConnectedError("tables {" + names + "} are not connected by foreign keys");
  }
  return joins;
}

bool is_connected(const JoinGraph& graph, const std::set<std::string>& tables) {
  try {
    choose_spanning_joins(graph, tables);
    return true;
  } catch (const NotConnectedError&) {
    return false;
  }
}

nlohmann::ordered_json to_json(const Subschema& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["tables"] = s.tables;
  auto joins = nlohmann::ordered_json::array();
  for (const auto& fk : s.spanning_joins) joins.push_back(to_json(fk));
  j["spanning_joins"] = std::move(joins);
  return j;
}

Subschema subschema_from_json(const nlohmann::json& j) {
  try {
    Subschema s;
    s.id = j.at("id").get<std::string>();
    s.tables = j.at("tables").get<std::vector<std::string>>();
    for (const auto& f : j.at("spanning_joins")) s.spanning_joins.push_back(foreign_key_from_json(f));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed subschema: ") + e.what());
  }
}

void write_subschemas(const std::vector<Subschema>& list, const std::string& path) {
  JsonlWriter w(path, "subschemas");
  for (const auto& s : list) w.write(to_json(s));
}

std::vector<Subschema> read_subschemas(const std::string& path) {
  std::vector<Subschema> out;
  for (const auto& j : read_jsonl(path, "subschemas")) out.push_back(subschema_from_json(j));
  return out;
}

}  // namespace querygen
