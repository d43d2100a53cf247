#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sda {

using VertexId = std::uint32_t;
using CommunityId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Where an edge came from. Original edges are never removed by any operation.
enum class Provenance : std::uint8_t { Original, Added, SubstituteLink };

char provenance_code(Provenance p);
std::optional<Provenance> provenance_from_code(char c);

/// Unordered vertex pair, stored with u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  Edge() = default;
  Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  VertexId other(VertexId x) const { return x == u ? v : u; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class GraphErrc {
  Malformed,
  MissingCommunity,
  IsolatedVertex,
  DuplicateEdge,
  SelfLoop,
  CrossCommunity,
  UnknownVertex,
  NonContiguousCommunities,
  InfeasibleSplit,
  MissingEdge,
};

const char* to_string(GraphErrc code);

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  GraphErrc code() const { return code_; }

 private:
  GraphErrc code_;
};

/// Outcome of replacing one vertex by substitutes.
struct SplitRecord {
  VertexId original = kNoVertex;
  std::vector<VertexId> substitutes;
  /// One entry per incident edge of the split vertex: (neighbor, substitute now holding the edge).
  std::vector<std::pair<VertexId, VertexId>> edge_assignment;
  /// Links inserted between consecutive substitutes.
  std::vector<Edge> links;

  friend bool operator==(const SplitRecord&, const SplitRecord&) = default;
};

/// Simple undirected graph with one community label per vertex and a provenance tag per edge.
///
/// Vertex ids are dense indices. Splitting a vertex retires its id and appends substitutes
/// at the end, so after anonymization some ids in [0, id_bound()) may be absent.
/// Each vertex also remembers the input vertex it descends from (its origin).
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over vertices 0..community.size()-1 with the given original edges.
  /// Enforces every load-time invariant (simple, no isolated vertex, contiguous communities).
  static Graph from_edges(std::span<const CommunityId> community, std::span<const Edge> edges);

  /// Like from_edges but vertices flagged absent are skipped (their ids stay reserved).
  static Graph from_parts(std::span<const CommunityId> community, std::span<const std::uint8_t> present,
                          std::span<const std::pair<Edge, Provenance>> edges,
                          std::span<const VertexId> origin = {});

  VertexId id_bound() const { return static_cast<VertexId>(community_.size()); }
  bool contains(VertexId v) const { return v < community_.size() && alive_[v] != 0; }
  std::size_t vertex_count() const { return alive_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t community_count() const { return community_count_; }

  CommunityId community(VertexId v) const { return community_[checked(v)]; }
  VertexId origin(VertexId v) const { return origin_[checked(v)]; }
  std::size_t degree(VertexId v) const { return adjacency_[checked(v)].size(); }
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_[checked(v)]; }

  bool has_edge(VertexId a, VertexId b) const;
  std::optional<Provenance> provenance(VertexId a, VertexId b) const;

  /// Present vertex ids in increasing order.
  std::vector<VertexId> vertices() const;
  /// All edges sorted by (u, v).
  std::vector<std::pair<Edge, Provenance>> edges() const;
  std::size_t max_degree() const;

  /// Adding Edge: connects two distinct non-adjacent vertices of one community; tagged Added.
  void add_edge(VertexId a, VertexId b);

  /// Moves the Added edge (anchor, from) to (anchor, to). The anchor keeps its degree.
  void redirect_added_edge(VertexId anchor, VertexId from, VertexId to);

  /// Splitting Vertex. Replaces v with |target_degrees| substitutes sharing v's community.
  ///
  /// Without links, target_degrees must sum to degree(v). With links, consecutive substitutes
  /// are chained by SubstituteLink edges and target_degrees are the post-link degrees, so they
  /// must sum to degree(v) + 2 * (parts - 1). Every substitute keeps at least one of v's edges.
  /// Incident edges are shuffled with `seed` and dealt out to match the targets.
  SplitRecord split_vertex(VertexId v, std::span<const std::size_t> target_degrees, bool link_substitutes,
                           std::uint64_t seed);

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  static std::uint64_t key(VertexId a, VertexId b) {
    Edge e(a, b);
    return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
  }
  VertexId checked(VertexId v) const {
    if (!contains(v)) throw GraphError(GraphErrc::UnknownVertex, "unknown vertex " + std::to_string(v));
    return v;
  }
  VertexId append_vertex(CommunityId c, VertexId origin);
  void insert_edge(VertexId a, VertexId b, Provenance p);
  void erase_edge(VertexId a, VertexId b);
  void validate_communities();

  std::vector<CommunityId> community_;
  std::vector<VertexId> origin_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::unordered_map<std::uint64_t, Provenance> edges_;
  std::size_t alive_count_ = 0;
  std::size_t community_count_ = 0;
};

/// degree -> number of distinct communities holding at least one vertex of that degree.
std::map<std::size_t, std::size_t> degree_spread(const Graph& g);

/// True iff every vertex's degree class spans at least k communities.
/// Throws std::invalid_argument unless 1 <= k <= community_count().
bool is_k_structurally_diverse(const Graph& g, std::size_t k);

/// Maps every vertex id of `g` to the input vertex it descends from, following the split map.
std::vector<VertexId> resolve_origins(const Graph& g, const std::vector<SplitRecord>& splits);

}  // namespace sda
