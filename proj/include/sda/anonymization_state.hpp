#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "sda/graph.hpp"

namespace sda {

/// Non-negative cost with a saturating infinity.
using Cost = std::uint64_t;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

inline Cost add_cost(Cost a, Cost b) {
  if (a == kInfiniteCost || b == kInfiniteCost || a > kInfiniteCost - b) return kInfiniteCost;
  return a + b;
}

/// Anonymized vertices bucketed by degree, with the communities each bucket spans.
/// A bucket spanning at least k communities is a k-SDA group.
class GroupIndex {
 public:
  explicit GroupIndex(std::size_t k) : k_(k) {}

  void add(std::size_t degree, CommunityId c);
  void remove(std::size_t degree, CommunityId c);

  std::size_t k() const { return k_; }
  bool is_ksda(std::size_t degree) const { return ksda_.contains(degree); }
  /// Degrees of all k-SDA groups, ascending.
  const std::set<std::size_t>& ksda_degrees() const { return ksda_; }
  std::size_t community_span(std::size_t degree) const;
  std::size_t members(std::size_t degree, CommunityId c) const;
  std::size_t members(std::size_t degree) const;

 private:
  std::size_t k_;
  std::unordered_map<std::size_t, std::map<CommunityId, std::size_t>> buckets_;
  std::set<std::size_t> ksda_;
};

/// Fewest substitutes whose degrees are all k-SDA group degrees and sum to `degree`.
/// kInfiniteCost when no such decomposition exists.
Cost single_split_size(std::size_t degree, const GroupIndex& groups);

/// One optimal decomposition for single_split_size, parts in descending order (empty if none).
/// Among optimal decompositions the lexicographically largest is returned.
std::vector<std::size_t> single_split_parts(std::size_t degree, const GroupIndex& groups);

/// Fewest chain-linked substitutes (at least two) whose post-link degrees are all k-SDA group
/// degrees, in chain order. Empty when no such chain exists.
std::vector<std::size_t> linked_split_parts(std::size_t degree, const GroupIndex& groups);

/// Substitutes minted when members of `degrees` are split down to `target`:
/// two for every member strictly above the target.
std::size_t group_split_size(std::size_t target, const std::vector<std::size_t>& degrees);

/// What the mergence cost needs to know about one not-yet-anonymized vertex.
struct VertexOutlook {
  std::size_t degree = 0;
  /// |R_v|: added edges that can be redirected away from the vertex.
  std::size_t redirectable = 0;
  /// Not-yet-anonymized non-neighbors available as new partners in the same community.
  std::size_t supply = 0;
};

/// Cost of moving a vertex to `target`: free inside the redirect window
/// [degree - redirectable, degree], one edge per unit above it when enough partners exist,
/// infinite otherwise.
Cost mergence_cost(const VertexOutlook& v, std::size_t target);

/// The redirect-free form: target - degree when target >= degree (and partners suffice).
Cost base_mergence_cost(std::size_t degree, std::size_t supply, std::size_t target);

enum class ProcessingOrder { Decreasing, Increasing };
enum class PartnerRule { Leading, Trailing };

struct MergencePlan {
  Cost cost = kInfiniteCost;
  std::size_t target = 0;
};

struct CreationPlan {
  Cost cost = kInfiniteCost;
  std::size_t target = 0;
  std::vector<VertexId> members;
};

struct Redirection {
  Edge before;
  Edge after;
  VertexId anchor = kNoVertex;
  std::size_t anchor_degree_before = 0;
  std::size_t anchor_degree_after = 0;
};

/// Mutable bookkeeping shared by all heuristics: the working graph, which vertices are
/// anonymized, the per-community orders of the rest, and the k-SDA group index.
///
/// Anonymized vertices never change degree: new partners and redirect targets are always
/// drawn from not-yet-anonymized vertices.
class AnonymizationState {
 public:
  AnonymizationState(Graph g, std::size_t k, ProcessingOrder order, PartnerRule partners, std::uint64_t seed);

  const Graph& graph() const { return graph_; }
  Graph& mutable_graph_for_testing() { return graph_; }
  const GroupIndex& groups() const { return groups_; }
  std::size_t k() const { return k_; }
  bool is_anonymized(VertexId v) const { return v < anonymized_.size() && anonymized_[v] != 0; }
  std::size_t pending_in(CommunityId c) const { return queue_[c].size(); }
  std::size_t pending_communities() const;

  /// Next vertex in processing order (largest or smallest degree first, ties by id).
  std::optional<VertexId> next_vertex() const;

  /// R_v: added edges (w, v) with w anonymized and some other pending vertex of v's
  /// community not adjacent to w.
  std::vector<Edge> redirectable_edges(VertexId v) const;
  std::size_t partner_supply(VertexId v) const;
  VertexOutlook outlook(VertexId v) const;
  Cost mergence_cost(VertexId v, std::size_t target) const { return sda::mergence_cost(outlook(v), target); }

  /// Cheapest existing k-SDA group for v. Ties: closest degree, then smaller degree.
  MergencePlan best_mergence(const VertexOutlook& v) const;

  /// v plus the head of every other community's order, keeping the k-1 best heads
  /// (ties by community id). Fewer than k members means no new group can be formed.
  std::vector<VertexId> candidate_set(VertexId v) const;

  /// New group around v. The first evaluated target is degree - |R_v|; the redirect
  /// window up to degree is scanned and the first minimum kept.
  CreationPlan creation_plan(VertexId v, const VertexOutlook& ov) const;
  CreationPlan creation_plan(VertexId v) const { return creation_plan(v, outlook(v)); }

  /// Raises via new edges or lowers via redirection. Requires a finite mergence cost.
  void adjust_degree(VertexId v, std::size_t target);
  /// Moves the added edge `old` away from its pending endpoint to pending vertex x.
  void redirect_edge(Edge old, VertexId x);
  void anonymize(VertexId v);
  /// Returns an anonymized vertex to the pending pool (removes it from its group).
  void reopen(VertexId v);
  SplitRecord split(VertexId v, const std::vector<std::size_t>& targets, bool link);

  std::uint64_t added_edges() const { return added_edges_; }
  std::uint64_t split_vertices() const { return split_vertices_; }
  const std::vector<SplitRecord>& splits() const { return splits_; }
  const std::vector<Redirection>& redirections() const { return redirections_; }
  std::vector<std::string>& log() { return log_; }
  Graph release_graph() { return std::move(graph_); }

 private:
  using QueueKey = std::pair<std::int64_t, VertexId>;

  std::int64_t order_key(VertexId v) const;
  void enqueue(VertexId v);
  void dequeue(VertexId v);
  void requeue(VertexId v);
  void grow_to_graph();
  std::size_t pending_neighbors_in(VertexId w, CommunityId c) const;
  std::vector<VertexId> pick_pending(CommunityId c, VertexId self, VertexId avoid_neighbors_of, std::size_t count) const;

  Graph graph_;
  std::size_t k_;
  ProcessingOrder order_;
  PartnerRule partners_;
  std::mt19937_64 rng_;
  std::vector<std::uint8_t> anonymized_;
  std::vector<std::set<QueueKey>> queue_;
  std::vector<QueueKey> queued_at_;
  GroupIndex groups_;
  std::uint64_t added_edges_ = 0;
  std::uint64_t split_vertices_ = 0;
  std::vector<SplitRecord> splits_;
  std::vector<Redirection> redirections_;
  std::vector<std::string> log_;
};

}  // namespace sda
