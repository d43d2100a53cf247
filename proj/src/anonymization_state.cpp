#include "sda/anonymization_state.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace sda {

void GroupIndex::add(std::size_t degree, CommunityId c) {
  auto& bucket = buckets_[degree];
  ++bucket[c];
  if (bucket.size() >= k_) ksda_.insert(degree);
}

void GroupIndex::remove(std::size_t degree, CommunityId c) {
  auto it = buckets_.find(degree);
  if (it == buckets_.end() || !it->second.contains(c)) throw std::logic_error("removing an absent group member");
  auto& bucket = it->second;
  if (--bucket[c] == 0) bucket.erase(c);
  if (bucket.size() < k_) ksda_.erase(degree);
  if (bucket.empty()) buckets_.erase(it);
}

std::size_t GroupIndex::community_span(std::size_t degree) const {
  auto it = buckets_.find(degree);
  return it == buckets_.end() ? 0 : it->second.size();
}

std::size_t GroupIndex::members(std::size_t degree, CommunityId c) const {
  auto it = buckets_.find(degree);
  if (it == buckets_.end()) return 0;
  auto jt = it->second.find(c);
  return jt == it->second.end() ? 0 : jt->second;
}

std::size_t GroupIndex::members(std::size_t degree) const {
  auto it = buckets_.find(degree);
  if (it == buckets_.end()) return 0;
  std::size_t total = 0;
  for (const auto& [c, n] : it->second) total += n;
  return total;
}

namespace {

std::vector<Cost> split_table(std::size_t degree, const GroupIndex& groups) {
  std::vector<Cost> dp(degree + 1, kInfiniteCost);
  dp[0] = 0;
  for (std::size_t x = 1; x <= degree; ++x) {
    for (std::size_t part : groups.ksda_degrees()) {
      if (part > x) break;
      dp[x] = std::min(dp[x], add_cost(dp[x - part], 1));
    }
  }
  return dp;
}

}  // namespace

Cost single_split_size(std::size_t degree, const GroupIndex& groups) {
  if (degree == 0) return 0;
  return split_table(degree, groups)[degree];
}

std::vector<std::size_t> single_split_parts(std::size_t degree, const GroupIndex& groups) {
  const auto dp = split_table(degree, groups);
  if (degree == 0 || dp[degree] == kInfiniteCost) return {};
  std::vector<std::size_t> parts;
  std::size_t x = degree;
  const auto& degrees = groups.ksda_degrees();
  while (x > 0) {
    for (auto it = degrees.rbegin(); it != degrees.rend(); ++it) {
      if (*it <= x && dp[x - *it] != kInfiniteCost && dp[x - *it] + 1 == dp[x]) {
        parts.push_back(*it);
        x -= *it;
        break;
      }
    }
  }
  return parts;
}

std::vector<std::size_t> linked_split_parts(std::size_t degree, const GroupIndex& groups) {
  if (degree < 2) return {};
  const auto& degrees = groups.ksda_degrees();
  // A chain of p substitutes carries p - 1 links, so the raw shares are g - 2 for every part
  // plus 2 in total for the ends. Parts of degree 3+ act as coins g - 2 summing to d - 2;
  // degree-2 parts add nothing and may only sit at the ends.
  const std::size_t target = degree - 2;
  std::vector<std::size_t> coins;
  for (auto it = degrees.rbegin(); it != degrees.rend(); ++it) {
    if (*it >= 3) coins.push_back(*it - 2);
  }
  std::vector<Cost> best(target + 1, kInfiniteCost);
  best[0] = 0;
  for (std::size_t x = 1; x <= target; ++x) {
    for (std::size_t w : coins) {
      if (w <= x) best[x] = std::min(best[x], add_cost(best[x - w], 1));
    }
  }
  auto rebuild = [&](std::size_t x, std::vector<std::size_t>& out) {
    while (x > 0) {
      for (std::size_t w : coins) {
        if (w <= x && best[x - w] != kInfiniteCost && best[x - w] + 1 == best[x]) {
          out.push_back(w + 2);
          x -= w;
          break;
        }
      }
    }
  };

  std::vector<std::size_t> middle;
  std::size_t twos = 0;
  const bool has_two = degrees.contains(2);
  if (best[target] != kInfiniteCost && best[target] >= 2) {
    rebuild(target, middle);
  } else {
    // At least two coins, or pad the chain with degree-2 ends, whichever is shorter.
    Cost two_coins = kInfiniteCost;
    std::size_t first = 0;
    for (std::size_t w : coins) {
      if (w < target && best[target - w] != kInfiniteCost && add_cost(best[target - w], 1) < two_coins) {
        two_coins = best[target - w] + 1;
        first = w;
      }
    }
    const Cost padded = has_two && best[target] != kInfiniteCost ? 2 : kInfiniteCost;
    if (two_coins == kInfiniteCost && padded == kInfiniteCost) return {};
    if (two_coins <= padded) {
      middle.push_back(first + 2);
      rebuild(target - first, middle);
    } else {
      rebuild(target, middle);
      twos = 2 - middle.size();
    }
  }
  std::sort(middle.rbegin(), middle.rend());
  std::vector<std::size_t> chain;
  if (twos == 2) chain.push_back(2);
  chain.insert(chain.end(), middle.begin(), middle.end());
  if (twos >= 1) chain.push_back(2);
  return chain;
}

std::size_t group_split_size(std::size_t target, const std::vector<std::size_t>& degrees) {
  return 2 * static_cast<std::size_t>(std::count_if(degrees.begin(), degrees.end(), [&](std::size_t d) { return d > target; }));
}

Cost mergence_cost(const VertexOutlook& v, std::size_t target) {
  if (target <= v.degree && target + v.redirectable >= v.degree) return 0;
  return base_mergence_cost(v.degree, v.supply, target);
}

Cost base_mergence_cost(std::size_t degree, std::size_t supply, std::size_t target) {
  if (target < degree) return kInfiniteCost;
  if (target - degree > supply) return kInfiniteCost;
  return target - degree;
}

AnonymizationState::AnonymizationState(Graph g, std::size_t k, ProcessingOrder order, PartnerRule partners,
                                       std::uint64_t seed)
    : graph_(std::move(g)), k_(k), order_(order), partners_(partners), rng_(seed), groups_(k) {
  queue_.resize(graph_.community_count());
  grow_to_graph();
  for (VertexId v : graph_.vertices()) enqueue(v);
}

void AnonymizationState::grow_to_graph() {
  anonymized_.resize(graph_.id_bound(), 0);
  queued_at_.resize(graph_.id_bound(), QueueKey{0, kNoVertex});
}

std::int64_t AnonymizationState::order_key(VertexId v) const {
  const auto d = static_cast<std::int64_t>(graph_.degree(v));
  return order_ == ProcessingOrder::Decreasing ? -d : d;
}

void AnonymizationState::enqueue(VertexId v) {
  QueueKey key{order_key(v), v};
  queue_[graph_.community(v)].insert(key);
  queued_at_[v] = key;
}

void AnonymizationState::dequeue(VertexId v) {
  if (queued_at_[v].second == kNoVertex) return;
  queue_[graph_.community(v)].erase(queued_at_[v]);
  queued_at_[v] = QueueKey{0, kNoVertex};
}

void AnonymizationState::requeue(VertexId v) {
  if (queued_at_[v].second == kNoVertex) return;
  dequeue(v);
  enqueue(v);
}

std::size_t AnonymizationState::pending_communities() const {
  return static_cast<std::size_t>(std::count_if(queue_.begin(), queue_.end(), [](const auto& q) { return !q.empty(); }));
}

std::optional<VertexId> AnonymizationState::next_vertex() const {
  std::optional<QueueKey> best;
  for (const auto& q : queue_) {
    if (!q.empty() && (!best || *q.begin() < *best)) best = *q.begin();
  }
  if (!best) return std::nullopt;
  return best->second;
}

std::size_t AnonymizationState::pending_neighbors_in(VertexId w, CommunityId c) const {
  std::size_t n = 0;
  for (VertexId x : graph_.neighbors(w)) {
    if (!is_anonymized(x) && graph_.community(x) == c) ++n;
  }
  return n;
}

std::vector<Edge> AnonymizationState::redirectable_edges(VertexId v) const {
  std::vector<Edge> out;
  if (is_anonymized(v)) return out;
  const CommunityId c = graph_.community(v);
  for (VertexId w : graph_.neighbors(v)) {
    if (!is_anonymized(w) || graph_.community(w) != c) continue;
    if (graph_.provenance(w, v) != Provenance::Added) continue;
    if (pending_in(c) > pending_neighbors_in(w, c)) out.emplace_back(w, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t AnonymizationState::partner_supply(VertexId v) const {
  const CommunityId c = graph_.community(v);
  const std::size_t self = is_anonymized(v) ? 0 : 1;
  return pending_in(c) - self - pending_neighbors_in(v, c);
}

VertexOutlook AnonymizationState::outlook(VertexId v) const {
  return VertexOutlook{graph_.degree(v), redirectable_edges(v).size(), partner_supply(v)};
}

MergencePlan AnonymizationState::best_mergence(const VertexOutlook& v) const {
  MergencePlan best;
  auto rank = [&](Cost cost, std::size_t d) {
    const std::size_t gap = d > v.degree ? d - v.degree : v.degree - d;
    return std::make_tuple(cost, gap, d);
  };
  for (std::size_t d : groups_.ksda_degrees()) {
    const Cost cost = sda::mergence_cost(v, d);
    if (cost == kInfiniteCost) continue;
    if (best.cost == kInfiniteCost || rank(cost, d) < rank(best.cost, best.target)) best = MergencePlan{cost, d};
  }
  return best;
}

std::vector<VertexId> AnonymizationState::candidate_set(VertexId v) const {
  const CommunityId own = graph_.community(v);
  std::vector<std::tuple<std::int64_t, CommunityId, VertexId>> heads;
  for (CommunityId c = 0; c < queue_.size(); ++c) {
    if (c == own || queue_[c].empty()) continue;
    const QueueKey& head = *queue_[c].begin();
    heads.emplace_back(head.first, c, head.second);
  }
  std::sort(heads.begin(), heads.end());
  std::vector<VertexId> out{v};
  for (std::size_t i = 0; i < heads.size() && out.size() < k_; ++i) out.push_back(std::get<2>(heads[i]));
  return out;
}

CreationPlan AnonymizationState::creation_plan(VertexId v, const VertexOutlook& ov) const {
  CreationPlan plan;
  plan.members = candidate_set(v);
  if (plan.members.size() < k_) return plan;
  std::vector<VertexOutlook> views;
  views.reserve(plan.members.size());
  for (VertexId u : plan.members) views.push_back(u == v ? ov : outlook(u));
  const std::size_t low = ov.degree > ov.redirectable ? ov.degree - ov.redirectable : 1;
  for (std::size_t t = std::max<std::size_t>(low, 1); t <= ov.degree; ++t) {
    Cost total = 0;
    for (const auto& view : views) total = add_cost(total, sda::mergence_cost(view, t));
    if (total < plan.cost) {
      plan.cost = total;
      plan.target = t;
    }
  }
  return plan;
}

std::vector<VertexId> AnonymizationState::pick_pending(CommunityId c, VertexId self, VertexId avoid_neighbors_of,
                                                       std::size_t count) const {
  std::vector<VertexId> out;
  auto consider = [&](VertexId x) {
    if (x == self || graph_.has_edge(avoid_neighbors_of, x)) return;
    out.push_back(x);
  };
  if (partners_ == PartnerRule::Leading) {
    for (auto it = queue_[c].begin(); it != queue_[c].end() && out.size() < count; ++it) consider(it->second);
  } else {
    for (auto it = queue_[c].rbegin(); it != queue_[c].rend() && out.size() < count; ++it) consider(it->second);
  }
  return out;
}

void AnonymizationState::adjust_degree(VertexId v, std::size_t target) {
  const std::size_t d = graph_.degree(v);
  const CommunityId c = graph_.community(v);
  if (target > d) {
    const auto partners = pick_pending(c, v, v, target - d);
    if (partners.size() != target - d) throw std::logic_error("not enough partners to raise the degree");
    for (VertexId p : partners) {
      graph_.add_edge(v, p);
      if (graph_.origin(v) != graph_.origin(p)) ++added_edges_;
      log_.push_back("ADD " + std::to_string(v) + " " + std::to_string(p));
      requeue(p);
    }
    requeue(v);
  } else if (target < d) {
    const auto movable = redirectable_edges(v);
    if (movable.size() < d - target) throw std::logic_error("not enough redirectable edges to lower the degree");
    for (std::size_t i = 0; i < d - target; ++i) {
      const VertexId anchor = movable[i].other(v);
      const auto x = pick_pending(c, v, anchor, 1);
      if (x.empty()) throw std::logic_error("redirect target vanished");
      redirect_edge(movable[i], x.front());
    }
  }
}

void AnonymizationState::redirect_edge(Edge old, VertexId x) {
  if (graph_.provenance(old.u, old.v) != Provenance::Added) throw std::invalid_argument("only added edges can be redirected");
  const bool u_done = is_anonymized(old.u);
  const bool v_done = is_anonymized(old.v);
  if (u_done == v_done) throw std::invalid_argument("redirect needs one anonymized and one pending endpoint");
  const VertexId anchor = u_done ? old.u : old.v;
  const VertexId from = old.other(anchor);
  if (is_anonymized(x) || !graph_.contains(x) || x == from) throw std::invalid_argument("redirect target must be another pending vertex");
  if (graph_.community(x) != graph_.community(from)) throw std::invalid_argument("redirect target outside the community");
  if (graph_.has_edge(anchor, x)) throw std::invalid_argument("redirect target already adjacent to the anchor");

  Redirection r;
  r.before = old;
  r.after = Edge(anchor, x);
  r.anchor = anchor;
  r.anchor_degree_before = graph_.degree(anchor);
  graph_.redirect_added_edge(anchor, from, x);
  r.anchor_degree_after = graph_.degree(anchor);
  if (graph_.origin(anchor) != graph_.origin(from)) --added_edges_;
  if (graph_.origin(anchor) != graph_.origin(x)) ++added_edges_;
  redirections_.push_back(r);
  log_.push_back("REDIR " + std::to_string(anchor) + " " + std::to_string(from) + " -> " + std::to_string(x));
  requeue(from);
  requeue(x);
}

void AnonymizationState::anonymize(VertexId v) {
  if (is_anonymized(v)) return;
  dequeue(v);
  anonymized_[v] = 1;
  groups_.add(graph_.degree(v), graph_.community(v));
}

void AnonymizationState::reopen(VertexId v) {
  if (!is_anonymized(v)) return;
  groups_.remove(graph_.degree(v), graph_.community(v));
  anonymized_[v] = 0;
  enqueue(v);
}

SplitRecord AnonymizationState::split(VertexId v, const std::vector<std::size_t>& targets, bool link) {
  if (is_anonymized(v)) throw std::logic_error("only pending vertices are split");
  dequeue(v);
  SplitRecord rec = graph_.split_vertex(v, targets, link, rng_());
  grow_to_graph();
  std::string line = "SPLIT " + std::to_string(v) + " ->";
  for (VertexId s : rec.substitutes) {
    enqueue(s);
    line += " " + std::to_string(s);
  }
  log_.push_back(std::move(line));
  split_vertices_ += rec.substitutes.size() - 1;
  splits_.push_back(rec);
  return rec;
}

}  // namespace sda
