#include "sda/anonymizer.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sda {
namespace {

enum class SplitStrategy { None, CreateSplit, MergeSplit, FlexSplit };

struct Profile {
  ProcessingOrder order;
  PartnerRule partners;
  SplitStrategy strategy;
  bool edges_enabled;
  bool linked_single_split = false;
};

Profile profile_of(Algorithm a) {
  switch (a) {
    case Algorithm::EdgeConnect:
      return {ProcessingOrder::Decreasing, PartnerRule::Leading, SplitStrategy::None, true};
    case Algorithm::InverseEdgeConnect:
      return {ProcessingOrder::Decreasing, PartnerRule::Trailing, SplitStrategy::None, true};
    case Algorithm::CreateBySplit:
      return {ProcessingOrder::Decreasing, PartnerRule::Leading, SplitStrategy::CreateSplit, true};
    case Algorithm::MergeBySplit:
      return {ProcessingOrder::Increasing, PartnerRule::Leading, SplitStrategy::MergeSplit, true};
    case Algorithm::FlexSplit:
      return {ProcessingOrder::Increasing, PartnerRule::Leading, SplitStrategy::FlexSplit, true, true};
    case Algorithm::SplittingOnly:
      return {ProcessingOrder::Increasing, PartnerRule::Leading, SplitStrategy::FlexSplit, false, true};
  }
  throw std::invalid_argument("unknown algorithm");
}

class Engine {
 public:
  Engine(const Graph& g, std::size_t k, Profile profile, std::uint64_t omega, std::uint64_t seed)
      : st_(g, k, profile.order, profile.partners, seed), profile_(profile), omega_(omega), k_(k),
        community_size_(g.community_count(), 0) {
    for (VertexId v : g.vertices()) ++community_size_[g.community(v)];
  }

  bool run() {
    const std::size_t guard = 64 * (st_.graph().vertex_count() + st_.graph().edge_count()) + 1024;
    for (std::size_t iter = 0; auto next = st_.next_vertex(); ++iter) {
      if (iter > guard) {
        st_.log().push_back("FAIL iteration guard");
        return false;
      }
      if (!step(*next)) {
        st_.log().push_back("FAIL " + std::to_string(*next));
        return false;
      }
    }
    return true;
  }

  AnonymizationState& state() { return st_; }

 private:
  bool step(VertexId v) {
    const VertexOutlook ov = st_.outlook(v);
    const MergencePlan merge = st_.best_mergence(ov);
    const CreationPlan create = st_.creation_plan(v, ov);
    const Cost edge_cost = std::min(merge.cost, create.cost);

    bool use_edges = false;
    if (edge_cost != kInfiniteCost) {
      if (!profile_.edges_enabled) {
        use_edges = edge_cost == 0;
      } else {
        use_edges = profile_.strategy == SplitStrategy::None || edge_cost < omega_;
      }
    }
    if (use_edges) {
      if (merge.cost <= create.cost) {
        st_.adjust_degree(v, merge.target);
        st_.anonymize(v);
      } else {
        for (VertexId u : create.members) {
          st_.adjust_degree(u, create.target);
          st_.anonymize(u);
        }
      }
      return true;
    }

    switch (profile_.strategy) {
      case SplitStrategy::None:
        return false;
      case SplitStrategy::CreateSplit: {
        const auto members = st_.candidate_set(v);
        if (members.size() < k_) return false;
        split_to_common_degree(members, true, 3);
        return true;
      }
      case SplitStrategy::MergeSplit:
        return merge_split(v);
      case SplitStrategy::FlexSplit:
        return flex_split(v);
    }
    return false;
  }

  /// Brings every member down to the smallest member degree d. Members above d become a
  /// substitute of degree d plus a remainder left pending. Linked pairs end at d and
  /// d_u - d + 2, unlinked ones at d and d_u - d. A link needs d >= 2 so the first substitute
  /// still keeps an original edge; `min_linked_degree` raises that floor.
  void split_to_common_degree(const std::vector<VertexId>& members, bool allow_links, std::size_t min_linked_degree = 2) {
    std::size_t d = st_.graph().degree(members.front());
    for (VertexId u : members) d = std::min(d, st_.graph().degree(u));
    const bool link = allow_links && d >= std::max<std::size_t>(2, min_linked_degree);
    for (VertexId u : members) {
      const std::size_t du = st_.graph().degree(u);
      if (du == d) {
        st_.anonymize(u);
        continue;
      }
      const std::vector<std::size_t> targets = link ? std::vector<std::size_t>{d, du - d + 2}
                                                    : std::vector<std::size_t>{d, du - d};
      const SplitRecord rec = split(u, targets, link);
      st_.anonymize(rec.substitutes.front());
    }
  }

  /// Cohorts of existing groups. FS keeps the cohorts chained by links when some chain fits,
  /// which keeps every neighbor of v reachable from every substitute.
  bool single_split(VertexId v) {
    const std::size_t d = st_.graph().degree(v);
    if (st_.groups().is_ksda(d)) {
      st_.anonymize(v);
      return true;
    }
    bool link = false;
    std::vector<std::size_t> parts;
    if (profile_.linked_single_split) {
      parts = linked_split_parts(d, st_.groups());
      link = !parts.empty();
    }
    if (parts.empty()) parts = single_split_parts(d, st_.groups());
    if (parts.empty()) return false;
    const SplitRecord rec = split(v, parts, link);
    for (VertexId s : rec.substitutes) st_.anonymize(s);
    return true;
  }

  bool merge_split(VertexId v) {
    if (single_split(v)) return true;
    const auto members = st_.candidate_set(v);
    if (members.size() >= k_) {
      split_to_common_degree(members, false);
      return true;
    }
    return rescue(v);
  }

  bool can_create_by_edges(VertexId u, std::size_t target) const {
    const Cost c = st_.mergence_cost(u, target);
    return profile_.edges_enabled ? c != kInfiniteCost : c == 0;
  }

  bool can_merge_by_edges(VertexId u, std::size_t dmax) const {
    const Cost c = st_.mergence_cost(u, dmax);
    if (!profile_.edges_enabled) return c == 0;
    if (c == kInfiniteCost) return false;
    const auto& g = st_.graph();
    const auto headroom = static_cast<std::int64_t>(community_size_[g.community(u)]) - static_cast<std::int64_t>(g.degree(u)) - 1;
    return static_cast<std::int64_t>(c) <= headroom;
  }

  SplitRecord split(VertexId v, const std::vector<std::size_t>& targets, bool link) {
    community_size_[st_.graph().community(v)] += targets.size() - 1;
    return st_.split(v, targets, link);
  }

  bool flex_split(VertexId v) {
    const auto members = st_.candidate_set(v);
    if (members.size() < k_) return single_split(v) || rescue(v);

    const auto& g = st_.graph();
    const std::size_t dv = g.degree(v);
    std::vector<std::size_t> degrees;
    for (VertexId u : members) degrees.push_back(g.degree(u));
    const Cost group_cost = group_split_size(dv, degrees);

    // Look-ahead set: members that Adding Edge cannot place in this creation, widened to
    // every member no larger than the largest such vertex, minus those mergeable into the
    // largest existing group.
    std::size_t widest = 0;
    bool any_blocked = false;
    for (VertexId u : members) {
      if (!can_create_by_edges(u, dv)) {
        any_blocked = true;
        widest = std::max(widest, g.degree(u));
      }
    }
    Cost single_cost = 0;
    if (any_blocked) {
      const auto& ksda = st_.groups().ksda_degrees();
      for (VertexId u : members) {
        if (g.degree(u) > widest) continue;
        if (!ksda.empty() && can_merge_by_edges(u, *ksda.rbegin())) continue;
        single_cost = add_cost(single_cost, single_split_size(g.degree(u), st_.groups()));
      }
    }

    if (group_cost < single_cost) {
      split_to_common_degree(members, true);
      return true;
    }
    if (single_split(v)) return true;
    split_to_common_degree(members, true);
    return true;
  }

  /// Last resort when no group decomposition exists and fewer than k communities still have
  /// pending vertices: mint a degree-1 group from v and one anonymized vertex in each of k-1
  /// other communities whose departure leaves its own group k-SDA. The donors' remainders go
  /// back to the pending pool.
  bool rescue(VertexId v) {
    const auto& g = st_.graph();
    const CommunityId own = g.community(v);
    GroupIndex trial = st_.groups();
    std::vector<VertexId> donors;
    std::vector<std::vector<VertexId>> by_community(g.community_count());
    for (VertexId x : g.vertices()) {
      if (st_.is_anonymized(x) && g.degree(x) >= 2 && g.community(x) != own) by_community[g.community(x)].push_back(x);
    }
    for (auto& list : by_community) {
      std::sort(list.begin(), list.end(), [&](VertexId a, VertexId b) {
        return std::make_pair(g.degree(a), a) < std::make_pair(g.degree(b), b);
      });
    }
    for (CommunityId c = 0; c < by_community.size() && donors.size() + 1 < k_; ++c) {
      for (VertexId x : by_community[c]) {
        const std::size_t d = g.degree(x);
        if (trial.members(d, c) > 1 || trial.community_span(d) > k_) {
          trial.remove(d, c);
          donors.push_back(x);
          break;
        }
      }
    }
    if (donors.size() + 1 < k_) return false;

    st_.log().push_back("RESCUE " + std::to_string(v));
    auto peel = [&](VertexId x) {
      const std::size_t d = st_.graph().degree(x);
      if (d == 1) {
        st_.anonymize(x);
        return;
      }
      const SplitRecord rec = split(x, {1, d - 1}, false);
      st_.anonymize(rec.substitutes.front());
    };
    for (VertexId x : donors) {
      st_.reopen(x);
      peel(x);
    }
    peel(v);
    return true;
  }

  AnonymizationState st_;
  Profile profile_;
  std::uint64_t omega_;
  std::size_t k_;
  std::vector<std::size_t> community_size_;
};

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::EdgeConnect: return "ec";
    case Algorithm::CreateBySplit: return "cbs";
    case Algorithm::MergeBySplit: return "mbs";
    case Algorithm::FlexSplit: return "fs";
    case Algorithm::InverseEdgeConnect: return "iec";
    case Algorithm::SplittingOnly: return "sonly";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::EdgeConnect, Algorithm::CreateBySplit, Algorithm::MergeBySplit, Algorithm::FlexSplit,
                      Algorithm::InverseEdgeConnect, Algorithm::SplittingOnly}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

AnonymizationResult anonymize(const Graph& g, const AnonymizerConfig& cfg) {
  if (cfg.k < 1 || cfg.k > g.community_count()) throw std::invalid_argument("k must lie in [1, |C|]");
  const std::uint64_t n = g.vertex_count();
  const std::uint64_t omega = cfg.omega.value_or(std::max<std::uint64_t>(1, n * n));
  if (omega < 1) throw std::invalid_argument("omega must be positive");

  Engine engine(g, cfg.k, profile_of(cfg.algorithm), omega, cfg.seed);
  const bool finished = engine.run();
  AnonymizationState& st = engine.state();

  AnonymizationResult r;
  r.added_edges = st.added_edges();
  r.split_vertices = st.split_vertices();
  r.omega = omega;
  r.cost = r.added_edges + omega * r.split_vertices;
  r.splits = st.splits();
  r.redirections = st.redirections();
  r.log = std::move(st.log());
  r.graph = st.release_graph();
  r.success = finished && is_k_structurally_diverse(r.graph, cfg.k);
  return r;
}

namespace {
AnonymizationResult run_as(const Graph& g, AnonymizerConfig cfg, Algorithm a) {
  cfg.algorithm = a;
  return anonymize(g, cfg);
}
}  // namespace

AnonymizationResult edge_connect(const Graph& g, AnonymizerConfig cfg) { return run_as(g, cfg, Algorithm::EdgeConnect); }
AnonymizationResult create_by_split(const Graph& g, AnonymizerConfig cfg) { return run_as(g, cfg, Algorithm::CreateBySplit); }
AnonymizationResult merge_by_split(const Graph& g, AnonymizerConfig cfg) { return run_as(g, cfg, Algorithm::MergeBySplit); }
AnonymizationResult flex_split(const Graph& g, AnonymizerConfig cfg) { return run_as(g, cfg, Algorithm::FlexSplit); }
AnonymizationResult inverse_edge_connect(const Graph& g, AnonymizerConfig cfg) {
  return run_as(g, cfg, Algorithm::InverseEdgeConnect);
}
AnonymizationResult splitting_only(const Graph& g, AnonymizerConfig cfg) { return run_as(g, cfg, Algorithm::SplittingOnly); }

CostLedger recompute_ledger(const Graph& output, const std::vector<SplitRecord>& splits, std::uint64_t omega) {
  const auto origin = resolve_origins(output, splits);
  CostLedger ledger;
  for (const auto& [e, tag] : output.edges()) {
    if (tag == Provenance::Added && origin[e.u] != origin[e.v]) ++ledger.added_edges;
  }
  for (const SplitRecord& rec : splits) ledger.split_vertices += rec.substitutes.size() - 1;
  ledger.cost = ledger.added_edges + omega * ledger.split_vertices;
  return ledger;
}

CostLedger recompute_ledger(const AnonymizationResult& result) {
  return recompute_ledger(result.graph, result.splits, result.omega);
}

std::string format_cost_summary(const AnonymizationResult& result, std::string_view algorithm, std::size_t k) {
  std::ostringstream out;
  out << "algorithm: " << algorithm << '\n';
  out << "k: " << k << '\n';
  out << "success: " << (result.success ? "true" : "false") << '\n';
  out << "added_edges: " << result.added_edges << '\n';
  out << "split_vertices: " << result.split_vertices << '\n';
  out << "omega: " << result.omega << '\n';
  out << "cost: " << result.cost << '\n';
  out << "redirections: " << result.redirections.size() << '\n';
  out << "splits: " << result.splits.size() << '\n';
  out << "vertices: " << result.graph.vertex_count() << '\n';
  out << "edges: " << result.graph.edge_count() << '\n';
  return out.str();
}

}  // namespace sda
