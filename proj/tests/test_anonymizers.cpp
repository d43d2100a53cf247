#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "sda/anonymizer.hpp"

namespace sda {
namespace {

using test::make_graph;

constexpr Algorithm kAll[] = {Algorithm::EdgeConnect, Algorithm::CreateBySplit, Algorithm::MergeBySplit,
                              Algorithm::FlexSplit,   Algorithm::InverseEdgeConnect, Algorithm::SplittingOnly};
constexpr Algorithm kTotal[] = {Algorithm::MergeBySplit, Algorithm::FlexSplit, Algorithm::SplittingOnly};

AnonymizationResult run(const Graph& g, Algorithm a, std::size_t k, std::uint64_t seed = 0) {
  AnonymizerConfig cfg;
  cfg.k = k;
  cfg.algorithm = a;
  cfg.seed = seed;
  return anonymize(g, cfg);
}

GroupIndex groups_at(std::size_t k, std::initializer_list<std::size_t> degrees) {
  GroupIndex gi(k);
  for (std::size_t d : degrees)
    for (CommunityId c = 0; c < k; ++c) gi.add(d, c);
  return gi;
}

// Fewest parts drawn from `allowed` summing to d, by plain recursion over non-increasing parts.
Cost partition_oracle(std::size_t d, const std::vector<std::size_t>& allowed) {
  Cost best = kInfiniteCost;
  std::function<void(std::size_t, std::size_t, Cost)> go = [&](std::size_t rest, std::size_t cap, Cost used) {
    if (rest == 0) {
      best = std::min(best, used);
      return;
    }
    if (used + 1 >= best) return;
    for (std::size_t p : allowed)
      if (p <= rest && p <= cap) go(rest - p, p, used + 1);
  };
  go(d, d, 0);
  return best;
}

// Fewest chain parts (at least two) with post-link degrees in `allowed`: the two ends carry one
// link, inner parts two, and every part keeps at least one original edge.
std::size_t chain_oracle(std::size_t d, const std::set<std::size_t>& allowed) {
  for (std::size_t p = 2; p <= d; ++p) {
    // Raw shares r_i >= 1 summing to d, r_end = g - 1, r_inner = g - 2.
    std::function<bool(std::size_t, std::size_t)> fill = [&](std::size_t i, std::size_t rest) {
      if (i == p) return rest == 0;
      const std::size_t links = (i == 0 || i + 1 == p) ? 1 : 2;
      for (std::size_t g : allowed) {
        if (g <= links) continue;
        const std::size_t raw = g - links;
        if (raw <= rest && fill(i + 1, rest - raw)) return true;
      }
      return false;
    };
    if (fill(0, d)) return p;
  }
  return 0;
}

TEST(GroupIndex, BecomesGroupAtKCommunities) {
  GroupIndex gi(2);
  gi.add(3, 0);
  gi.add(3, 0);
  EXPECT_FALSE(gi.is_ksda(3));
  gi.add(3, 1);
  EXPECT_TRUE(gi.is_ksda(3));
  EXPECT_EQ(gi.members(3), 3u);
  gi.remove(3, 1);
  EXPECT_FALSE(gi.is_ksda(3));
  EXPECT_EQ(gi.community_span(3), 1u);
}

TEST(SingleSplit, Examples) {
  EXPECT_EQ(single_split_size(5, groups_at(2, {1, 3})), 3u);
  EXPECT_EQ(single_split_parts(5, groups_at(2, {1, 3})), (std::vector<std::size_t>{3, 1, 1}));
  EXPECT_EQ(single_split_size(4, groups_at(2, {4})), 1u);
  EXPECT_EQ(single_split_size(4, GroupIndex(2)), kInfiniteCost);
  EXPECT_TRUE(single_split_parts(4, GroupIndex(2)).empty());
}

TEST(SingleSplit, MatchesPartitionEnumeration) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t d = 1 + rng() % 30;
    std::set<std::size_t> degs;
    std::size_t count = rng() % 5;
    for (std::size_t i = 0; i < count; ++i) degs.insert(1 + rng() % 30);
    GroupIndex gi(2);
    for (std::size_t x : degs) {
      gi.add(x, 0);
      gi.add(x, 1);
    }
    std::vector<std::size_t> allowed(degs.rbegin(), degs.rend());
    const Cost expect = partition_oracle(d, allowed);
    ASSERT_EQ(single_split_size(d, gi), expect) << "d " << d;
    auto parts = single_split_parts(d, gi);
    if (expect == kInfiniteCost) {
      EXPECT_TRUE(parts.empty());
      continue;
    }
    EXPECT_EQ(parts.size(), expect);
    std::size_t sum = 0;
    for (std::size_t p : parts) {
      EXPECT_TRUE(degs.contains(p));
      sum += p;
    }
    EXPECT_EQ(sum, d);
  }
}

TEST(LinkedSplit, ChainsAreValidAndMinimal) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t d = 2 + rng() % 20;
    std::set<std::size_t> degs;
    std::size_t count = 1 + rng() % 4;
    for (std::size_t i = 0; i < count; ++i) degs.insert(1 + rng() % 12);
    GroupIndex gi(2);
    for (std::size_t x : degs) {
      gi.add(x, 0);
      gi.add(x, 1);
    }
    auto chain = linked_split_parts(d, gi);
    const std::size_t expect = chain_oracle(d, degs);
    ASSERT_EQ(chain.size(), expect) << "d " << d;
    if (chain.empty()) continue;
    std::size_t sum = 0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      EXPECT_TRUE(degs.contains(chain[i]));
      const bool end = i == 0 || i + 1 == chain.size();
      EXPECT_GT(chain[i], end ? 1u : 2u);
      sum += chain[i];
    }
    EXPECT_EQ(sum, d + 2 * (chain.size() - 1));
    // The chain must be realizable on an actual vertex.
    std::vector<CommunityId> comm(d + 1, 0);
    std::vector<std::pair<VertexId, VertexId>> star;
    for (VertexId v = 1; v <= d; ++v) star.emplace_back(0, v);
    Graph g = make_graph(comm, star);
    SplitRecord r = g.split_vertex(0, chain, true, trial);
    for (std::size_t i = 0; i < chain.size(); ++i) EXPECT_EQ(g.degree(r.substitutes[i]), chain[i]);
  }
}

TEST(GroupSplit, SizeExamples) {
  EXPECT_EQ(group_split_size(3, {3, 3, 3}), 0u);
  EXPECT_EQ(group_split_size(2, {2, 2, 5}), 2u);
  EXPECT_EQ(group_split_size(1, {1, 4}), 2u);
}

TEST(Mergence, CostExamples) {
  // Groups at {2,5,6}, degree-4 vertex with plenty of partners and nothing to redirect.
  VertexOutlook v{4, 0, 10};
  Cost best = kInfiniteCost;
  std::size_t at = 0;
  for (std::size_t d : {2, 5, 6}) {
    Cost c = mergence_cost(v, d);
    if (c < best) best = c, at = d;
  }
  EXPECT_EQ(best, 1u);
  EXPECT_EQ(at, 5u);
  EXPECT_EQ(mergence_cost(v, 2), kInfiniteCost);
  EXPECT_EQ(mergence_cost(v, 4), 0u);

  VertexOutlook r{4, 2, 0};
  EXPECT_EQ(mergence_cost(r, 3), 0u);
  EXPECT_EQ(mergence_cost(r, 2), 0u);
  EXPECT_EQ(mergence_cost(r, 1), kInfiniteCost);
  EXPECT_EQ(mergence_cost(r, 5), kInfiniteCost);  // no partner left

  EXPECT_EQ(base_mergence_cost(4, 3, 7), 3u);
  EXPECT_EQ(base_mergence_cost(4, 2, 7), kInfiniteCost);
}

TEST(Creation, RaisesPartnerToVertexDegree) {
  // Community 0: vertex 0 with four leaves. Community 1: vertex 5 with two leaves, plus the edge 8-9.
  Graph g = make_graph({0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {5, 6}, {5, 7}, {8, 9}});
  AnonymizationState st(g, 2, ProcessingOrder::Decreasing, PartnerRule::Leading, 0);
  EXPECT_EQ(st.next_vertex(), 0u);
  CreationPlan plan = st.creation_plan(0);
  EXPECT_EQ(plan.cost, 2u);
  EXPECT_EQ(plan.target, 4u);
  EXPECT_EQ(plan.members, (std::vector<VertexId>{0, 5}));
}

TEST(Creation, InfiniteWithoutEnoughCommunities) {
  Graph g = make_graph({0, 0, 0, 1, 1}, {{0, 1}, {1, 2}, {3, 4}});
  AnonymizationState st(g, 2, ProcessingOrder::Decreasing, PartnerRule::Leading, 0);
  st.anonymize(3);
  st.anonymize(4);
  EXPECT_EQ(st.creation_plan(1).cost, kInfiniteCost);
}

TEST(Creation, FreeWhenPeersAlreadyMatch) {
  Graph g = test::two_community_path();
  AnonymizationState st(g, 2, ProcessingOrder::Decreasing, PartnerRule::Leading, 0);
  EXPECT_EQ(st.creation_plan(1).cost, 0u);
}

// Community 0 holds a..e (0..4), community 1 holds f..k (5..10).
// Degrees: c=5, d=3, a=b=2, e=1; f=4, g=3, i=j=2, h=k=1.
Graph redirect_fixture() {
  return make_graph({0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1},
                    {{2, 0}, {2, 1}, {2, 3}, {2, 4}, {2, 5}, {3, 0}, {3, 1}, {5, 8}, {5, 9}, {5, 10}, {6, 7}, {6, 8}, {6, 9}});
}

TEST(Redirect, FirstGroupThenRedirectableEdge) {
  AnonymizationState st(redirect_fixture(), 2, ProcessingOrder::Decreasing, PartnerRule::Leading, 0);
  ASSERT_EQ(st.next_vertex(), 2u);
  EXPECT_EQ(st.best_mergence(st.outlook(2)).cost, kInfiniteCost);
  CreationPlan plan = st.creation_plan(2);
  EXPECT_EQ(plan.cost, 1u);
  EXPECT_EQ(plan.target, 5u);
  EXPECT_EQ(plan.members, (std::vector<VertexId>{2, 5}));

  st.adjust_degree(5, 5);
  EXPECT_EQ(st.graph().provenance(5, 6), Provenance::Added);
  st.anonymize(2);
  st.anonymize(5);
  EXPECT_TRUE(st.groups().is_ksda(5));

  // h (7) is pending and not adjacent to f, so (f,g) can move away from g.
  EXPECT_EQ(st.redirectable_edges(6), (std::vector<Edge>{Edge(5, 6)}));
  EXPECT_TRUE(st.redirectable_edges(7).empty());
  EXPECT_EQ(st.mergence_cost(6, 5), 1u);
  CreationPlan second = st.creation_plan(6);
  EXPECT_EQ(second.cost, 0u);
  EXPECT_EQ(second.members, (std::vector<VertexId>{6, 3}));

  const std::size_t fd = st.graph().degree(5), gd = st.graph().degree(6), hd = st.graph().degree(7);
  const auto added = st.added_edges();
  st.redirect_edge(Edge(5, 6), 7);
  EXPECT_EQ(st.graph().degree(5), fd);
  EXPECT_EQ(st.graph().degree(6), gd - 1);
  EXPECT_EQ(st.graph().degree(7), hd + 1);
  EXPECT_EQ(st.added_edges(), added);
  st.redirect_edge(Edge(5, 7), 6);
  EXPECT_EQ(st.graph().degree(6), gd);
  EXPECT_EQ(st.graph().degree(7), hd);
  // i (8) is already adjacent to f.
  EXPECT_THROW(st.redirect_edge(Edge(5, 6), 8), std::invalid_argument);
}

TEST(Redirect, NoAddedEdgesMeansNothingRedirectable) {
  AnonymizationState st(redirect_fixture(), 2, ProcessingOrder::Decreasing, PartnerRule::Leading, 0);
  for (VertexId v = 0; v < 11; ++v) EXPECT_TRUE(st.redirectable_edges(v).empty());
}

TEST(Redirect, ExcludedWhenAnchorSeesWholeCommunity) {
  // Community 1 = {2,3,4}; 2 is anonymized after an added edge to 3 and is also adjacent to 4.
  Graph g = make_graph({0, 0, 1, 1, 1}, {{0, 1}, {2, 4}, {3, 0}});
  AnonymizationState st(g, 2, ProcessingOrder::Decreasing, PartnerRule::Leading, 0);
  st.mutable_graph_for_testing().add_edge(2, 3);
  st.anonymize(2);
  EXPECT_TRUE(st.redirectable_edges(3).empty());
}

TEST(EdgeConnect, TraceOnRedirectFixture) {
  AnonymizationResult r = edge_connect(redirect_fixture(), {});
  ASSERT_GE(r.log.size(), 2u);
  EXPECT_EQ(r.log[0], "ADD 5 6");
  EXPECT_EQ(r.log[1], "REDIR 5 6 -> 7");
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.split_vertices, 0u);
  EXPECT_TRUE(is_k_structurally_diverse(r.graph, 2));
}

TEST(EdgeConnect, ShortPathAgainstStarFails) {
  AnonymizationResult r = edge_connect(test::short_path_vs_star(), {});
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.split_vertices, 0u);
  AnonymizationResult c = create_by_split(test::short_path_vs_star(), {});
  EXPECT_TRUE(c.success);
  EXPECT_EQ(c.splits.size(), 1u);
  EXPECT_EQ(c.split_vertices, 1u);
  EXPECT_TRUE(is_k_structurally_diverse(c.graph, 2));
}

TEST(InverseEdgeConnect, PartnersComeFromTheTail) {
  // Community 0: 0 has degree 1 (edge to community 1); 1..4 hold degrees 3, 2, 1, 1 among
  // themselves and community 1.
  Graph g = make_graph({0, 0, 0, 0, 0, 1, 1, 1, 1},
                       {{0, 5}, {1, 6}, {1, 7}, {1, 8}, {2, 6}, {2, 7}, {3, 8}, {4, 5}});
  for (PartnerRule rule : {PartnerRule::Leading, PartnerRule::Trailing}) {
    AnonymizationState st(g, 2, ProcessingOrder::Decreasing, rule, 0);
    // Decreasing order within community 0, ties by id: 1, 2, 0, 3, 4.
    std::vector<VertexId> order{1, 2, 0, 3, 4};
    st.adjust_degree(2, 4);
    std::vector<VertexId> expected;
    if (rule == PartnerRule::Leading) {
      for (VertexId x : order)
        if (x != 2 && expected.size() < 2) expected.push_back(x);
    } else {
      for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (*it != 2 && expected.size() < 2) expected.push_back(*it);
    }
    for (VertexId x : expected) EXPECT_EQ(st.graph().provenance(2, x), Provenance::Added) << "partner " << x;
    EXPECT_EQ(st.graph().degree(2), 4u);
  }
}

TEST(Anonymize, AlreadyDiverseCostsNothing) {
  for (Algorithm a : kAll) {
    AnonymizationResult r = run(test::two_community_path(), a, 2);
    EXPECT_TRUE(r.success) << algorithm_name(a);
    EXPECT_EQ(r.cost, 0u);
    EXPECT_EQ(r.added_edges, 0u);
    EXPECT_EQ(r.split_vertices, 0u);
    EXPECT_EQ(r.graph, test::two_community_path());
  }
}

TEST(Anonymize, RejectsBadConfig) {
  Graph g = test::two_community_path();
  EXPECT_THROW(run(g, Algorithm::FlexSplit, 0), std::invalid_argument);
  EXPECT_THROW(run(g, Algorithm::FlexSplit, 3), std::invalid_argument);
  AnonymizerConfig cfg;
  cfg.omega = 0;
  EXPECT_THROW(anonymize(g, cfg), std::invalid_argument);
}

TEST(Anonymize, DefaultOmegaIsSquaredVertexCount) {
  AnonymizationResult r = run(test::short_path_vs_star(), Algorithm::CreateBySplit, 2);
  EXPECT_EQ(r.omega, 49u);
  EXPECT_EQ(r.cost, r.added_edges + 49 * r.split_vertices);
}

TEST(Anonymize, AlgorithmNamesRoundTrip) {
  for (Algorithm a : kAll) EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_FALSE(parse_algorithm("xyz").has_value());
}

// Every original edge of the input, mapped through the split map, is an original edge of the output.
void expect_original_edges_kept(const Graph& in, const AnonymizationResult& r) {
  auto origins = resolve_origins(r.graph, r.splits);
  std::multiset<Edge> kept;
  for (const auto& [e, p] : r.graph.edges())
    if (p == Provenance::Original) kept.insert(Edge(origins[e.u], origins[e.v]));
  std::multiset<Edge> expected;
  for (const auto& [e, p] : in.edges()) expected.insert(e);
  EXPECT_EQ(kept, expected);
}

TEST(Anonymize, PropertiesOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Graph g = seed % 2 ? test::random_graph(40, 4, 0.1, seed) : test::rmat_graph(80, 240, 4, seed);
    for (std::size_t k : {2, 3, 4}) {
      for (Algorithm a : kAll) {
        SCOPED_TRACE(std::string(algorithm_name(a)) + " seed " + std::to_string(seed) + " k " + std::to_string(k));
        AnonymizationResult r = run(g, a, k, seed);
        if (r.success) EXPECT_TRUE(is_k_structurally_diverse(r.graph, k));
        EXPECT_EQ(recompute_ledger(r), (CostLedger{r.added_edges, r.split_vertices, r.cost}));
        expect_original_edges_kept(g, r);
        for (const auto& [e, p] : r.graph.edges())
          if (p == Provenance::Added) EXPECT_EQ(r.graph.community(e.u), r.graph.community(e.v));
        if (a == Algorithm::EdgeConnect || a == Algorithm::InverseEdgeConnect) {
          EXPECT_EQ(r.split_vertices, 0u);
          EXPECT_TRUE(r.splits.empty());
        }
        if (a == Algorithm::MergeBySplit)
          for (const auto& [e, p] : r.graph.edges()) EXPECT_NE(p, Provenance::SubstituteLink);
        if (a == Algorithm::SplittingOnly) EXPECT_EQ(r.added_edges, 0u);
      }
      for (Algorithm a : kTotal) EXPECT_TRUE(run(g, a, k, seed).success) << algorithm_name(a);
    }
  }
}

TEST(Anonymize, DeterministicForSeed) {
  Graph g = test::rmat_graph(120, 400, 5, 3);
  for (Algorithm a : kAll) {
    AnonymizationResult x = run(g, a, 3, 17), y = run(g, a, 3, 17);
    EXPECT_EQ(x.graph, y.graph);
    EXPECT_EQ(x.log, y.log);
    EXPECT_EQ(x.cost, y.cost);
  }
}

TEST(Anonymize, RedirectionsKeepAnchorDegree) {
  std::size_t seen = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    AnonymizationResult r = run(test::rmat_graph(100, 300, 4, seed), Algorithm::EdgeConnect, 2, seed);
    for (const Redirection& red : r.redirections) {
      EXPECT_EQ(red.anchor_degree_before, red.anchor_degree_after);
      ++seen;
    }
  }
  EXPECT_GT(seen, 0u);
}

TEST(SplittingOnly, SplitsLargestDegreesOnly) {
  // A degree-4 hub in community 0 is the only vertex whose degree is missing from community 1.
  Graph g = make_graph({0, 0, 0, 0, 0, 1, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {5, 6}, {7, 8}});
  AnonymizationResult r = splitting_only(g, {});
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.added_edges, 0u);
  ASSERT_EQ(r.splits.size(), 1u);
  EXPECT_EQ(r.splits[0].original, 0u);
  EXPECT_EQ(r.split_vertices, 3u);
}

}  // namespace
}  // namespace sda
