#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "sda/anonymizer.hpp"
#include "sda/exact.hpp"
#include "sda/io.hpp"

namespace sda {
namespace {

using test::make_graph;

// Path 0-1-2-3 with 0,1,2 in community 0 and 3 in community 1. Ē = {(0,2)}.
Graph four_vertex() { return make_graph({0, 0, 0, 1}, {{0, 1}, {1, 2}, {2, 3}}); }

// Smallest number of candidate edges making g k-diverse, by trying every subset.
std::optional<std::size_t> subset_oracle(const Graph& g, std::size_t k) {
  const auto cand = candidate_edges(g);
  std::optional<std::size_t> best;
  for (std::uint32_t mask = 0; mask < (1u << cand.size()); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (best && size >= *best) continue;
    Graph h = g;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (mask >> i & 1u) h.add_edge(cand[i].u, cand[i].v);
    if (is_k_structurally_diverse(h, k)) best = size;
  }
  return best;
}

// Tiny instances with at most 12 candidate edges.
std::vector<Graph> tiny_family(std::size_t count) {
  std::vector<Graph> out;
  for (std::uint64_t seed = 0; out.size() < count; ++seed) {
    const std::size_t n = 5 + seed % 4;
    Graph g = test::random_graph(n, 2 + seed % 2, 0.3, seed * 7 + 1);
    if (candidate_edges(g).size() <= 12) out.push_back(std::move(g));
  }
  return out;
}

TEST(AddEdgeModel, HandCountsOnFourVertexFixture) {
  IpModel m = build_add_edge_model(four_vertex(), 2);
  // 1 alpha, 4 vertices x D={1,2,3} deltas, 2 communities x 3 thetas.
  EXPECT_EQ(m.variables().size(), 19u);
  EXPECT_EQ(m.count_family(1), 4u);
  EXPECT_EQ(m.count_family(2), 6u);  // pruned (u,d): 0:{3}, 1:{1,3}, 2:{1}, 3:{2,3}
  EXPECT_EQ(m.count_family(3), 4u);
  EXPECT_EQ(m.count_family(4), 6u);  // |D_u| = 2,1,2,1
  EXPECT_EQ(m.count_family(5), 6u);
  EXPECT_EQ(m.count_family(6), 6u);
  EXPECT_EQ(m.constraints().size(), 32u);
  ASSERT_EQ(m.objective().size(), 1u);
  EXPECT_EQ(m.variables()[m.objective()[0].var], "alpha_0_2");
}

TEST(AddEdgeModel, ClosedFormCountsOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = test::random_graph(9, 3, 0.25, seed);
    IpModel m = build_add_edge_model(g, 2);
    const auto cand = candidate_edges(g);
    std::map<VertexId, std::size_t> free;
    for (const Edge& e : cand) ++free[e.u], ++free[e.v];
    std::set<std::size_t> domain;
    std::size_t per_vertex = 0;
    for (VertexId u : g.vertices()) {
      for (std::size_t d = g.degree(u); d <= g.degree(u) + free[u]; ++d) domain.insert(d);
      per_vertex += free[u] + 1;
    }
    const std::size_t V = g.vertex_count(), C = g.community_count(), D = domain.size();
    EXPECT_EQ(m.variables().size(), cand.size() + V * D + C * D);
    EXPECT_EQ(m.count_family(1), V);
    EXPECT_EQ(m.count_family(2), V * D - per_vertex);
    EXPECT_EQ(m.count_family(3), V);
    EXPECT_EQ(m.count_family(4), per_vertex);
    EXPECT_EQ(m.count_family(5), C * D);
    EXPECT_EQ(m.count_family(6), C * D);
  }
}

TEST(AddEdgeModel, InfeasibleFixtureAndTrivialK) {
  Graph g = four_vertex();
  SolveResult two = enumerate_binary_program(build_add_edge_model(g, 2));
  EXPECT_EQ(two.status, SolveStatus::Infeasible);
  SolveResult one = enumerate_binary_program(build_add_edge_model(g, 1));
  ASSERT_EQ(one.status, SolveStatus::Optimal);
  EXPECT_EQ(one.objective, 0);
  EXPECT_THROW(build_add_edge_model(g, 3), std::invalid_argument);
}

TEST(AddEdgeModel, CompleteCommunitiesHaveNoCandidates) {
  Graph g = make_graph({0, 0, 0, 1, 1}, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
  EXPECT_TRUE(candidate_edges(g).empty());
  EXPECT_EQ(solve_binary_program(build_add_edge_model(g, 2)).status, SolveStatus::Infeasible);
  Graph h = make_graph({0, 0, 1, 1}, {{0, 1}, {2, 3}});
  EXPECT_EQ(solve_binary_program(build_add_edge_model(h, 2)).objective, 0);
}

TEST(AddEdgeModel, AgreesWithOracles) {
  std::size_t feasible = 0;
  for (const Graph& g : tiny_family(30)) {
    for (std::size_t k = 2; k <= g.community_count(); ++k) {
      IpModel m = build_add_edge_model(g, k);
      const auto expect = subset_oracle(g, k);
      OracleResult oracle = brute_force_add_edge_optimum(g, k);
      EXPECT_EQ(oracle.cost, expect);
      SolveResult bb = solve_binary_program(m);
      ASSERT_NE(bb.status, SolveStatus::NodeLimit);
      EXPECT_EQ(bb.status == SolveStatus::Optimal, expect.has_value());
      if (expect) {
        ++feasible;
        EXPECT_EQ(bb.objective, static_cast<std::int64_t>(*expect));
        EXPECT_TRUE(satisfies(m, bb.assignment));
        EXPECT_EQ(objective_value(m, bb.assignment), bb.objective);
        Graph h = g;
        for (const Edge& e : oracle.witness) h.add_edge(e.u, e.v);
        EXPECT_TRUE(is_k_structurally_diverse(h, k));
        EXPECT_EQ(oracle.witness.size(), *expect);
      }
    }
  }
  EXPECT_GT(feasible, 5u);
}

TEST(AddEdgeModel, ExhaustiveAssignmentMatchesOracle) {
  std::vector<Graph> small{four_vertex(), make_graph({0, 0, 1, 1}, {{0, 1}, {2, 3}}),
                           make_graph({0, 0, 0, 1, 1}, {{0, 1}, {2, 3}, {3, 4}})};
  for (std::uint64_t seed = 0; small.size() < 40 && seed < 2000; ++seed) {
    Graph g = test::random_graph(4 + seed % 2, 2, 0.4, seed);
    if (build_add_edge_model(g, 2).variables().size() <= 20) small.push_back(std::move(g));
  }
  std::size_t feasible = 0;
  for (const Graph& g : small) {
    for (std::size_t k = 1; k <= g.community_count(); ++k) {
      IpModel m = build_add_edge_model(g, k);
      if (m.variables().size() > 20) continue;
      SolveResult all = enumerate_binary_program(m);
      const auto expect = subset_oracle(g, k);
      ASSERT_EQ(all.status == SolveStatus::Optimal, expect.has_value());
      if (expect) {
        ++feasible;
        EXPECT_EQ(all.objective, static_cast<std::int64_t>(*expect));
      }
    }
  }
  EXPECT_GT(small.size(), 10u);
  EXPECT_GT(feasible, 10u);
}

TEST(Oracle, Examples) {
  Graph two_edges = make_graph({0, 0, 1, 1}, {{0, 1}, {2, 3}});
  EXPECT_EQ(brute_force_add_edge_optimum(two_edges, 2).cost, 0u);

  Graph tri = make_graph({0, 0, 0, 1, 1}, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
  EXPECT_FALSE(brute_force_add_edge_optimum(tri, 2).cost.has_value());
  EXPECT_FALSE(brute_force_add_edge_optimum(tri, 2, 0).cost.has_value());

  // Two-community path 0-1-2-3 with pendants 4 (on 1) and 5 (on 3): only (0,4) plus (2,5) works.
  Graph g = make_graph({0, 0, 1, 1, 0, 1}, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {3, 5}});
  OracleResult r = brute_force_add_edge_optimum(g, 2);
  ASSERT_TRUE(r.cost.has_value());
  EXPECT_EQ(*r.cost, 2u);
  EXPECT_EQ(r.witness, (std::vector<Edge>{Edge(0, 4), Edge(2, 5)}));
  AnonymizationResult ec = edge_connect(g, {});
  if (ec.success) EXPECT_GE(ec.added_edges, *r.cost);
  EXPECT_NE(format_oracle(r).find("feasible: true"), std::string::npos);
}

TEST(Oracle, GuardRejectsHugeSearches) {
  Graph g = test::random_graph(60, 1, 0.05, 3);
  EXPECT_THROW(brute_force_add_edge_optimum(g, 1), std::invalid_argument);
}

TEST(Oracle, DominatedByEdgeConnect) {
  for (const Graph& g : tiny_family(40)) {
    OracleResult r = brute_force_add_edge_optimum(g, 2);
    AnonymizationResult ec = edge_connect(g, {});
    if (ec.success) {
      ASSERT_TRUE(r.cost.has_value());
      EXPECT_GE(ec.added_edges, *r.cost);
    }
  }
}

TEST(FullModel, ShortPathAgainstStar) {
  Graph g = test::short_path_vs_star();
  EXPECT_EQ(solve_binary_program(build_add_edge_model(g, 2)).status, SolveStatus::Infeasible);
  EXPECT_FALSE(brute_force_add_edge_optimum(g, 2).cost.has_value());
  std::vector<std::size_t> budget{1, 1, 1, 2, 1, 1, 1};
  IpModel m = build_full_model(g, 2, 49, budget);
  SolveResult r = solve_binary_program(m);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  // One extra substitute and no added edge.
  EXPECT_EQ(r.objective, 49);
  EXPECT_TRUE(satisfies(m, r.assignment));
}

TEST(FullModel, BudgetOneMatchesAddEdgeModel) {
  for (const Graph& g : tiny_family(12)) {
    std::vector<std::size_t> ones(g.id_bound(), 1);
    const std::uint64_t omega = g.vertex_count() * g.vertex_count();
    SolveResult full = solve_binary_program(build_full_model(g, 2, omega, ones));
    SolveResult edge = solve_binary_program(build_add_edge_model(g, 2));
    ASSERT_NE(full.status, SolveStatus::NodeLimit);
    EXPECT_EQ(full.status, edge.status);
    if (edge.status == SolveStatus::Optimal) {
      EXPECT_EQ(full.objective, edge.objective);
      EXPECT_LT(full.objective, static_cast<std::int64_t>(omega));
    }
  }
}

TEST(FullModel, FamilyCountsAndBudgetChecks) {
  Graph g = four_vertex();
  std::vector<std::size_t> ones(4, 1);
  IpModel m = build_full_model(g, 2, 16, ones);
  EXPECT_EQ(m.count_family(7), 4u);
  EXPECT_EQ(m.count_family(8), 4u);
  EXPECT_EQ(m.count_family(12), 3u);
  EXPECT_EQ(m.count_family(13), 6u);  // two per original edge
  EXPECT_EQ(m.count_family(15), 2u);
  EXPECT_EQ(m.count_family(16), 0u);
  EXPECT_EQ(m.objective_constant(), -16 * 4 - 3);
  EXPECT_THROW(build_full_model(g, 2, 16, {1, 3, 1, 1}), std::invalid_argument);
  EXPECT_THROW(build_full_model(g, 2, 16, {0, 1, 1, 1}), std::invalid_argument);
  IpModel d = build_full_model(g, 2, 16);
  EXPECT_TRUE(d.find("pi_1_1").has_value());
  EXPECT_FALSE(d.find("pi_1_2").has_value());
}

TEST(LpFormat, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = test::random_graph(7, 2, 0.3, seed);
    IpModel a = build_add_edge_model(g, 2);
    EXPECT_EQ(parse_lp(export_lp(a)), a);
    IpModel f = build_full_model(g, 2, 49);
    EXPECT_EQ(parse_lp(export_lp(f)), f);
  }
}

TEST(LpFormat, LabelsAreRowNames) {
  const std::string text = export_lp(build_add_edge_model(four_vertex(), 2));
  EXPECT_NE(text.find("\n c1_u_0: "), std::string::npos);
  EXPECT_NE(text.find("\n c6_c_1_d_3: "), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("\nBinary\n"), std::string::npos);
  EXPECT_THROW(parse_lp("Maximize\n obj: x\nEnd\n"), std::runtime_error);
}

TEST(LpFormat, MatchesGoldenFile) {
  const std::string golden = read_file(std::string(SDA_GOLDEN_DIR) + "/add_edge_four_vertex.lp");
  EXPECT_EQ(export_lp(build_add_edge_model(four_vertex(), 2)), golden);
}

TEST(Solver, NodeLimitReported) {
  Graph g = test::random_graph(12, 2, 0.2, 4);
  SolveOptions opt;
  opt.node_limit = 3;
  EXPECT_EQ(solve_binary_program(build_add_edge_model(g, 2), opt).status, SolveStatus::NodeLimit);
}

}  // namespace
}  // namespace sda
