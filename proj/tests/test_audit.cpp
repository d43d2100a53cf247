#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "sda/audit.hpp"

namespace sda {
namespace {

using test::make_graph;

TEST(Audit, DiverseGraphHasNoViolators) {
  AuditReport r = audit(test::two_community_path(), 2);
  EXPECT_TRUE(r.violating.empty());
  EXPECT_EQ(r.violation_fraction, 0.0);
  EXPECT_EQ(r.vertex_count, 4u);
}

TEST(Audit, SpreadTable) {
  auto spread = degree_spread_table(test::three_community_path());
  EXPECT_EQ(spread, (std::map<std::size_t, std::size_t>{{1, 2}, {2, 3}}));
}

TEST(Audit, DegreeFiveOnlyInOneCommunity) {
  // Two hubs of degree 5 in community 0; community 1 is a path.
  Graph g = make_graph({0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1},
                       {{0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 2}, {1, 3}, {1, 4}, {1, 7}, {1, 8}, {9, 10}, {10, 11}});
  AuditReport r = audit(g, 2);
  EXPECT_TRUE(std::find(r.violating.begin(), r.violating.end(), 0u) != r.violating.end());
  EXPECT_TRUE(std::find(r.violating.begin(), r.violating.end(), 1u) != r.violating.end());
  EXPECT_TRUE(audit(g, 1).violating.empty());
}

TEST(Audit, RejectsOutOfRangeK) {
  Graph g = test::two_community_path();
  EXPECT_THROW(audit(g, 0), std::invalid_argument);
  EXPECT_THROW(audit(g, 3), std::invalid_argument);
}

TEST(Audit, ViolatorsMatchDefinitionAndGrowWithK) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph g = test::random_graph(40, 5, 0.08, seed);
    std::size_t previous = 0;
    for (std::size_t k = 1; k <= 5; ++k) {
      AuditReport r = audit(g, k);
      std::vector<VertexId> expected;
      for (VertexId v : g.vertices()) {
        std::set<CommunityId> cs;
        for (VertexId u : g.vertices())
          if (g.degree(u) == g.degree(v)) cs.insert(g.community(u));
        if (cs.size() < k) expected.push_back(v);
      }
      EXPECT_EQ(r.violating, expected);
      EXPECT_DOUBLE_EQ(r.violation_fraction, static_cast<double>(expected.size()) / g.vertex_count());
      EXPECT_GE(r.violating.size(), previous);
      EXPECT_EQ(r.violating.empty(), is_k_structurally_diverse(g, k));
      previous = r.violating.size();
    }
  }
}

TEST(Audit, FormatListsKeys) {
  std::string text = format_audit(audit(test::three_community_path(), 3));
  EXPECT_NE(text.find("k: 3"), std::string::npos);
  EXPECT_NE(text.find("violating_count: 2"), std::string::npos);
  EXPECT_NE(text.find("k_structurally_diverse: false"), std::string::npos);
  EXPECT_NE(text.find("# degree communities"), std::string::npos);
}

}  // namespace
}  // namespace sda
