#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "sda/datagen.hpp"
#include "sda/graph.hpp"

namespace sda::test {

inline Graph make_graph(const std::vector<CommunityId>& community, const std::vector<std::pair<VertexId, VertexId>>& pairs) {
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) edges.emplace_back(a, b);
  return Graph::from_edges(community, edges);
}

// Path 0-1-2-3, communities {0,1} and {2,3}: each community holds one degree-1 and one degree-2 vertex.
inline Graph two_community_path() { return make_graph({0, 0, 1, 1}, {{0, 1}, {1, 2}, {2, 3}}); }

// Path 0-1-2-3-4 over three communities: degree 1 in two communities, degree 2 in three.
inline Graph three_community_path() { return make_graph({0, 0, 1, 2, 2}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}); }

// Community 0 is the path 0-1-2; community 1 is a star centred on 3 with leaves 4,5,6.
// Nothing in community 0 can ever reach degree 3 by adding edges.
inline Graph short_path_vs_star() { return make_graph({0, 0, 0, 1, 1, 1, 1}, {{0, 1}, {1, 2}, {3, 4}, {3, 5}, {3, 6}}); }

// Random legal graph: Erdos-Renyi edges, then every isolated vertex gets one edge.
inline Graph random_graph(std::size_t n, std::size_t communities, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<CommunityId> pick_c(0, static_cast<CommunityId>(communities - 1));
  std::vector<CommunityId> community(n);
  for (std::size_t v = 0; v < n; ++v) community[v] = v < communities ? static_cast<CommunityId>(v) : pick_c(rng);
  std::bernoulli_distribution coin(p);
  std::set<Edge> edges;
  std::vector<std::size_t> degree(n, 0);
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      if (coin(rng)) {
        edges.emplace(a, b);
        ++degree[a];
        ++degree[b];
      }
  std::uniform_int_distribution<VertexId> pick_v(0, static_cast<VertexId>(n - 1));
  for (VertexId v = 0; v < n; ++v) {
    if (degree[v] != 0) continue;
    VertexId w = v;
    while (w == v) w = pick_v(rng);
    edges.emplace(v, w);
    ++degree[v];
    ++degree[w];
  }
  std::vector<Edge> list(edges.begin(), edges.end());
  return Graph::from_edges(community, list);
}

// Skewed graph from the R-MAT generator with balanced BFS communities.
inline Graph rmat_graph(std::size_t n, std::size_t m, std::size_t communities, std::uint64_t seed) {
  RmatParams p;
  p.n = n;
  p.m = m;
  p.seed = seed;
  return generate_community_graph(p, communities);
}

}  // namespace sda::test
