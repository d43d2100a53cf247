#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sda/graph.hpp"

namespace sda {

struct RmatParams {
  std::size_t n = 1024;
  std::size_t m = 4096;
  double a = 0.45;
  double b = 0.15;
  double c = 0.15;
  double d = 0.25;
  std::uint64_t seed = 0;
};

/// Undirected simple graph without community labels.
struct PlainGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;  // sorted
};

/// Recursive-matrix sampling of exactly p.m distinct edges over ids < p.n. Self-loops and
/// duplicates are redrawn; throws std::runtime_error once the retry budget is spent.
/// Vertices left without edges are dropped and the remaining ids compacted.
PlainGraph generate_rmat(const RmatParams& p);

/// The largest connected component (ties: the one holding the smallest id), ids compacted
/// in increasing order.
PlainGraph largest_component(const PlainGraph& g);

/// Labels vertices 0..l-1 by balanced multi-source BFS growth from farthest-first seeds.
/// Throws std::invalid_argument unless 1 <= l <= n.
std::vector<CommunityId> assign_communities(const PlainGraph& g, std::size_t l, std::uint64_t seed);

/// generate_rmat followed by assign_communities, packaged as a Graph.
Graph generate_community_graph(const RmatParams& p, std::size_t l);

Graph with_communities(const PlainGraph& g, const std::vector<CommunityId>& community);

}  // namespace sda
