#include "sda/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace sda {
namespace {

std::vector<std::vector<VertexId>> adjacency(const PlainGraph& g) {
  std::vector<std::vector<VertexId>> adj(g.n);
  for (const Edge& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

void relax_distances(const std::vector<std::vector<VertexId>>& adj, VertexId source, std::vector<std::size_t>& dist) {
  std::vector<std::size_t> local(adj.size(), kUnreached);
  std::deque<VertexId> queue{source};
  local[source] = 0;
  while (!queue.empty()) {
    const VertexId x = queue.front();
    queue.pop_front();
    for (VertexId y : adj[x]) {
      if (local[y] == kUnreached) {
        local[y] = local[x] + 1;
        queue.push_back(y);
      }
    }
  }
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = std::min(dist[i], local[i]);
}

VertexId farthest(const std::vector<std::size_t>& dist) {
  VertexId best = 0;
  for (VertexId i = 1; i < dist.size(); ++i) {
    if (dist[i] > dist[best]) best = i;
  }
  return best;
}

}  // namespace

PlainGraph generate_rmat(const RmatParams& p) {
  if (p.n < 2) throw std::invalid_argument("rmat: n must be at least 2");
  if (p.m < 1) throw std::invalid_argument("rmat: m must be at least 1");
  if (std::min({p.a, p.b, p.c, p.d}) < 0 || std::abs(p.a + p.b + p.c + p.d - 1.0) > 1e-9)
    throw std::invalid_argument("rmat: quadrant probabilities must be non-negative and sum to 1");
  if (p.m > p.n * (p.n - 1) / 2) throw std::runtime_error("rmat: more edges requested than a simple graph holds");

  int scale = 0;
  while ((std::size_t{1} << scale) < p.n) ++scale;

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(p.m * 2);
  std::vector<Edge> edges;
  edges.reserve(p.m);

  const std::size_t budget = 64 * p.m + 4096;
  for (std::size_t attempt = 0; edges.size() < p.m; ++attempt) {
    if (attempt >= budget) throw std::runtime_error("rmat: retry budget exhausted");
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (int level = 0; level < scale; ++level) {
      const double r = unit(rng);
      row <<= 1;
      col <<= 1;
      if (r < p.a) {
      } else if (r < p.a + p.b) {
        col |= 1;
      } else if (r < p.a + p.b + p.c) {
        row |= 1;
      } else {
        row |= 1;
        col |= 1;
      }
    }
    if (row >= p.n || col >= p.n || row == col) continue;
    const Edge e(static_cast<VertexId>(row), static_cast<VertexId>(col));
    if (!seen.insert((std::uint64_t{e.u} << 32) | e.v).second) continue;
    edges.push_back(e);
  }

  std::vector<VertexId> remap(p.n, kNoVertex);
  for (const Edge& e : edges) remap[e.u] = remap[e.v] = 0;
  PlainGraph out;
  for (auto& id : remap) {
    if (id != kNoVertex) id = static_cast<VertexId>(out.n++);
  }
  out.edges.reserve(edges.size());
  for (const Edge& e : edges) out.edges.emplace_back(remap[e.u], remap[e.v]);
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

PlainGraph largest_component(const PlainGraph& g) {
  const auto adj = adjacency(g);
  std::vector<std::size_t> comp(g.n, kUnreached);
  std::vector<std::size_t> size;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.n; ++s) {
    if (comp[s] != kUnreached) continue;
    comp[s] = size.size();
    size.push_back(1);
    stack.assign(1, s);
    while (!stack.empty()) {
      const VertexId x = stack.back();
      stack.pop_back();
      for (VertexId y : adj[x]) {
        if (comp[y] != kUnreached) continue;
        comp[y] = comp[s];
        ++size.back();
        stack.push_back(y);
      }
    }
  }
  PlainGraph out;
  if (size.empty()) return out;
  const auto keep = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<VertexId> remap(g.n, kNoVertex);
  for (VertexId v = 0; v < g.n; ++v) {
    if (comp[v] == keep) remap[v] = static_cast<VertexId>(out.n++);
  }
  for (const Edge& e : g.edges) {
    if (comp[e.u] == keep) out.edges.emplace_back(remap[e.u], remap[e.v]);
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::vector<CommunityId> assign_communities(const PlainGraph& g, std::size_t l, std::uint64_t seed) {
  if (l < 1 || l > g.n) throw std::invalid_argument("community count must lie in [1, |V|]");
  const auto adj = adjacency(g);
  std::mt19937_64 rng(seed);

  // Double sweep for the first seed, then farthest-first; unreachable vertices count as
  // infinitely far, so each component gets a seed before any component gets two.
  std::vector<std::size_t> dist(g.n, kUnreached);
  const auto start = static_cast<VertexId>(std::uniform_int_distribution<std::size_t>(0, g.n - 1)(rng));
  relax_distances(adj, start, dist);
  std::vector<VertexId> seeds;
  {
    std::vector<std::size_t> probe = dist;
    for (auto& x : probe) x = x == kUnreached ? 0 : x;
    seeds.push_back(farthest(probe));
  }
  std::fill(dist.begin(), dist.end(), kUnreached);
  relax_distances(adj, seeds.front(), dist);
  while (seeds.size() < l) {
    const VertexId next = farthest(dist);
    seeds.push_back(next);
    relax_distances(adj, next, dist);
  }

  std::vector<CommunityId> label(g.n, std::numeric_limits<CommunityId>::max());
  std::vector<std::size_t> size(l, 0);
  std::vector<std::deque<VertexId>> frontier(l);
  std::vector<std::size_t> cursor(g.n, 0);
  using Entry = std::pair<std::size_t, CommunityId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::size_t unassigned = g.n;

  auto claim = [&](VertexId x, CommunityId c) {
    label[x] = c;
    ++size[c];
    --unassigned;
    frontier[c].push_back(x);
  };
  for (CommunityId c = 0; c < l; ++c) {
    claim(seeds[c], c);
    open.emplace(size[c], c);
  }

  VertexId lowest_unassigned = 0;
  while (unassigned > 0) {
    if (open.empty()) {
      while (label[lowest_unassigned] != std::numeric_limits<CommunityId>::max()) ++lowest_unassigned;
      const auto smallest = static_cast<CommunityId>(std::min_element(size.begin(), size.end()) - size.begin());
      claim(lowest_unassigned, smallest);
      open.emplace(size[smallest], smallest);
      continue;
    }
    const auto [s, c] = open.top();
    open.pop();
    if (s != size[c]) continue;
    bool grew = false;
    while (!frontier[c].empty() && !grew) {
      const VertexId x = frontier[c].front();
      auto& i = cursor[x];
      while (i < adj[x].size() && label[adj[x][i]] != std::numeric_limits<CommunityId>::max()) ++i;
      if (i == adj[x].size()) {
        frontier[c].pop_front();
        continue;
      }
      claim(adj[x][i], c);
      grew = true;
    }
    if (grew) open.emplace(size[c], c);
  }
  return label;
}

Graph with_communities(const PlainGraph& g, const std::vector<CommunityId>& community) {
  return Graph::from_edges(community, g.edges);
}

Graph generate_community_graph(const RmatParams& p, std::size_t l) {
  const PlainGraph plain = generate_rmat(p);
  return with_communities(plain, assign_communities(plain, l, p.seed ^ 0x9e3779b97f4a7c15ULL));
}

}  // namespace sda
