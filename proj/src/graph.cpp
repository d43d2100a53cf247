#include "sda/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace sda {

char provenance_code(Provenance p) {
  switch (p) {
    case Provenance::Original: return 'O';
    case Provenance::Added: return 'A';
    case Provenance::SubstituteLink: return 'S';
  }
  return '?';
}

std::optional<Provenance> provenance_from_code(char c) {
  switch (c) {
    case 'O': return Provenance::Original;
    case 'A': return Provenance::Added;
    case 'S': return Provenance::SubstituteLink;
    default: return std::nullopt;
  }
}

const char* to_string(GraphErrc code) {
  switch (code) {
    case GraphErrc::Malformed: return "malformed";
    case GraphErrc::MissingCommunity: return "vertex without community";
    case GraphErrc::IsolatedVertex: return "isolated vertex";
    case GraphErrc::DuplicateEdge: return "duplicate edge";
    case GraphErrc::SelfLoop: return "self-loop";
    case GraphErrc::CrossCommunity: return "cross-community edge";
    case GraphErrc::UnknownVertex: return "unknown vertex";
    case GraphErrc::NonContiguousCommunities: return "non-contiguous community ids";
    case GraphErrc::InfeasibleSplit: return "infeasible split";
    case GraphErrc::MissingEdge: return "missing edge";
  }
  return "graph error";
}

Graph Graph::from_edges(std::span<const CommunityId> community, std::span<const Edge> edges) {
  std::vector<std::uint8_t> present(community.size(), 1);
  std::vector<std::pair<Edge, Provenance>> tagged;
  tagged.reserve(edges.size());
  for (const Edge& e : edges) tagged.emplace_back(e, Provenance::Original);
  return from_parts(community, present, tagged);
}

Graph Graph::from_parts(std::span<const CommunityId> community, std::span<const std::uint8_t> present,
                        std::span<const std::pair<Edge, Provenance>> edges, std::span<const VertexId> origin) {
  Graph g;
  const std::size_t n = community.size();
  g.community_.assign(community.begin(), community.end());
  g.alive_.assign(present.begin(), present.end());
  g.alive_.resize(n, 0);
  g.adjacency_.resize(n);
  g.origin_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    g.origin_[v] = origin.empty() ? static_cast<VertexId>(v) : origin[v];
    if (g.alive_[v]) ++g.alive_count_;
  }
  g.edges_.reserve(edges.size() * 2);
  for (const auto& [e, p] : edges) {
    if (e.u == e.v) throw GraphError(GraphErrc::SelfLoop, "self-loop on vertex " + std::to_string(e.u));
    if (!g.contains(e.u) || !g.contains(e.v)) {
      throw GraphError(GraphErrc::MissingCommunity,
                       "edge endpoint without community: " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    if (g.has_edge(e.u, e.v)) {
      throw GraphError(GraphErrc::DuplicateEdge, "duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    g.insert_edge(e.u, e.v, p);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (g.alive_[v] && g.adjacency_[v].empty()) {
      throw GraphError(GraphErrc::IsolatedVertex, "vertex " + std::to_string(v) + " has degree 0");
    }
  }
  g.validate_communities();
  return g;
}

void Graph::validate_communities() {
  std::set<CommunityId> seen;
  for (std::size_t v = 0; v < community_.size(); ++v) {
    if (alive_[v]) seen.insert(community_[v]);
  }
  if (!seen.empty() && (*seen.begin() != 0 || *seen.rbegin() + 1 != seen.size())) {
    throw GraphError(GraphErrc::NonContiguousCommunities, "community ids must cover 0..|C|-1");
  }
  community_count_ = seen.size();
}

bool Graph::has_edge(VertexId a, VertexId b) const { return a != b && edges_.contains(key(a, b)); }

std::optional<Provenance> Graph::provenance(VertexId a, VertexId b) const {
  if (a == b) return std::nullopt;
  auto it = edges_.find(key(a, b));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::vector<VertexId> Graph::vertices() const {
  std::vector<VertexId> out;
  out.reserve(alive_count_);
  for (VertexId v = 0; v < id_bound(); ++v) {
    if (alive_[v]) out.push_back(v);
  }
  return out;
}

std::vector<std::pair<Edge, Provenance>> Graph::edges() const {
  std::vector<std::pair<Edge, Provenance>> out;
  out.reserve(edges_.size());
  for (const auto& [k, p] : edges_) {
    out.emplace_back(Edge(static_cast<VertexId>(k >> 32), static_cast<VertexId>(k & 0xffffffffu)), p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (VertexId v = 0; v < id_bound(); ++v) {
    if (alive_[v]) best = std::max(best, adjacency_[v].size());
  }
  return best;
}

void Graph::add_edge(VertexId a, VertexId b) {
  checked(a);
  checked(b);
  if (a == b) throw GraphError(GraphErrc::SelfLoop, "self-loop on vertex " + std::to_string(a));
  if (community_[a] != community_[b]) {
    throw GraphError(GraphErrc::CrossCommunity,
                     "vertices " + std::to_string(a) + " and " + std::to_string(b) + " are in different communities");
  }
  if (has_edge(a, b)) {
    throw GraphError(GraphErrc::DuplicateEdge, "edge " + std::to_string(a) + " " + std::to_string(b) + " exists");
  }
  insert_edge(a, b, Provenance::Added);
}

void Graph::redirect_added_edge(VertexId anchor, VertexId from, VertexId to) {
  checked(anchor);
  checked(from);
  checked(to);
  auto p = provenance(anchor, from);
  if (!p) throw GraphError(GraphErrc::MissingEdge, "no edge to redirect");
  if (*p != Provenance::Added) throw GraphError(GraphErrc::MissingEdge, "only Added edges can be redirected");
  if (anchor == to) throw GraphError(GraphErrc::SelfLoop, "redirect onto the anchor itself");
  if (community_[to] != community_[anchor]) throw GraphError(GraphErrc::CrossCommunity, "redirect across communities");
  if (has_edge(anchor, to)) throw GraphError(GraphErrc::DuplicateEdge, "redirect target already adjacent");
  erase_edge(anchor, from);
  insert_edge(anchor, to, Provenance::Added);
}

SplitRecord Graph::split_vertex(VertexId v, std::span<const std::size_t> target_degrees, bool link_substitutes,
                                std::uint64_t seed) {
  checked(v);
  const std::size_t parts = target_degrees.size();
  const std::size_t dv = adjacency_[v].size();
  if (parts < 2) throw GraphError(GraphErrc::InfeasibleSplit, "a split needs at least two substitutes");
  if (parts > dv) throw GraphError(GraphErrc::InfeasibleSplit, "more substitutes than incident edges");

  // Raw share of original incident edges per substitute.
  std::vector<std::size_t> raw(target_degrees.begin(), target_degrees.end());
  if (link_substitutes) {
    for (std::size_t i = 0; i < parts; ++i) {
      const std::size_t links = (i == 0 || i + 1 == parts) ? 1 : 2;
      if (raw[i] <= links) throw GraphError(GraphErrc::InfeasibleSplit, "substitute left without an original edge");
      raw[i] -= links;
    }
  }
  for (std::size_t r : raw) {
    if (r == 0) throw GraphError(GraphErrc::InfeasibleSplit, "substitute left without an original edge");
  }
  if (std::accumulate(raw.begin(), raw.end(), std::size_t{0}) != dv) {
    throw GraphError(GraphErrc::InfeasibleSplit, "target degrees do not match the incident edge count");
  }

  std::vector<VertexId> incident = adjacency_[v];
  std::sort(incident.begin(), incident.end());
  std::mt19937_64 rng(seed);
  std::shuffle(incident.begin(), incident.end(), rng);

  std::vector<Provenance> tags;
  tags.reserve(dv);
  for (VertexId x : incident) tags.push_back(edges_.at(key(v, x)));
  for (VertexId x : incident) erase_edge(v, x);

  const CommunityId c = community_[v];
  const VertexId root = origin_[v];
  alive_[v] = 0;
  --alive_count_;

  SplitRecord rec;
  rec.original = v;
  std::size_t next = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const VertexId s = append_vertex(c, root);
    rec.substitutes.push_back(s);
    for (std::size_t j = 0; j < raw[i]; ++j, ++next) {
      insert_edge(s, incident[next], tags[next]);
      rec.edge_assignment.emplace_back(incident[next], s);
    }
  }
  if (link_substitutes) {
    for (std::size_t i = 0; i + 1 < parts; ++i) {
      insert_edge(rec.substitutes[i], rec.substitutes[i + 1], Provenance::SubstituteLink);
      rec.links.emplace_back(rec.substitutes[i], rec.substitutes[i + 1]);
    }
  }
  std::sort(rec.edge_assignment.begin(), rec.edge_assignment.end());
  return rec;
}

VertexId Graph::append_vertex(CommunityId c, VertexId origin) {
  const auto id = static_cast<VertexId>(community_.size());
  community_.push_back(c);
  origin_.push_back(origin);
  alive_.push_back(1);
  adjacency_.emplace_back();
  ++alive_count_;
  return id;
}

void Graph::insert_edge(VertexId a, VertexId b, Provenance p) {
  edges_.emplace(key(a, b), p);
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
}

void Graph::erase_edge(VertexId a, VertexId b) {
  edges_.erase(key(a, b));
  auto drop = [](std::vector<VertexId>& list, VertexId x) {
    auto it = std::find(list.begin(), list.end(), x);
    *it = list.back();
    list.pop_back();
  };
  drop(adjacency_[a], b);
  drop(adjacency_[b], a);
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.vertices() != b.vertices()) return false;
  for (VertexId v : a.vertices()) {
    if (a.community_[v] != b.community_[v] || a.origin_[v] != b.origin_[v]) return false;
  }
  return a.edges() == b.edges();
}

std::map<std::size_t, std::size_t> degree_spread(const Graph& g) {
  std::map<std::size_t, std::set<CommunityId>> seen;
  for (VertexId v : g.vertices()) seen[g.degree(v)].insert(g.community(v));
  std::map<std::size_t, std::size_t> out;
  for (const auto& [d, cs] : seen) out.emplace(d, cs.size());
  return out;
}

bool is_k_structurally_diverse(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.community_count()) {
    throw std::invalid_argument("k must lie in [1, |C|]");
  }
  for (const auto& [d, spread] : degree_spread(g)) {
    if (spread < k) return false;
  }
  return true;
}

std::vector<VertexId> resolve_origins(const Graph& g, const std::vector<SplitRecord>& splits) {
  std::vector<VertexId> origin(g.id_bound());
  std::iota(origin.begin(), origin.end(), VertexId{0});
  for (const SplitRecord& rec : splits) {
    for (VertexId s : rec.substitutes) {
      if (s >= origin.size()) origin.resize(s + 1, kNoVertex);
      origin[s] = origin[rec.original];
    }
  }
  return origin;
}

}  // namespace sda
