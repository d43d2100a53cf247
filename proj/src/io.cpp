#include "sda/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace sda {
namespace {

std::vector<std::string> tokens_of(const std::string& raw) {
  std::string line = raw.substr(0, raw.find('#'));
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(std::move(t));
  return out;
}

std::uint64_t parse_id(const std::string& tok, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value >= kNoVertex) {
    throw GraphError(GraphErrc::Malformed, "line " + std::to_string(line_no) + ": bad id '" + tok + "'");
  }
  return value;
}

}  // namespace

Graph load_graph(std::istream& edges, std::istream& communities, std::istream* provenance) {
  std::map<VertexId, CommunityId> labels;
  std::string line;
  for (std::size_t no = 1; std::getline(communities, line); ++no) {
    auto t = tokens_of(line);
    if (t.empty()) continue;
    if (t.size() != 2) throw GraphError(GraphErrc::Malformed, "community line " + std::to_string(no) + ": expected 'v c'");
    auto v = static_cast<VertexId>(parse_id(t[0], no));
    auto c = static_cast<CommunityId>(parse_id(t[1], no));
    if (!labels.emplace(v, c).second) {
      throw GraphError(GraphErrc::Malformed, "community line " + std::to_string(no) + ": vertex listed twice");
    }
  }

  std::vector<std::pair<Edge, Provenance>> list;
  std::set<Edge> seen;
  auto push = [&](VertexId a, VertexId b, Provenance p, std::size_t no) {
    if (a == b) throw GraphError(GraphErrc::SelfLoop, "edge line " + std::to_string(no) + ": self-loop");
    Edge e(a, b);
    if (!seen.insert(e).second) throw GraphError(GraphErrc::DuplicateEdge, "edge line " + std::to_string(no) + ": duplicate edge");
    list.emplace_back(e, p);
  };
  for (std::size_t no = 1; std::getline(edges, line); ++no) {
    auto t = tokens_of(line);
    if (t.empty()) continue;
    if (t.size() != 2) throw GraphError(GraphErrc::Malformed, "edge line " + std::to_string(no) + ": expected 'u v'");
    push(static_cast<VertexId>(parse_id(t[0], no)), static_cast<VertexId>(parse_id(t[1], no)), Provenance::Original, no);
  }
  if (provenance != nullptr) {
    std::map<Edge, Provenance> tags;
    for (std::size_t no = 1; std::getline(*provenance, line); ++no) {
      auto t = tokens_of(line);
      if (t.empty()) continue;
      if (t.size() != 3 || t[2].size() != 1 || !provenance_from_code(t[2][0])) {
        throw GraphError(GraphErrc::Malformed, "provenance line " + std::to_string(no) + ": expected 'u v O|A|S'");
      }
      Edge e(static_cast<VertexId>(parse_id(t[0], no)), static_cast<VertexId>(parse_id(t[1], no)));
      tags[e] = *provenance_from_code(t[2][0]);
    }
    for (auto& [e, p] : list) {
      if (auto it = tags.find(e); it != tags.end()) p = it->second;
    }
  }

  const std::size_t n = labels.empty() ? 0 : static_cast<std::size_t>(labels.rbegin()->first) + 1;
  std::vector<CommunityId> community(n, 0);
  std::vector<std::uint8_t> present(n, 0);
  for (const auto& [v, c] : labels) {
    community[v] = c;
    present[v] = 1;
  }
  for (const auto& [e, p] : list) {
    if (e.v >= n || !present[e.u] || !present[e.v]) {
      throw GraphError(GraphErrc::MissingCommunity,
                       "edge endpoint without community: " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
  }
  return Graph::from_parts(community, present, list);
}

Graph load_graph_text(const std::string& edges, const std::string& communities, const std::string* provenance) {
  std::istringstream e(edges), c(communities);
  if (provenance == nullptr) return load_graph(e, c);
  std::istringstream p(*provenance);
  return load_graph(e, c, &p);
}

GraphText save_graph(const Graph& g) {
  std::ostringstream e, c, p;
  for (VertexId v : g.vertices()) c << v << ' ' << g.community(v) << '\n';
  for (const auto& [edge, tag] : g.edges()) {
    e << edge.u << ' ' << edge.v << '\n';
    p << edge.u << ' ' << edge.v << ' ' << provenance_code(tag) << '\n';
  }
  return {e.str(), c.str(), p.str()};
}

std::string save_split_map(const std::vector<SplitRecord>& splits) {
  std::ostringstream out;
  for (const SplitRecord& s : splits) {
    out << s.original << " :";
    for (VertexId x : s.substitutes) out << ' ' << x;
    out << '\n';
  }
  return out.str();
}

std::vector<SplitRecord> load_split_map(std::istream& in) {
  std::vector<SplitRecord> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    auto t = tokens_of(line);
    if (t.empty()) continue;
    if (t.size() < 4 || t[1] != ":") throw GraphError(GraphErrc::Malformed, "split line " + std::to_string(no));
    SplitRecord rec;
    rec.original = static_cast<VertexId>(parse_id(t[0], no));
    for (std::size_t i = 2; i < t.size(); ++i) rec.substitutes.push_back(static_cast<VertexId>(parse_id(t[i], no)));
    out.push_back(std::move(rec));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace sda
