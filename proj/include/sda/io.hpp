#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sda/graph.hpp"

namespace sda {

/// The three whitespace-separated text files describing a graph.
struct GraphText {
  std::string edges;        // "u v" per line
  std::string communities;  // "v c" per line
  std::string provenance;   // "u v O|A|S" per line
};

/// Parses edge and community streams ('#' starts a comment). When a provenance stream is
/// given, its tags override the default Original tag and may introduce Added/link edges.
Graph load_graph(std::istream& edges, std::istream& communities, std::istream* provenance = nullptr);
Graph load_graph_text(const std::string& edges, const std::string& communities, const std::string* provenance = nullptr);

/// Deterministic serialization, sorted by vertex id.
GraphText save_graph(const Graph& g);

/// Split map file: "original : s1 s2 ..." per line.
std::string save_split_map(const std::vector<SplitRecord>& splits);
std::vector<SplitRecord> load_split_map(std::istream& in);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sda
