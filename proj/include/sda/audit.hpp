#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sda/graph.hpp"

namespace sda {

/// Community-identification exposure of a published graph against a degree-aware attacker.
struct AuditReport {
  std::size_t k = 1;
  std::size_t vertex_count = 0;
  std::vector<VertexId> violating;  // sorted
  double violation_fraction = 0.0;
  std::map<std::size_t, std::size_t> spread;  // degree -> communities containing it
};

/// Throws std::invalid_argument unless 1 <= k <= |C|. Substitutes count as ordinary vertices.
AuditReport audit(const Graph& g, std::size_t k);

/// Number of communities containing vertices of each occurring degree.
std::map<std::size_t, std::size_t> degree_spread_table(const Graph& g);

/// Key/value header followed by a "degree communities" table.
std::string format_audit(const AuditReport& report);

}  // namespace sda
