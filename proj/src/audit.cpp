#include "sda/audit.hpp"

#include <sstream>
#include <stdexcept>

namespace sda {

std::map<std::size_t, std::size_t> degree_spread_table(const Graph& g) { return degree_spread(g); }

AuditReport audit(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.community_count()) throw std::invalid_argument("k must lie in [1, |C|]");
  AuditReport r;
  r.k = k;
  r.vertex_count = g.vertex_count();
  r.spread = degree_spread(g);
  for (VertexId v : g.vertices()) {
    if (r.spread.at(g.degree(v)) < k) r.violating.push_back(v);
  }
  r.violation_fraction =
      r.vertex_count == 0 ? 0.0 : static_cast<double>(r.violating.size()) / static_cast<double>(r.vertex_count);
  return r;
}

std::string format_audit(const AuditReport& report) {
  std::ostringstream out;
  out << "k: " << report.k << '\n';
  out << "vertices: " << report.vertex_count << '\n';
  out << "violating_count: " << report.violating.size() << '\n';
  out << "violation_fraction: " << report.violation_fraction << '\n';
  out << "k_structurally_diverse: " << (report.violating.empty() ? "true" : "false") << '\n';
  out << "violating:";
  for (VertexId v : report.violating) out << ' ' << v;
  out << "\n\n# degree communities\n";
  for (const auto& [d, c] : report.spread) out << d << ' ' << c << '\n';
  return out.str();
}

}  // namespace sda
