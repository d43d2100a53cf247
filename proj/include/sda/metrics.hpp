#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sda/graph.hpp"

namespace sda {

/// Mean local clustering coefficient; vertices of degree < 2 contribute 0.
double clustering_coefficient(const Graph& g);

/// Mean BFS distance over reachable ordered pairs. sample_size = 0 uses every vertex as a
/// source; otherwise that many distinct sources are drawn with `seed`.
double average_shortest_path_length(const Graph& g, std::size_t sample_size = 0, std::uint64_t seed = 0);

/// Unnormalized shortest-path betweenness, endpoints excluded, each unordered pair once.
/// Indexed by vertex id; absent ids hold 0.
std::vector<double> betweenness(const Graph& g);
double mean_betweenness(const Graph& g);

/// Freeman degree centralization. Throws std::invalid_argument when |V| < 3.
double degree_centralization(const Graph& g);

std::map<std::size_t, std::size_t> degree_histogram(const Graph& g);

struct EigenvectorCentrality {
  std::vector<double> score;  // by vertex id, unit L2 norm over present vertices
  std::size_t iterations = 0;
  bool converged = false;
};

/// Power iteration on A + I from a uniform start. The shift keeps bipartite graphs from
/// oscillating and leaves the eigenvectors of A unchanged.
EigenvectorCentrality eigenvector_centrality(const Graph& g, double tolerance = 1e-8, std::size_t max_iterations = 1000);

enum class SubstituteAggregation { Sum, Max };

/// Pearson correlation; zero-variance inputs give 1 when equal and 0 otherwise.
double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

/// Correlation of eigenvector centralities over the vertices of `before`, with substitutes
/// in `after` folded onto the vertex they replace. Throws std::runtime_error if either
/// power iteration fails to converge.
double eigenvector_centrality_correlation(const Graph& before, const Graph& after, const std::vector<SplitRecord>& splits,
                                          SubstituteAggregation aggregation = SubstituteAggregation::Sum);

/// Fraction of vertex pairs connected in `before` whose images are disconnected in `after`.
/// A split vertex reaches everything any of its substitutes reaches.
double disconnected_pair_fraction(const Graph& before, const Graph& after, const std::vector<SplitRecord>& splits);

/// Seeded asynchronous label propagation. Labels by vertex id (absent ids hold kNoVertex).
std::vector<VertexId> label_propagation(const Graph& g, std::uint64_t seed, std::size_t max_sweeps = 100);

/// Normalized mutual information, 2I / (H(a) + H(b)); 1 when both labelings are constant.
double normalized_mutual_information(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);

/// NMI between label propagation on `g` and `reference` (indexed by vertex id).
double community_agreement(const Graph& g, const std::vector<CommunityId>& reference, std::uint64_t seed = 0);

struct MetricsOptions {
  std::size_t aspl_sample = 0;
  std::uint64_t seed = 0;
  bool betweenness = true;
  SubstituteAggregation aggregation = SubstituteAggregation::Sum;
};

struct MetricsReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  double cc = 0;
  double aspl = 0;
  std::optional<double> bc;
  std::optional<double> dc;
  std::map<std::size_t, std::size_t> degree_hist;
  std::optional<double> ec_corr;
  std::optional<double> disconnected_pair_fraction;
  std::optional<double> community_agreement;
};

MetricsReport compute_metrics(const Graph& g, const MetricsOptions& options = {});

/// Metrics of `after` plus the comparative fields against `before`. Community agreement is
/// scored against the community labels carried by `after`.
MetricsReport compare_metrics(const Graph& before, const Graph& after, const std::vector<SplitRecord>& splits,
                              const MetricsOptions& options = {});

std::string format_metrics(const MetricsReport& report);

}  // namespace sda
