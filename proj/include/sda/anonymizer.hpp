#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sda/anonymization_state.hpp"
#include "sda/graph.hpp"

namespace sda {

enum class Algorithm {
  EdgeConnect,         // ec
  CreateBySplit,       // cbs
  MergeBySplit,        // mbs
  FlexSplit,           // fs
  InverseEdgeConnect,  // iec
  SplittingOnly,       // sonly
};

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct AnonymizerConfig {
  std::size_t k = 2;
  /// Split penalty; |V|^2 of the input when unset.
  std::optional<std::uint64_t> omega;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::FlexSplit;
};

struct AnonymizationResult {
  Graph graph;
  std::uint64_t added_edges = 0;     // n_a
  std::uint64_t split_vertices = 0;  // n_s
  std::uint64_t omega = 1;
  std::uint64_t cost = 0;  // n_a + omega * n_s
  std::vector<SplitRecord> splits;
  std::vector<Redirection> redirections;
  std::vector<std::string> log;
  bool success = false;
};

/// Runs the configured heuristic. Throws std::invalid_argument unless 1 <= k <= |C| and omega >= 1.
AnonymizationResult anonymize(const Graph& g, const AnonymizerConfig& cfg);

AnonymizationResult edge_connect(const Graph& g, AnonymizerConfig cfg);
AnonymizationResult create_by_split(const Graph& g, AnonymizerConfig cfg);
AnonymizationResult merge_by_split(const Graph& g, AnonymizerConfig cfg);
AnonymizationResult flex_split(const Graph& g, AnonymizerConfig cfg);
AnonymizationResult inverse_edge_connect(const Graph& g, AnonymizerConfig cfg);
AnonymizationResult splitting_only(const Graph& g, AnonymizerConfig cfg);

/// n_a, n_s and cost rebuilt from the output's provenance tags and split map alone.
struct CostLedger {
  std::uint64_t added_edges = 0;
  std::uint64_t split_vertices = 0;
  std::uint64_t cost = 0;
  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

CostLedger recompute_ledger(const AnonymizationResult& result);
CostLedger recompute_ledger(const Graph& output, const std::vector<SplitRecord>& splits, std::uint64_t omega);

std::string format_cost_summary(const AnonymizationResult& result, std::string_view algorithm, std::size_t k);

}  // namespace sda
