#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sda/graph.hpp"

namespace sda {

struct LinearTerm {
  std::size_t var = 0;
  std::int64_t coef = 0;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::string label;
  std::vector<LinearTerm> terms;
  Relation relation = Relation::LessEqual;
  std::int64_t rhs = 0;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Minimization over binary variables.
class IpModel {
 public:
  /// Registers a binary variable; names must be unique.
  std::size_t add_variable(const std::string& name);
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t at(const std::string& name) const;

  void add_constraint(Constraint c) { constraints_.push_back(std::move(c)); }
  void add_objective_term(std::size_t var, std::int64_t coef) { objective_.push_back({var, coef}); }
  void set_objective_constant(std::int64_t c) { objective_constant_ = c; }

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<LinearTerm>& objective() const { return objective_; }
  std::int64_t objective_constant() const { return objective_constant_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Constraints whose label starts with "c<number>_", e.g. count_family(6).
  std::size_t count_family(int number) const;

  friend bool operator==(const IpModel& a, const IpModel& b) {
    return a.variables_ == b.variables_ && a.objective_ == b.objective_ &&
           a.objective_constant_ == b.objective_constant_ && a.constraints_ == b.constraints_;
  }

 private:
  std::vector<std::string> variables_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<LinearTerm> objective_;
  std::int64_t objective_constant_ = 0;
  std::vector<Constraint> constraints_;
};

/// Same-community vertex pairs that are not adjacent, sorted.
std::vector<Edge> candidate_edges(const Graph& g);

/// Adding-Edge-only model: constraints c1..c6. Per-vertex degree domains are
/// [|E_u|, |E_u| + |Ē_u|]; the global domain D is their union, and c2 pins every
/// delta outside a vertex's own range.
IpModel build_add_edge_model(const Graph& g, std::size_t k);

/// Model with Splitting Vertex as well: constraints c7..c13, c15, c16. budget[u] candidate
/// substitutes per vertex (indexed by vertex id); an empty budget means min(|E_u|, 3).
/// Substitute degrees range over 0 (inactive) up to the most edges the substitute could hold.
IpModel build_full_model(const Graph& g, std::size_t k, std::uint64_t omega, std::vector<std::size_t> budget = {});

std::string export_lp(const IpModel& m);
/// Reads the subset of LP format written by export_lp. Throws std::runtime_error on anything else.
IpModel parse_lp(const std::string& text);

enum class SolveStatus { Optimal, Infeasible, NodeLimit };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::int64_t objective = 0;  // includes the constant
  std::vector<std::uint8_t> assignment;
  std::uint64_t nodes = 0;
};

struct SolveOptions {
  std::uint64_t node_limit = 50'000'000;
};

/// Depth-first branch and bound with activity-bound propagation.
SolveResult solve_binary_program(const IpModel& m, const SolveOptions& options = {});

/// Tries all 2^n assignments. Throws std::invalid_argument above 24 variables.
SolveResult enumerate_binary_program(const IpModel& m);

bool satisfies(const IpModel& m, const std::vector<std::uint8_t>& assignment);
std::int64_t objective_value(const IpModel& m, const std::vector<std::uint8_t>& assignment);

struct OracleResult {
  std::optional<std::size_t> cost;  // empty: no edge set within the budget works
  std::vector<Edge> witness;
};

/// Smallest set of candidate edges (at most edge_budget of them) whose addition makes g
/// k-structurally diverse, by subset search in increasing size. Throws
/// std::invalid_argument when more than 10^7 subsets would be visited.
OracleResult brute_force_add_edge_optimum(const Graph& g, std::size_t k, std::optional<std::size_t> edge_budget = {});

std::string format_oracle(const OracleResult& r);

}  // namespace sda
