#include "sda/exact.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sda {

std::size_t IpModel::add_variable(const std::string& name) {
  const auto [it, inserted] = index_.emplace(name, variables_.size());
  if (!inserted) throw std::invalid_argument("duplicate variable " + name);
  variables_.push_back(name);
  return it->second;
}

std::optional<std::size_t> IpModel::find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t IpModel::at(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw std::out_of_range("no variable " + name);
}

std::size_t IpModel::count_family(int number) const {
  const std::string prefix = "c" + std::to_string(number) + "_";
  return static_cast<std::size_t>(std::count_if(constraints_.begin(), constraints_.end(),
                                                [&](const Constraint& c) { return c.label.rfind(prefix, 0) == 0; }));
}

std::vector<Edge> candidate_edges(const Graph& g) {
  const auto vs = g.vertices();
  std::vector<Edge> out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (g.community(vs[i]) == g.community(vs[j]) && !g.has_edge(vs[i], vs[j])) out.emplace_back(vs[i], vs[j]);
    }
  }
  return out;
}

namespace {

std::string name(std::string_view base, std::initializer_list<std::uint64_t> idx) {
  std::string s(base);
  for (auto i : idx) s += "_" + std::to_string(i);
  return s;
}

std::vector<CommunityId> community_ids(const Graph& g) {
  std::set<CommunityId> ids;
  for (VertexId v : g.vertices()) ids.insert(g.community(v));
  return {ids.begin(), ids.end()};
}

void require_k(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.community_count()) throw std::invalid_argument("k must lie in [1, |C|]");
}

}  // namespace

IpModel build_add_edge_model(const Graph& g, std::size_t k) {
  require_k(g, k);
  const auto vs = g.vertices();
  const auto cs = community_ids(g);
  const auto cand = candidate_edges(g);
  std::map<VertexId, std::vector<VertexId>> cand_of;
  for (const Edge& e : cand) {
    cand_of[e.u].push_back(e.v);
    cand_of[e.v].push_back(e.u);
  }
  std::map<VertexId, std::pair<std::size_t, std::size_t>> range;
  std::set<std::size_t> domain;
  for (VertexId u : vs) {
    const std::size_t lo = g.degree(u);
    const std::size_t hi = lo + cand_of[u].size();
    range[u] = {lo, hi};
    for (std::size_t d = lo; d <= hi; ++d) domain.insert(d);
  }

  IpModel m;
  for (const Edge& e : cand) m.add_objective_term(m.add_variable(name("alpha", {e.u, e.v})), 1);
  for (VertexId u : vs) {
    for (std::size_t d : domain) m.add_variable(name("delta", {u, d}));
  }
  for (CommunityId c : cs) {
    for (std::size_t d : domain) m.add_variable(name("theta", {c, d}));
  }
  auto alpha = [&](VertexId a, VertexId b) { return m.at(name("alpha", {std::min(a, b), std::max(a, b)})); };
  auto delta = [&](VertexId u, std::size_t d) { return m.at(name("delta", {u, d})); };
  auto theta = [&](CommunityId c, std::size_t d) { return m.at(name("theta", {c, d})); };

  for (VertexId u : vs) {
    Constraint c{name("c1_u", {u}), {}, Relation::Equal, 1};
    for (std::size_t d : domain) c.terms.push_back({delta(u, d), 1});
    m.add_constraint(std::move(c));
  }
  for (VertexId u : vs) {
    for (std::size_t d : domain) {
      if (d >= range[u].first && d <= range[u].second) continue;
      m.add_constraint({name("c2_u", {u}) + name("_d", {d}), {{delta(u, d), 1}}, Relation::Equal, 0});
    }
  }
  for (VertexId u : vs) {
    Constraint c{name("c3_u", {u}), {}, Relation::Equal, static_cast<std::int64_t>(g.degree(u))};
    for (std::size_t d : domain) c.terms.push_back({delta(u, d), static_cast<std::int64_t>(d)});
    for (VertexId v : cand_of[u]) c.terms.push_back({alpha(u, v), -1});
    m.add_constraint(std::move(c));
  }
  for (VertexId u : vs) {
    for (std::size_t d = range[u].first; d <= range[u].second; ++d) {
      m.add_constraint({name("c4_u", {u}) + name("_d", {d}), {{delta(u, d), 1}, {theta(g.community(u), d), -1}},
                        Relation::LessEqual, 0});
    }
  }
  for (CommunityId c : cs) {
    for (std::size_t d : domain) {
      Constraint row{name("c5_c", {c}) + name("_d", {d}), {{theta(c, d), 1}}, Relation::LessEqual, 0};
      for (VertexId u : vs) {
        if (g.community(u) == c) row.terms.push_back({delta(u, d), -1});
      }
      m.add_constraint(std::move(row));
    }
  }
  for (CommunityId c : cs) {
    for (std::size_t d : domain) {
      Constraint row{name("c6_c", {c}) + name("_d", {d}), {}, Relation::LessEqual, 0};
      if (k > 1) row.terms.push_back({theta(c, d), static_cast<std::int64_t>(k - 1)});
      for (CommunityId other : cs) {
        if (other != c) row.terms.push_back({theta(other, d), -1});
      }
      m.add_constraint(std::move(row));
    }
  }
  return m;
}

IpModel build_full_model(const Graph& g, std::size_t k, std::uint64_t omega, std::vector<std::size_t> budget) {
  require_k(g, k);
  const auto vs = g.vertices();
  const auto cs = community_ids(g);
  const auto cand = candidate_edges(g);
  if (budget.empty()) {
    budget.assign(g.id_bound(), 0);
    for (VertexId u : vs) budget[u] = std::min<std::size_t>(g.degree(u), 3);
  }
  for (VertexId u : vs) {
    if (u >= budget.size() || budget[u] < 1 || budget[u] > g.degree(u))
      throw std::invalid_argument("substitute budget must lie in [1, |E_u|]");
  }
  std::vector<Edge> original;
  for (const auto& [e, tag] : g.edges()) original.push_back(e);

  std::map<VertexId, std::vector<VertexId>> cand_of;
  for (const Edge& e : cand) {
    cand_of[e.u].push_back(e.v);
    cand_of[e.v].push_back(e.u);
  }
  std::map<VertexId, std::size_t> top;  // largest degree any substitute of u can reach
  std::size_t dmax = 1;
  for (VertexId u : vs) {
    std::size_t t = budget[u] - 1;
    for (VertexId v : g.neighbors(u)) t += budget[v];
    for (VertexId v : cand_of[u]) t += budget[v];
    top[u] = t;
    dmax = std::max(dmax, t);
  }

  IpModel m;
  const auto w = static_cast<std::int64_t>(omega);
  for (const Edge& e : cand) {
    for (std::size_t i = 0; i < budget[e.u]; ++i) {
      for (std::size_t j = 0; j < budget[e.v]; ++j) m.add_objective_term(m.add_variable(name("alpha", {e.u, e.v, i, j})), 1);
    }
  }
  for (VertexId u : vs) {
    for (std::size_t i = 0; i < budget[u]; ++i) {
      for (std::size_t j = i + 1; j < budget[u]; ++j) m.add_variable(name("beta", {u, i, j}));
    }
  }
  for (const Edge& e : original) {
    for (std::size_t i = 0; i < budget[e.u]; ++i) {
      for (std::size_t j = 0; j < budget[e.v]; ++j) m.add_objective_term(m.add_variable(name("eta", {e.u, e.v, i, j})), 1);
    }
  }
  for (VertexId u : vs) {
    for (std::size_t i = 0; i < budget[u]; ++i) m.add_objective_term(m.add_variable(name("pi", {u, i})), w);
  }
  for (VertexId u : vs) {
    for (std::size_t i = 0; i < budget[u]; ++i) {
      for (std::size_t d = 0; d <= top[u]; ++d) m.add_variable(name("delta", {u, i, d}));
    }
  }
  for (CommunityId c : cs) {
    for (std::size_t d = 1; d <= dmax; ++d) m.add_variable(name("theta", {c, d}));
  }
  m.set_objective_constant(-w * static_cast<std::int64_t>(vs.size()) - static_cast<std::int64_t>(original.size()));

  // Pair variables are stored once per unordered pair; these look them up from either side.
  auto pair_var = [&](std::string_view base, VertexId u, VertexId v, std::size_t i, std::size_t j) {
    return u < v ? m.at(name(base, {u, v, i, j})) : m.at(name(base, {v, u, j, i}));
  };
  auto beta = [&](VertexId u, std::size_t i, std::size_t j) { return m.at(name("beta", {u, std::min(i, j), std::max(i, j)})); };
  auto pi = [&](VertexId u, std::size_t i) { return m.at(name("pi", {u, i})); };
  auto delta = [&](VertexId u, std::size_t i, std::size_t d) { return m.at(name("delta", {u, i, d})); };
  auto theta = [&](CommunityId c, std::size_t d) { return m.at(name("theta", {c, d})); };

  for (VertexId u : vs) {
    for (std::size_t i = 0; i < budget[u]; ++i) {
      Constraint row{name("c7_u", {u}) + name("_i", {i}), {}, Relation::Equal, 1};
      for (std::size_t d = 0; d <= top[u]; ++d) row.terms.push_back({delta(u, i, d), 1});
      m.add_constraint(std::move(row));
    }
  }
  for (VertexId u : vs) {
    for (std::size_t i = 0; i < budget[u]; ++i) {
      Constraint row{name("c8_u", {u}) + name("_i", {i}), {}, Relation::Equal, 0};
      for (VertexId v : g.neighbors(u)) {
        for (std::size_t j = 0; j < budget[v]; ++j) row.terms.push_back({pair_var("eta", u, v, i, j), 1});
      }
      for (std::size_t j = 0; j < budget[u]; ++j) {
        if (j != i) row.terms.push_back({beta(u, i, j), 1});
      }
      for (VertexId v : cand_of[u]) {
        for (std::size_t j = 0; j < budget[v]; ++j) row.terms.push_back({pair_var("alpha", u, v, i, j), 1});
      }
      for (std::size_t d = 1; d <= top[u]; ++d) row.terms.push_back({delta(u, i, d), -static_cast<std::int64_t>(d)});
      m.add_constraint(std::move(row));
    }
  }
  for (VertexId u : vs) {
    for (std::size_t i = 0; i < budget[u]; ++i) {
      for (std::size_t d = 1; d <= top[u]; ++d) {
        m.add_constraint({name("c9_u", {u}) + name("_i", {i}) + name("_d", {d}),
                          {{delta(u, i, d), 1}, {theta(g.community(u), d), -1}},
                          Relation::LessEqual, 0});
      }
    }
  }
  for (CommunityId c : cs) {
    for (std::size_t d = 1; d <= dmax; ++d) {
      Constraint row{name("c10_c", {c}) + name("_d", {d}), {{theta(c, d), 1}}, Relation::LessEqual, 0};
      for (VertexId u : vs) {
        if (g.community(u) != c || d > top[u]) continue;
        for (std::size_t i = 0; i < budget[u]; ++i) row.terms.push_back({delta(u, i, d), -1});
      }
      m.add_constraint(std::move(row));
    }
  }
  for (CommunityId c : cs) {
    for (std::size_t d = 1; d <= dmax; ++d) {
      Constraint row{name("c11_c", {c}) + name("_d", {d}), {}, Relation::LessEqual, 0};
      if (k > 1) row.terms.push_back({theta(c, d), static_cast<std::int64_t>(k - 1)});
      for (CommunityId other : cs) {
        if (other != c) row.terms.push_back({theta(other, d), -1});
      }
      m.add_constraint(std::move(row));
    }
  }
  for (const Edge& e : original) {
    Constraint row{name("c12_u", {e.u}) + name("_v", {e.v}), {}, Relation::GreaterEqual, 1};
    for (std::size_t i = 0; i < budget[e.u]; ++i) {
      for (std::size_t j = 0; j < budget[e.v]; ++j) row.terms.push_back({pair_var("eta", e.u, e.v, i, j), 1});
    }
    m.add_constraint(std::move(row));
  }
  auto activity = [&](std::string_view family, std::string_view base, const std::vector<Edge>& pairs) {
    for (const Edge& e : pairs) {
      for (std::size_t i = 0; i < budget[e.u]; ++i) {
        for (std::size_t j = 0; j < budget[e.v]; ++j) {
          const std::size_t x = pair_var(base, e.u, e.v, i, j);
          m.add_constraint({name(family, {e.u, e.v, i, j}), {{x, 1}, {pi(e.u, i), -1}}, Relation::LessEqual, 0});
          m.add_constraint({name(family, {e.v, e.u, j, i}), {{x, 1}, {pi(e.v, j), -1}}, Relation::LessEqual, 0});
        }
      }
    }
  };
  activity("c13", "eta", original);
  activity("c15", "alpha", cand);
  for (VertexId u : vs) {
    for (std::size_t i = 0; i < budget[u]; ++i) {
      for (std::size_t j = 0; j < budget[u]; ++j) {
        if (i == j) continue;
        m.add_constraint({name("c16", {u, i, j}), {{beta(u, i, j), 1}, {pi(u, i), -1}}, Relation::LessEqual, 0});
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------------------
// LP text

namespace {

constexpr std::size_t kLineWidth = 78;

void write_expression(std::ostringstream& out, std::size_t& column, const IpModel& m,
                      const std::vector<LinearTerm>& terms, std::int64_t constant) {
  auto emit = [&](const std::string& piece) {
    if (column + piece.size() > kLineWidth && column > 0) {
      out << "\n  ";
      column = 2;
    }
    out << piece;
    column += piece.size();
  };
  bool first = true;
  for (const LinearTerm& t : terms) {
    if (t.coef == 0) continue;
    std::string piece = first ? "" : " ";
    if (t.coef < 0) piece += "- ";
    else if (!first) piece += "+ ";
    const std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
    if (mag != 1) piece += std::to_string(mag) + " ";
    piece += m.variables()[t.var];
    emit(piece);
    first = false;
  }
  if (constant != 0 || first) {
    std::string piece;
    if (first) piece = std::to_string(constant);
    else piece = constant < 0 ? " - " + std::to_string(-constant) : " + " + std::to_string(constant);
    emit(piece);
  }
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "=";
  }
  return "?";
}

bool parse_int(std::string_view s, std::int64_t& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

struct RawRow {
  std::string label;
  std::vector<std::pair<std::string, std::int64_t>> terms;
  std::int64_t constant = 0;
  std::optional<Relation> relation;
  std::int64_t rhs = 0;
};

RawRow parse_row(const std::string& text) {
  RawRow row;
  std::string body = text;
  const auto colon = body.find(':');
  if (colon == std::string::npos) throw std::runtime_error("lp: row without a name: " + text);
  row.label = body.substr(0, colon);
  row.label.erase(0, row.label.find_first_not_of(" \t"));
  row.label.erase(row.label.find_last_not_of(" \t") + 1);
  std::istringstream in(body.substr(colon + 1));
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);

  std::int64_t sign = 1;
  std::int64_t number = 0;
  bool pending = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (tok == "<=" || tok == ">=" || tok == "=") {
      if (pending) row.constant += sign * number;
      row.relation = tok == "<=" ? Relation::LessEqual : tok == ">=" ? Relation::GreaterEqual : Relation::Equal;
      if (i + 2 != tokens.size() || !parse_int(tokens[i + 1], row.rhs)) throw std::runtime_error("lp: bad right-hand side");
      return row;
    }
    if (tok == "+" || tok == "-") {
      if (pending) row.constant += sign * number;
      pending = false;
      sign = tok == "-" ? -1 : 1;
      continue;
    }
    std::int64_t value = 0;
    if (parse_int(tok, value)) {
      if (pending) throw std::runtime_error("lp: two numbers in a row");
      number = value;
      pending = true;
      continue;
    }
    row.terms.emplace_back(tok, sign * (pending ? number : 1));
    pending = false;
    sign = 1;
  }
  if (pending) row.constant += sign * number;
  return row;
}

}  // namespace

std::string export_lp(const IpModel& m) {
  std::ostringstream out;
  out << "\\ binary program, " << m.variables().size() << " variables, " << m.constraints().size() << " constraints\n";
  out << "Minimize\n";
  std::size_t column = 0;
  out << " obj: ";
  column = 6;
  write_expression(out, column, m, m.objective(), m.objective_constant());
  out << "\nSubject To\n";
  for (const Constraint& c : m.constraints()) {
    out << ' ' << c.label << ": ";
    column = c.label.size() + 3;
    write_expression(out, column, m, c.terms, 0);
    const std::string tail = std::string(" ") + relation_text(c.relation) + " " + std::to_string(c.rhs);
    if (column + tail.size() > kLineWidth) out << "\n  ";
    out << tail << '\n';
  }
  out << "Binary\n";
  for (const std::string& v : m.variables()) out << ' ' << v << '\n';
  out << "End\n";
  return out.str();
}

IpModel parse_lp(const std::string& text) {
  enum class Section { None, Objective, Constraints, Binary, Done } section = Section::None;
  std::istringstream in(text);
  std::vector<std::string> rows;
  std::string objective;
  std::vector<std::string> binaries;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '\\') continue;
    const std::string trimmed = line.substr(start, line.find_last_not_of(" \t") - start + 1);
    if (trimmed == "Minimize") {
      section = Section::Objective;
      continue;
    }
    if (trimmed == "Subject To") {
      section = Section::Constraints;
      continue;
    }
    if (trimmed == "Binary" || trimmed == "Binaries") {
      section = Section::Binary;
      continue;
    }
    if (trimmed == "End") {
      section = Section::Done;
      continue;
    }
    switch (section) {
      case Section::Objective:
        objective += " " + trimmed;
        break;
      case Section::Constraints:
        if (trimmed.find(':') != std::string::npos) rows.push_back(trimmed);
        else if (!rows.empty()) rows.back() += " " + trimmed;
        else throw std::runtime_error("lp: continuation before any row");
        break;
      case Section::Binary: {
        std::istringstream names(trimmed);
        for (std::string n; names >> n;) binaries.push_back(n);
        break;
      }
      default:
        throw std::runtime_error("lp: text outside a section: " + trimmed);
    }
  }
  if (section != Section::Done) throw std::runtime_error("lp: missing End");

  IpModel m;
  for (const std::string& n : binaries) m.add_variable(n);
  auto resolve = [&](const RawRow& raw) {
    std::vector<LinearTerm> terms;
    for (const auto& [n, c] : raw.terms) {
      const auto idx = m.find(n);
      if (!idx) throw std::runtime_error("lp: undeclared variable " + n);
      terms.push_back({*idx, c});
    }
    return terms;
  };
  const RawRow obj = parse_row(objective);
  if (obj.relation) throw std::runtime_error("lp: relation in objective");
  for (const LinearTerm& t : resolve(obj)) m.add_objective_term(t.var, t.coef);
  m.set_objective_constant(obj.constant);
  for (const std::string& r : rows) {
    const RawRow raw = parse_row(r);
    if (!raw.relation) throw std::runtime_error("lp: row without relation: " + raw.label);
    if (raw.constant != 0) throw std::runtime_error("lp: constant on the left of " + raw.label);
    m.add_constraint({raw.label, resolve(raw), *raw.relation, raw.rhs});
  }
  return m;
}

// ---------------------------------------------------------------------------------------
// Solvers

bool satisfies(const IpModel& m, const std::vector<std::uint8_t>& x) {
  for (const Constraint& c : m.constraints()) {
    std::int64_t act = 0;
    for (const LinearTerm& t : c.terms) act += t.coef * x[t.var];
    if (c.relation == Relation::LessEqual && act > c.rhs) return false;
    if (c.relation == Relation::GreaterEqual && act < c.rhs) return false;
    if (c.relation == Relation::Equal && act != c.rhs) return false;
  }
  return true;
}

std::int64_t objective_value(const IpModel& m, const std::vector<std::uint8_t>& x) {
  std::int64_t z = m.objective_constant();
  for (const LinearTerm& t : m.objective()) z += t.coef * x[t.var];
  return z;
}

SolveResult enumerate_binary_program(const IpModel& m) {
  const std::size_t n = m.variables().size();
  if (n > 24) throw std::invalid_argument("enumeration is limited to 24 variables");
  SolveResult r;
  std::vector<std::uint8_t> x(n, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
    ++r.nodes;
    if (!satisfies(m, x)) continue;
    const std::int64_t z = objective_value(m, x);
    if (r.status != SolveStatus::Optimal || z < r.objective) {
      r.status = SolveStatus::Optimal;
      r.objective = z;
      r.assignment = x;
    }
  }
  return r;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const IpModel& m, const SolveOptions& options)
      : m_(m), options_(options), n_(m.variables().size()), value_(n_, -1), cost_(n_, 0), occurs_(n_),
        min_act_(m.constraints().size(), 0), max_act_(m.constraints().size(), 0) {
    for (const LinearTerm& t : m.objective()) cost_[t.var] += t.coef;
    bound_ = m.objective_constant();
    for (std::int64_t c : cost_) bound_ += std::min<std::int64_t>(0, c);
    for (std::size_t r = 0; r < m.constraints().size(); ++r) {
      for (const LinearTerm& t : m.constraints()[r].terms) {
        occurs_[t.var].push_back({r, t.coef});
        min_act_[r] += std::min<std::int64_t>(0, t.coef);
        max_act_[r] += std::max<std::int64_t>(0, t.coef);
      }
    }
  }

  SolveResult run() {
    for (std::size_t r = 0; r < m_.constraints().size(); ++r) queue_.push_back(r);
    if (propagate()) dfs(0);
    result_.status = aborted_ ? SolveStatus::NodeLimit : found_ ? SolveStatus::Optimal : SolveStatus::Infeasible;
    return result_;
  }

 private:
  struct Occurrence {
    std::size_t row;
    std::int64_t coef;
  };

  void fix(std::size_t var, int v) {
    value_[var] = static_cast<std::int8_t>(v);
    trail_.push_back(var);
    bound_ += (v ? cost_[var] : 0) - std::min<std::int64_t>(0, cost_[var]);
    for (const Occurrence& o : occurs_[var]) {
      min_act_[o.row] += (v ? o.coef : 0) - std::min<std::int64_t>(0, o.coef);
      max_act_[o.row] += (v ? o.coef : 0) - std::max<std::int64_t>(0, o.coef);
      queue_.push_back(o.row);
    }
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const std::size_t var = trail_.back();
      trail_.pop_back();
      const int v = value_[var];
      bound_ -= (v ? cost_[var] : 0) - std::min<std::int64_t>(0, cost_[var]);
      for (const Occurrence& o : occurs_[var]) {
        min_act_[o.row] -= (v ? o.coef : 0) - std::min<std::int64_t>(0, o.coef);
        max_act_[o.row] -= (v ? o.coef : 0) - std::max<std::int64_t>(0, o.coef);
      }
      value_[var] = -1;
    }
  }

  bool propagate() {
    while (!queue_.empty()) {
      const std::size_t r = queue_.back();
      queue_.pop_back();
      const Constraint& c = m_.constraints()[r];
      const bool upper = c.relation != Relation::GreaterEqual;
      const bool lower = c.relation != Relation::LessEqual;
      if (upper && min_act_[r] > c.rhs) return false;
      if (lower && max_act_[r] < c.rhs) return false;
      for (const LinearTerm& t : c.terms) {
        if (value_[t.var] != -1) continue;
        const std::int64_t a = t.coef;
        int forced = -1;
        if (upper) {
          if (a > 0 && min_act_[r] + a > c.rhs) forced = 0;
          if (a < 0 && min_act_[r] - a > c.rhs) forced = 1;
        }
        if (lower) {
          if (a > 0 && max_act_[r] - a < c.rhs) forced = forced == 0 ? 2 : 1;
          if (a < 0 && max_act_[r] + a < c.rhs) forced = forced == 1 ? 2 : 0;
        }
        if (forced == 2) return false;
        if (forced != -1) {
          fix(t.var, forced);
          if (upper && min_act_[r] > c.rhs) return false;
          if (lower && max_act_[r] < c.rhs) return false;
        }
      }
    }
    return true;
  }

  void dfs(std::size_t from) {
    if (aborted_) return;
    if (++result_.nodes > options_.node_limit) {
      aborted_ = true;
      return;
    }
    if (found_ && bound_ >= result_.objective) return;
    while (from < n_ && value_[from] != -1) ++from;
    if (from == n_) {
      found_ = true;
      result_.objective = bound_;
      result_.assignment.assign(value_.begin(), value_.end());
      return;
    }
    const int first = cost_[from] < 0 ? 1 : 0;
    for (int v : {first, 1 - first}) {
      const std::size_t mark = trail_.size();
      queue_.clear();
      fix(from, v);
      if (propagate()) dfs(from + 1);
      undo(mark);
      if (aborted_) return;
    }
  }

  const IpModel& m_;
  SolveOptions options_;
  std::size_t n_;
  std::vector<std::int8_t> value_;
  std::vector<std::int64_t> cost_;
  std::vector<std::vector<Occurrence>> occurs_;
  std::vector<std::int64_t> min_act_;
  std::vector<std::int64_t> max_act_;
  std::int64_t bound_ = 0;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> queue_;
  bool found_ = false;
  bool aborted_ = false;
  SolveResult result_;
};

}  // namespace

SolveResult solve_binary_program(const IpModel& m, const SolveOptions& options) {
  return BranchAndBound(m, options).run();
}

// ---------------------------------------------------------------------------------------
// Subset oracle

OracleResult brute_force_add_edge_optimum(const Graph& g, std::size_t k, std::optional<std::size_t> edge_budget) {
  require_k(g, k);
  const auto cand = candidate_edges(g);
  const std::size_t budget = std::min(edge_budget.value_or(cand.size()), cand.size());

  long double visits = 0;
  long double binom = 1;
  for (std::size_t j = 0; j <= budget; ++j) {
    if (j > 0) binom = binom * static_cast<long double>(cand.size() - j + 1) / static_cast<long double>(j);
    visits += binom;
  }
  if (visits > 1e7L) throw std::invalid_argument("subset search exceeds 10^7 candidates");

  const auto vs = g.vertices();
  std::vector<std::size_t> degree(g.id_bound(), 0);
  for (VertexId v : vs) degree[v] = g.degree(v);
  auto diverse = [&]() {
    std::map<std::size_t, std::set<CommunityId>> spread;
    for (VertexId v : vs) spread[degree[v]].insert(g.community(v));
    return std::all_of(spread.begin(), spread.end(), [&](const auto& kv) { return kv.second.size() >= k; });
  };

  OracleResult out;
  std::vector<std::size_t> pick;
  for (std::size_t size = 0; size <= budget && !out.cost; ++size) {
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      for (std::size_t i : pick) ++degree[cand[i].u], ++degree[cand[i].v];
      const bool ok = diverse();
      for (std::size_t i : pick) --degree[cand[i].u], --degree[cand[i].v];
      if (ok) {
        out.cost = size;
        for (std::size_t i : pick) out.witness.push_back(cand[i]);
        break;
      }
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == cand.size() - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  if (out.cost) {
    Graph check = g;
    for (const Edge& e : out.witness) check.add_edge(e.u, e.v);
    if (!is_k_structurally_diverse(check, k)) throw std::logic_error("oracle witness failed verification");
  }
  return out;
}

std::string format_oracle(const OracleResult& r) {
  std::ostringstream out;
  out << "feasible: " << (r.cost ? "true" : "false") << '\n';
  if (r.cost) {
    out << "cost: " << *r.cost << "\n# witness\n";
    for (const Edge& e : r.witness) out << e.u << ' ' << e.v << '\n';
  }
  return out.str();
}

}  // namespace sda
