#include "sda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace sda {
namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

/// Component index per vertex id (kUnreached for absent ids) and the component count.
std::pair<std::vector<std::size_t>, std::size_t> components(const Graph& g) {
  std::vector<std::size_t> comp(g.id_bound(), kUnreached);
  std::size_t count = 0;
  std::vector<VertexId> stack;
  for (VertexId s : g.vertices()) {
    if (comp[s] != kUnreached) continue;
    comp[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId x = stack.back();
      stack.pop_back();
      for (VertexId y : g.neighbors(x)) {
        if (comp[y] == kUnreached) {
          comp[y] = count;
          stack.push_back(y);
        }
      }
    }
    ++count;
  }
  return {comp, count};
}

}  // namespace

double clustering_coefficient(const Graph& g) {
  const auto vs = g.vertices();
  if (vs.empty()) return 0.0;
  std::vector<std::uint8_t> mark(g.id_bound(), 0);
  double total = 0.0;
  for (VertexId v : vs) {
    const auto nv = g.neighbors(v);
    const std::size_t d = nv.size();
    if (d < 2) continue;
    for (VertexId u : nv) mark[u] = 1;
    std::size_t closed = 0;
    for (VertexId u : nv) {
      for (VertexId w : g.neighbors(u)) closed += mark[w];
    }
    for (VertexId u : nv) mark[u] = 0;
    // Each triangle through v was seen from both of its other corners.
    total += static_cast<double>(closed) / static_cast<double>(d * (d - 1));
  }
  return total / static_cast<double>(vs.size());
}

double average_shortest_path_length(const Graph& g, std::size_t sample_size, std::uint64_t seed) {
  std::vector<VertexId> sources = g.vertices();
  if (sample_size != 0 && sample_size < sources.size()) {
    std::vector<VertexId> picked;
    std::sample(sources.begin(), sources.end(), std::back_inserter(picked), sample_size, std::mt19937_64(seed));
    sources = std::move(picked);
  }
  std::vector<std::size_t> dist(g.id_bound(), kUnreached);
  std::vector<VertexId> touched;
  std::deque<VertexId> queue;
  long double sum = 0;
  std::uint64_t pairs = 0;
  for (VertexId s : sources) {
    dist[s] = 0;
    touched.assign(1, s);
    queue.assign(1, s);
    while (!queue.empty()) {
      const VertexId x = queue.front();
      queue.pop_front();
      for (VertexId y : g.neighbors(x)) {
        if (dist[y] != kUnreached) continue;
        dist[y] = dist[x] + 1;
        sum += dist[y];
        ++pairs;
        touched.push_back(y);
        queue.push_back(y);
      }
    }
    for (VertexId x : touched) dist[x] = kUnreached;
  }
  return pairs == 0 ? 0.0 : static_cast<double>(sum / pairs);
}

std::vector<double> betweenness(const Graph& g) {
  const std::size_t n = g.id_bound();
  std::vector<double> bc(n, 0.0);
  std::vector<std::vector<VertexId>> pred(n);
  std::vector<double> sigma(n, 0.0);
  std::vector<double> delta(n, 0.0);
  std::vector<std::size_t> dist(n, kUnreached);
  std::vector<VertexId> order;
  std::deque<VertexId> queue;
  for (VertexId s : g.vertices()) {
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const VertexId x = queue.front();
      queue.pop_front();
      order.push_back(x);
      for (VertexId y : g.neighbors(x)) {
        if (dist[y] == kUnreached) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
        if (dist[y] == dist[x] + 1) {
          sigma[y] += sigma[x];
          pred[y].push_back(x);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const VertexId w = *it;
      for (VertexId x : pred[w]) delta[x] += sigma[x] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
    for (VertexId x : order) {
      pred[x].clear();
      sigma[x] = 0.0;
      delta[x] = 0.0;
      dist[x] = kUnreached;
    }
  }
  for (double& b : bc) b /= 2.0;
  return bc;
}

double mean_betweenness(const Graph& g) {
  if (g.vertex_count() == 0) return 0.0;
  const auto bc = betweenness(g);
  return std::accumulate(bc.begin(), bc.end(), 0.0) / static_cast<double>(g.vertex_count());
}

double degree_centralization(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n < 3) throw std::invalid_argument("degree centralization needs at least 3 vertices");
  const std::size_t dmax = g.max_degree();
  double spread = 0.0;
  for (VertexId v : g.vertices()) spread += static_cast<double>(dmax - g.degree(v));
  return spread / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
}

std::map<std::size_t, std::size_t> degree_histogram(const Graph& g) {
  std::map<std::size_t, std::size_t> hist;
  for (VertexId v : g.vertices()) ++hist[g.degree(v)];
  return hist;
}

EigenvectorCentrality eigenvector_centrality(const Graph& g, double tolerance, std::size_t max_iterations) {
  const auto vs = g.vertices();
  EigenvectorCentrality out;
  out.score.assign(g.id_bound(), 0.0);
  if (vs.empty()) {
    out.converged = true;
    return out;
  }
  const double start = 1.0 / std::sqrt(static_cast<double>(vs.size()));
  for (VertexId v : vs) out.score[v] = start;
  std::vector<double> next(g.id_bound(), 0.0);
  while (out.iterations < max_iterations) {
    ++out.iterations;
    double norm = 0.0;
    for (VertexId v : vs) {
      double acc = out.score[v];
      for (VertexId u : g.neighbors(v)) acc += out.score[u];
      next[v] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    double change = 0.0;
    for (VertexId v : vs) {
      next[v] /= norm;
      change = std::max(change, std::abs(next[v] - out.score[v]));
    }
    out.score.swap(next);
    if (change < tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n == 0) return 1.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return x == y ? 1.0 : 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double eigenvector_centrality_correlation(const Graph& before, const Graph& after, const std::vector<SplitRecord>& splits,
                                          SubstituteAggregation aggregation) {
  const auto eb = eigenvector_centrality(before);
  const auto ea = eigenvector_centrality(after);
  if (!eb.converged || !ea.converged) throw std::runtime_error("eigenvector centrality did not converge");
  const auto origin = resolve_origins(after, splits);
  std::vector<double> folded(std::max<std::size_t>(before.id_bound(), after.id_bound()), 0.0);
  for (VertexId v : after.vertices()) {
    const VertexId o = origin[v];
    if (o >= folded.size()) continue;
    folded[o] = aggregation == SubstituteAggregation::Sum ? folded[o] + ea.score[v] : std::max(folded[o], ea.score[v]);
  }
  std::vector<double> x;
  std::vector<double> y;
  for (VertexId v : before.vertices()) {
    x.push_back(eb.score[v]);
    y.push_back(folded[v]);
  }
  return pearson_correlation(x, y);
}

double disconnected_pair_fraction(const Graph& before, const Graph& after, const std::vector<SplitRecord>& splits) {
  const auto [comp_before, count_before] = components(before);
  const auto [comp_after, count_after] = components(after);
  const auto origin = resolve_origins(after, splits);
  const auto originals = before.vertices();
  if (originals.empty()) return 0.0;

  // Dense index over the original vertices so reachability sets are bitsets.
  std::vector<std::size_t> slot(before.id_bound(), kUnreached);
  for (std::size_t i = 0; i < originals.size(); ++i) slot[originals[i]] = i;
  const std::size_t words = (originals.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> members(count_after, std::vector<std::uint64_t>(words, 0));
  std::vector<std::vector<std::size_t>> images(originals.size());
  for (VertexId v : after.vertices()) {
    const VertexId o = origin[v];
    if (o >= slot.size() || slot[o] == kUnreached) continue;
    const std::size_t i = slot[o];
    members[comp_after[v]][i / 64] |= std::uint64_t{1} << (i % 64);
    images[i].push_back(comp_after[v]);
  }
  std::vector<std::vector<std::uint64_t>> group(count_before, std::vector<std::uint64_t>(words, 0));
  std::vector<std::uint64_t> group_size(count_before, 0);
  for (std::size_t i = 0; i < originals.size(); ++i) {
    const std::size_t c = comp_before[originals[i]];
    group[c][i / 64] |= std::uint64_t{1} << (i % 64);
    ++group_size[c];
  }

  std::uint64_t connected_before = 0;
  for (std::uint64_t s : group_size) connected_before += s * (s - 1) / 2;
  if (connected_before == 0) return 0.0;

  std::uint64_t still_connected = 0;  // ordered pairs, halved below
  std::vector<std::uint64_t> reach(words);
  for (std::size_t i = 0; i < originals.size(); ++i) {
    std::fill(reach.begin(), reach.end(), 0);
    std::sort(images[i].begin(), images[i].end());
    images[i].erase(std::unique(images[i].begin(), images[i].end()), images[i].end());
    for (std::size_t k : images[i]) {
      for (std::size_t w = 0; w < words; ++w) reach[w] |= members[k][w];
    }
    const auto& mine = group[comp_before[originals[i]]];
    std::uint64_t hits = 0;
    for (std::size_t w = 0; w < words; ++w) hits += static_cast<std::uint64_t>(std::popcount(reach[w] & mine[w]));
    if (hits > 0) still_connected += hits - 1;
  }
  const std::uint64_t kept = still_connected / 2;
  return static_cast<double>(connected_before - kept) / static_cast<double>(connected_before);
}

std::vector<VertexId> label_propagation(const Graph& g, std::uint64_t seed, std::size_t max_sweeps) {
  std::vector<VertexId> label(g.id_bound(), kNoVertex);
  auto order = g.vertices();
  for (VertexId v : order) label[v] = v;
  std::mt19937_64 rng(seed);
  std::unordered_map<VertexId, std::size_t> tally;
  std::vector<VertexId> best;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (VertexId v : order) {
      if (g.degree(v) == 0) continue;
      tally.clear();
      for (VertexId u : g.neighbors(v)) ++tally[label[u]];
      std::size_t top = 0;
      for (const auto& [l, c] : tally) top = std::max(top, c);
      best.clear();
      for (const auto& [l, c] : tally) {
        if (c == top) best.push_back(l);
      }
      std::sort(best.begin(), best.end());
      if (std::find(best.begin(), best.end(), label[v]) != best.end()) continue;
      label[v] = best[std::uniform_int_distribution<std::size_t>(0, best.size() - 1)(rng)];
      changed = true;
    }
    if (!changed) break;
  }
  return label;
}

double normalized_mutual_information(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("nmi: length mismatch");
  const double n = static_cast<double>(a.size());
  if (a.empty()) return 1.0;
  std::unordered_map<std::uint32_t, double> ca;
  std::unordered_map<std::uint32_t, double> cb;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1;
    cb[b[i]] += 1;
    joint[{a[i], b[i]}] += 1;
  }
  auto entropy = [n](const std::unordered_map<std::uint32_t, double>& counts) {
    double h = 0.0;
    for (const auto& [l, c] : counts) h -= c / n * std::log(c / n);
    return h;
  };
  const double ha = entropy(ca);
  const double hb = entropy(cb);
  if (ha + hb == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) mi += c / n * std::log(c * n / (ca[key.first] * cb[key.second]));
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

double community_agreement(const Graph& g, const std::vector<CommunityId>& reference, std::uint64_t seed) {
  const auto detected = label_propagation(g, seed);
  std::vector<std::uint32_t> x;
  std::vector<std::uint32_t> y;
  for (VertexId v : g.vertices()) {
    x.push_back(detected[v]);
    y.push_back(reference.at(v));
  }
  return normalized_mutual_information(x, y);
}

MetricsReport compute_metrics(const Graph& g, const MetricsOptions& options) {
  MetricsReport r;
  r.vertices = g.vertex_count();
  r.edges = g.edge_count();
  r.cc = clustering_coefficient(g);
  r.aspl = average_shortest_path_length(g, options.aspl_sample, options.seed);
  if (options.betweenness) r.bc = mean_betweenness(g);
  if (g.vertex_count() >= 3) r.dc = degree_centralization(g);
  r.degree_hist = degree_histogram(g);
  return r;
}

MetricsReport compare_metrics(const Graph& before, const Graph& after, const std::vector<SplitRecord>& splits,
                              const MetricsOptions& options) {
  MetricsReport r = compute_metrics(after, options);
  r.ec_corr = eigenvector_centrality_correlation(before, after, splits, options.aggregation);
  r.disconnected_pair_fraction = disconnected_pair_fraction(before, after, splits);
  std::vector<CommunityId> reference(after.id_bound(), 0);
  for (VertexId v : after.vertices()) reference[v] = after.community(v);
  r.community_agreement = community_agreement(after, reference, options.seed);
  return r;
}

std::string format_metrics(const MetricsReport& r) {
  std::ostringstream out;
  out.precision(10);
  out << "vertices: " << r.vertices << '\n';
  out << "edges: " << r.edges << '\n';
  out << "cc: " << r.cc << '\n';
  out << "aspl: " << r.aspl << '\n';
  if (r.bc) out << "bc_mean: " << *r.bc << '\n';
  if (r.dc) out << "dc_freeman: " << *r.dc << '\n';
  if (r.ec_corr) out << "ec_corr: " << *r.ec_corr << '\n';
  if (r.disconnected_pair_fraction) out << "disconnected_pair_fraction: " << *r.disconnected_pair_fraction << '\n';
  if (r.community_agreement) out << "community_agreement_nmi: " << *r.community_agreement << '\n';
  out << "\n# degree count\n";
  for (const auto& [d, c] : r.degree_hist) out << d << ' ' << c << '\n';
  return out.str();
}

}  // namespace sda
