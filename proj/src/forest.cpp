#include "dendrolearn/forest.hpp"

#include <algorithm>
#include <queue>
#include <thread>

#include "dendrolearn/errors.hpp"
#include "dendrolearn/infotheory.hpp"

namespace dendrolearn {

DisjointSets::DisjointSets(int count) : parent_(count), rank_(count, 0) {
  for (int i = 0; i < count; ++i) parent_[i] = i;
}

int DisjointSets::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

WeightedEdge edge_gain(const Dataset& d, int i, int j, const Penalty& p) {
  if (i > j) std::swap(i, j);
  WeightedEdge e;
  e.i = i;
  e.j = j;
  e.mi = mutual_information(pair_counts(d, i, j));
  const double n = static_cast<double>(d.row_count());
  const double coeff = static_cast<double>(d.card(i) - 1) * static_cast<double>(d.card(j) - 1);
  e.gain = n * e.mi - 0.5 * coeff * penalty_value(p, d.row_count());
  return e;
}

namespace {

std::vector<WeightedEdge> all_edge_gains(const Dataset& d, const Penalty& p, int threads) {
  const int r = d.attribute_count();
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(r) * (r - 1) / 2);
  for (int i = 1; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j) pairs.emplace_back(i, j);

  std::vector<WeightedEdge> gains(pairs.size());
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  threads = std::min<int>(threads, static_cast<int>(pairs.size()));

  if (threads <= 1 || pairs.size() < 32) {
    for (std::size_t k = 0; k < pairs.size(); ++k)
      gains[k] = edge_gain(d, pairs[k].first, pairs[k].second, p);
    return gains;
  }

  // Each worker fills a disjoint slice, so the result does not depend on the
  // thread count.
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = pairs.size() * t / threads;
    const std::size_t hi = pairs.size() * (t + 1) / threads;
    workers.emplace_back([&, lo, hi] {
      for (std::size_t k = lo; k < hi; ++k)
        gains[k] = edge_gain(d, pairs[k].first, pairs[k].second, p);
    });
  }
  for (auto& w : workers) w.join();
  return gains;
}

}  // namespace

ForestStructure learn_forest(const Dataset& d, const Penalty& p, int threads) {
  const int r = d.attribute_count();
  std::vector<WeightedEdge> queue = all_edge_gains(d, p, threads);
  std::sort(queue.begin(), queue.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  ForestStructure f;
  f.node_count = r;
  DisjointSets components(r + 1);
  for (const WeightedEdge& e : queue) {
    if (!(e.gain > 0.0)) break;
    if (components.unite(e.i, e.j)) f.edges.emplace_back(e.i, e.j);
  }
  std::sort(f.edges.begin(), f.edges.end());
  return f;
}

DendroidStructure orient_forest(const ForestStructure& f) {
  const int r = f.node_count;
  if (r < 1) throw ArgumentError("forest must cover at least one node");
  std::vector<std::vector<int>> adjacency(r + 1);
  DisjointSets components(r + 1);
  for (auto [i, j] : f.edges) {
    if (i < 1 || j < 1 || i > r || j > r || i == j)
      throw ArgumentError("edge endpoints must be distinct nodes in 1.." + std::to_string(r));
    if (!components.unite(i, j)) throw ArgumentError("edge set contains a cycle");
    adjacency[i].push_back(j);
    adjacency[j].push_back(i);
  }
  for (auto& neighbors : adjacency) std::sort(neighbors.begin(), neighbors.end());

  DendroidStructure s;
  s.order.reserve(r);
  s.parent.assign(r, 0);
  std::vector<bool> visited(r + 1, false);
  for (int root = 1; root <= r; ++root) {
    if (visited[root]) continue;
    visited[root] = true;
    std::queue<int> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const int node = frontier.front();
      frontier.pop();
      s.order.push_back(node);
      for (int next : adjacency[node]) {
        if (visited[next]) continue;
        visited[next] = true;
        s.parent[next - 1] = node;
        frontier.push(next);
      }
    }
  }
  return s;
}

namespace {

void validate_dendroid(const DendroidStructure& s, int attribute_count) {
  if (s.node_count() != attribute_count ||
      static_cast<int>(s.parent.size()) != attribute_count)
    throw ArgumentError("structure does not cover the dataset's attributes");
  std::vector<int> position(attribute_count + 1, -1);
  for (int t = 0; t < attribute_count; ++t) {
    const int node = s.order[t];
    if (node < 1 || node > attribute_count || position[node] != -1)
      throw ArgumentError("structure order is not a permutation");
    position[node] = t;
  }
  for (int node = 1; node <= attribute_count; ++node) {
    const int q = s.parent[node - 1];
    if (q != 0 && (q < 1 || q > attribute_count || position[q] >= position[node]))
      throw ArgumentError("node " + std::to_string(node) +
                          " has a parent that does not precede it");
  }
}

}  // namespace

ScoreBreakdown forest_description_length(const DendroidStructure& s, const Dataset& d,
                                         const Penalty& p) {
  validate_dendroid(s, d.attribute_count());
  const double n = static_cast<double>(d.row_count());
  ScoreBreakdown b;
  for (int node : s.order) {
    b.fit += conditional_empirical_entropy(conditional_counts(d, node, {}));
    const int q = s.parent_of(node);
    if (q != 0) b.fit -= n * mutual_information(pair_counts(d, node, q));
    b.k += stage_param_count(q == 0 ? 1 : d.card(q), d.card(node));
  }
  b.complexity = 0.5 * static_cast<double>(b.k) * penalty_value(p, d.row_count());
  b.total = b.fit + b.complexity;
  return b;
}

std::pair<ForestStructure, Bits> brute_force_best_forest(const Dataset& d, const Penalty& p) {
  const int r = d.attribute_count();
  if (r > 6) throw CapacityError("exhaustive forest enumeration is limited to 6 attributes");

  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j) pairs.emplace_back(i, j);

  ForestStructure best;
  Bits best_score = 0.0;
  bool have_best = false;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    ForestStructure candidate;
    candidate.node_count = r;
    DisjointSets components(r + 1);
    bool acyclic = true;
    for (std::size_t e = 0; e < pairs.size() && acyclic; ++e) {
      if ((mask >> e) & 1u) {
        if (components.unite(pairs[e].first, pairs[e].second))
          candidate.edges.push_back(pairs[e]);
        else
          acyclic = false;
      }
    }
    if (!acyclic) continue;
    const Bits score = forest_description_length(orient_forest(candidate), d, p).total;
    if (!have_best || score < best_score ||
        (score == best_score && candidate.edges < best.edges)) {
      best = std::move(candidate);
      best_score = score;
      have_best = true;
    }
  }
  return {best, best_score};
}

}  // namespace dendrolearn
