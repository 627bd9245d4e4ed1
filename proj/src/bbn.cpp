#include "dendrolearn/bbn.hpp"

#include <algorithm>

#include "dendrolearn/errors.hpp"
#include "dendrolearn/infotheory.hpp"

namespace dendrolearn {

void validate_structure(const BbnStructure& s, int attribute_count) {
  if (s.node_count() != attribute_count)
    throw ArgumentError("structure covers " + std::to_string(s.node_count()) +
                        " nodes, dataset has " + std::to_string(attribute_count));
  if (static_cast<int>(s.parents.size()) != attribute_count)
    throw ArgumentError("structure parent table does not match node count");

  std::vector<int> position(attribute_count + 1, -1);
  for (int t = 0; t < attribute_count; ++t) {
    const int node = s.order[t];
    if (node < 1 || node > attribute_count || position[node] != -1)
      throw ArgumentError("structure order is not a permutation of 1.." +
                          std::to_string(attribute_count));
    position[node] = t;
  }
  for (int node = 1; node <= attribute_count; ++node) {
    const auto& parents = s.parents[node - 1];
    for (std::size_t k = 0; k < parents.size(); ++k) {
      const int p = parents[k];
      if (p < 1 || p > attribute_count || position[p] >= position[node])
        throw ArgumentError("node " + std::to_string(node) +
                            " has a parent that does not precede it in the order");
      if (k > 0 && parents[k - 1] >= p)
        throw ArgumentError("parent sets must be sorted and duplicate-free");
    }
  }
}

BbnStructure from_dendroid(const DendroidStructure& s) {
  BbnStructure b;
  b.order = s.order;
  b.parents.assign(s.order.size(), {});
  for (int node : s.order) {
    const int q = s.parent_of(node);
    if (q != 0) b.parents[node - 1].push_back(q);
  }
  return b;
}

BbnStructure empty_structure(int attribute_count) {
  BbnStructure b;
  b.order.resize(attribute_count);
  for (int j = 0; j < attribute_count; ++j) b.order[j] = j + 1;
  b.parents.assign(attribute_count, {});
  return b;
}

namespace {

constexpr int kMaxExhaustiveNodes = 12;
constexpr std::int64_t kSubsetBudget = std::int64_t{1} << 22;
constexpr double kGreedyTolerance = 1e-9;

void check_order(const Dataset& d, std::span<const int> order) {
  const int r = d.attribute_count();
  if (static_cast<int>(order.size()) != r)
    throw ArgumentError("ordering must list all " + std::to_string(r) + " attributes");
  std::vector<bool> seen(r + 1, false);
  for (int node : order) {
    if (node < 1 || node > r || seen[node])
      throw ArgumentError("ordering is not a permutation of 1.." + std::to_string(r));
    seen[node] = true;
  }
}

// Two-term score of one node given a candidate parent set.
Bits family_score(const Dataset& d, int child, std::span<const int> parents, double cn) {
  CondCountTable t = conditional_counts(d, child, parents);
  return conditional_empirical_entropy(t) +
         0.5 * static_cast<double>(stage_param_count(t.states, t.child_card)) * cn;
}

std::int64_t choose(int n, int k) {
  std::int64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

}  // namespace

BbnStructure learn_bbn_exhaustive(const Dataset& d, std::span<const int> order, const Penalty& p,
                                  int max_parents) {
  check_order(d, order);
  if (max_parents < 0) throw ArgumentError("max_parents must be >= 0");
  const int r = d.attribute_count();
  if (r > kMaxExhaustiveNodes)
    throw CapacityError("exhaustive search is limited to " + std::to_string(kMaxExhaustiveNodes) +
                        " attributes");
  std::int64_t subsets = 0;
  for (int t = 0; t < r; ++t)
    for (int k = 0; k <= std::min(t, max_parents); ++k) subsets += choose(t, k);
  if (subsets > kSubsetBudget) throw CapacityError("parent-subset enumeration exceeds the budget");

  const double cn = penalty_value(p, d.row_count());
  BbnStructure b;
  b.order.assign(order.begin(), order.end());
  b.parents.assign(r, {});

  std::vector<int> predecessors;
  for (int t = 0; t < r; ++t) {
    const int node = order[t];
    std::vector<int> sorted_preds = predecessors;
    std::sort(sorted_preds.begin(), sorted_preds.end());

    // Subsets by ascending size, lexicographic within a size, so the first
    // strict minimum wins ties toward fewer parents, then smaller indices.
    Bits best = family_score(d, node, {}, cn);
    std::vector<int> best_set;
    const int limit = std::min<int>(max_parents, static_cast<int>(sorted_preds.size()));
    std::vector<int> pick;
    for (int size = 1; size <= limit; ++size) {
      pick.assign(size, 0);
      for (int k = 0; k < size; ++k) pick[k] = k;
      while (true) {
        std::vector<int> candidate(size);
        for (int k = 0; k < size; ++k) candidate[k] = sorted_preds[pick[k]];
        const Bits score = family_score(d, node, candidate, cn);
        if (score < best) {
          best = score;
          best_set = std::move(candidate);
        }
        int k = size - 1;
        while (k >= 0 && pick[k] == static_cast<int>(sorted_preds.size()) - size + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int m = k + 1; m < size; ++m) pick[m] = pick[m - 1] + 1;
      }
    }
    b.parents[node - 1] = std::move(best_set);
    predecessors.push_back(node);
  }
  return b;
}

BbnStructure learn_bbn_greedy(const Dataset& d, std::span<const int> order, const Penalty& p,
                              int max_parents) {
  check_order(d, order);
  if (max_parents < 0) throw ArgumentError("max_parents must be >= 0");
  const int r = d.attribute_count();
  const double cn = penalty_value(p, d.row_count());

  BbnStructure b;
  b.order.assign(order.begin(), order.end());
  b.parents.assign(r, {});

  std::vector<int> predecessors;
  for (int t = 0; t < r; ++t) {
    const int node = order[t];
    std::vector<int> candidates = predecessors;
    std::sort(candidates.begin(), candidates.end());

    std::vector<int> current;
    Bits current_score = family_score(d, node, {}, cn);
    while (static_cast<int>(current.size()) < max_parents) {
      Bits best_score = current_score;
      int best_candidate = 0;
      for (int c : candidates) {
        if (std::find(current.begin(), current.end(), c) != current.end()) continue;
        std::vector<int> trial = current;
        trial.insert(std::upper_bound(trial.begin(), trial.end(), c), c);
        const Bits score = family_score(d, node, trial, cn);
        if (score < best_score) {
          best_score = score;
          best_candidate = c;
        }
      }
      if (best_candidate == 0 || !(best_score < current_score - kGreedyTolerance)) break;
      current.insert(std::upper_bound(current.begin(), current.end(), best_candidate),
                     best_candidate);
      current_score = best_score;
    }
    b.parents[node - 1] = std::move(current);
    predecessors.push_back(node);
  }
  return b;
}

ScoreBreakdown bbn_description_length(const BbnStructure& s, const Dataset& d, const Penalty& p) {
  return description_length(s, d, p, false);
}

}  // namespace dendrolearn
