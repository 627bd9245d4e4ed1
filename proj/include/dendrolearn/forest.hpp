#pragma once

// Dependency-forest learning: each candidate edge carries the total-bits gain
// n*I(i,j) - (card_i-1)(card_j-1)*c(n)/2, and a thresholded Kruskal sweep
// keeps every positive-gain edge that joins two distinct components. The
// result may be several trees, or no edges at all.

#include <cstdint>
#include <utility>
#include <vector>

#include "dendrolearn/dataset.hpp"
#include "dendrolearn/scoring.hpp"

namespace dendrolearn {

struct WeightedEdge {
  int i = 0;        // i < j
  int j = 0;
  Bits mi = 0.0;    // per-example mutual information
  Bits gain = 0.0;  // total bits saved by adding the edge
};

// Undirected acyclic edge set over nodes 1..node_count; edges kept sorted.
struct ForestStructure {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;  // each (i, j) with i < j
};

// A rooted orientation of a forest: every node has at most one parent, which
// precedes it in `order`; parent 0 means the node is a root.
struct DendroidStructure {
  std::vector<int> order;   // permutation of 1..R in evaluation order
  std::vector<int> parent;  // parent[node-1] in {0} or an earlier node

  int node_count() const { return static_cast<int>(order.size()); }
  int parent_of(int node) const { return parent[node - 1]; }
};

class DisjointSets {
 public:
  explicit DisjointSets(int count);
  int find(int x);
  // Merges the two sets; returns false when a and b were already joined.
  bool unite(int a, int b);

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

WeightedEdge edge_gain(const Dataset& d, int i, int j, const Penalty& p);

// Processes all pairs in descending gain order (ties by ascending (i,j)) and
// stops at the first gain <= 0. Gain computation may run on several threads
// (0 = auto); the result is identical to the sequential sweep either way.
ForestStructure learn_forest(const Dataset& d, const Penalty& p, int threads = 0);

// Roots each component at its smallest node and orders nodes by concatenated
// breadth-first traversals (components by root index, neighbors ascending).
DendroidStructure orient_forest(const ForestStructure& f);

// Score of a rooted forest computed from marginal entropies and per-edge
// mutual informations; equals the generic count-table score of the same
// structure. Kept as an independent computation route on purpose.
ScoreBreakdown forest_description_length(const DendroidStructure& s, const Dataset& d,
                                         const Penalty& p);

// Exhaustive minimum over all acyclic edge subsets (test oracle; R <= 6).
// Ties resolve to the lexicographically smallest edge set.
std::pair<ForestStructure, Bits> brute_force_best_forest(const Dataset& d, const Penalty& p);

}  // namespace dendrolearn
