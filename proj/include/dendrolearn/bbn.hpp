#pragma once

// Belief-network structure search under a fixed node ordering. The score is
// node-decomposable, so each node's parent set is chosen independently:
// exhaustively over all predecessor subsets (global optimum for the given
// order) or greedily by incremental parent addition.

#include <cstdint>
#include <span>
#include <vector>

#include "dendrolearn/dataset.hpp"
#include "dendrolearn/forest.hpp"
#include "dendrolearn/scoring.hpp"

namespace dendrolearn {

// Acyclic by construction: parents of a node are a subset of the nodes that
// precede it in `order`. The first node always has an empty parent set.
struct BbnStructure {
  std::vector<int> order;                 // permutation of 1..R
  std::vector<std::vector<int>> parents;  // parents[node-1], ascending

  int node_count() const { return static_cast<int>(order.size()); }
  const std::vector<int>& parents_of(int node) const { return parents[node - 1]; }
};

// Throws unless `order` is a permutation of 1..R and every parent set is a
// sorted, duplicate-free subset of the node's predecessors.
void validate_structure(const BbnStructure& s, int attribute_count);

BbnStructure from_dendroid(const DendroidStructure& s);

// Natural order, no edges.
BbnStructure empty_structure(int attribute_count);

inline constexpr int kDefaultMaxParents = 4;

BbnStructure learn_bbn_exhaustive(const Dataset& d, std::span<const int> order, const Penalty& p,
                                  int max_parents = kDefaultMaxParents);

// Adds the single best parent per step while the node's score drops by more
// than 1e-9 bits; no optimality guarantee.
BbnStructure learn_bbn_greedy(const Dataset& d, std::span<const int> order, const Penalty& p,
                              int max_parents = kDefaultMaxParents);

ScoreBreakdown bbn_description_length(const BbnStructure& s, const Dataset& d, const Penalty& p);

}  // namespace dendrolearn
