#pragma once

// Model-space counting and exhaustive state-decomposition selection for tiny
// input-output problems. A "state model" groups the cells of a predictor
// product domain into states that share one conditional distribution; the
// number of such groupings of m cells is the m-th Bell number.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dendrolearn/dataset.hpp"
#include "dendrolearn/scoring.hpp"

namespace dendrolearn {

using BigInt = boost::multiprecision::cpp_int;

// A partition of an m-cell domain into states 1..S, stored in canonical form:
// cell 0 carries state 1 and new labels appear in increasing order of first
// occurrence (a restricted-growth string), so each partition is unique.
struct StateModel {
  int domain_size = 0;
  int state_count = 0;
  std::vector<int> assignment;  // length domain_size, labels 1..state_count
};

// Number of set partitions of an m-cell domain (the Bell number), computed by
// the Bell-triangle recurrence in exact integers.
BigInt count_models(int m);

// For attribute cardinalities cards[0..R-1]: the number of stage-decomposed
// models over all R stages, and the number of pairwise comparisons needed to
// select one (product and sum of per-stage counts, minus R).
std::pair<BigInt, BigInt> count_model_space(std::span<const int> cards);

inline constexpr int kMaxEnumerationCells = 12;

// Visits every canonical StateModel of an m-cell domain exactly once, in
// lexicographic assignment order; count equals count_models(m).
void for_each_state_model(int m, const std::function<void(const StateModel&)>& visit);

std::vector<StateModel> enumerate_state_models(int m);

struct BestDecomposition {
  StateModel model;
  Bits score = 0.0;  // conditional empirical entropy + (k/2)*c(n), total bits
};

// Exhaustive search over every grouping of the predictor product domain
// (domain size <= 12): scores each grouping's conditional table and returns
// the minimizer. Ties break toward fewer states, then the lexicographically
// smaller assignment.
BestDecomposition best_state_decomposition(const Dataset& d, int class_attr,
                                           std::span<const int> predictors, const Penalty& p);

}  // namespace dendrolearn
