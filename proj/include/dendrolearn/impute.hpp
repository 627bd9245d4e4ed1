#pragma once

// Missing-value inference: the posterior over completions of a partially
// observed record is computed by exact enumeration of the joint probability
// over the missing attributes, then normalized.

#include <vector>

#include "dendrolearn/dataset.hpp"
#include "dendrolearn/model.hpp"

namespace dendrolearn {

inline constexpr ValueCode kMissingValue = -1;

struct PartialRecord {
  std::vector<ValueCode> values;  // kMissingValue marks an unknown cell
};

struct Completion {
  std::vector<ValueCode> record;
  double probability = 0.0;
};

inline constexpr std::int64_t kMaxCompletions = 1'000'000;

// All completions with their normalized posterior probabilities, enumerated
// in lexicographic order of the missing values (first missing attribute most
// significant). Requires at least one known attribute.
std::vector<Completion> posterior(const FittedModel& m, const PartialRecord& r);

// Most probable completion; ties resolve to the lexicographically smallest.
std::vector<ValueCode> map_impute(const FittedModel& m, const PartialRecord& r);

}  // namespace dendrolearn
