#include "dendrolearn/impute.hpp"

#include "dendrolearn/errors.hpp"

namespace dendrolearn {

std::vector<Completion> posterior(const FittedModel& m, const PartialRecord& r) {
  const int attr_count = m.schema.size();
  if (static_cast<int>(r.values.size()) != attr_count)
    throw ArgumentError("record has " + std::to_string(r.values.size()) + " values, expected " +
                        std::to_string(attr_count));

  std::vector<int> missing;
  std::vector<int> missing_cards;
  std::int64_t completions = 1;
  for (int j = 0; j < attr_count; ++j) {
    if (r.values[j] == kMissingValue) {
      missing.push_back(j);
      missing_cards.push_back(m.schema.cards[j]);
      if (completions > kMaxCompletions / m.schema.cards[j])
        throw CapacityError("completion space exceeds " + std::to_string(kMaxCompletions));
      completions *= m.schema.cards[j];
    } else if (r.values[j] < 0 || r.values[j] >= m.schema.cards[j]) {
      throw ArgumentError("value out of range for attribute '" + m.schema.names[j] + "'");
    }
  }
  if (static_cast<int>(missing.size()) == attr_count)
    throw ArgumentError("at least one attribute must be known");

  std::vector<Completion> result;
  result.reserve(completions);
  std::vector<ValueCode> record = r.values;
  std::vector<ValueCode> fill(missing.size());
  double mass = 0.0;
  for (std::int64_t idx = 0; idx < completions; ++idx) {
    mixed_radix_decode(idx, missing_cards, fill);
    for (std::size_t k = 0; k < missing.size(); ++k) record[missing[k]] = fill[k];
    Completion c;
    c.record = record;
    c.probability = joint_probability(m, record);
    mass += c.probability;
    result.push_back(std::move(c));
  }
  for (Completion& c : result) c.probability /= mass;
  return result;
}

std::vector<ValueCode> map_impute(const FittedModel& m, const PartialRecord& r) {
  const std::vector<Completion> dist = posterior(m, r);
  std::size_t best = 0;
  for (std::size_t k = 1; k < dist.size(); ++k) {
    if (dist[k].probability > dist[best].probability) best = k;
  }
  return dist[best].record;
}

}  // namespace dendrolearn
