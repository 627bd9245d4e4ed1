#include "dendrolearn/partitions.hpp"

#include <algorithm>
#include <cmath>

#include "dendrolearn/errors.hpp"
#include "dendrolearn/infotheory.hpp"

namespace dendrolearn {

namespace {

// Bell-triangle upper bound; beyond this the numbers are astronomically large
// and the quadratic recurrence stops being a sensible way to spend time.
constexpr int kMaxBellCells = 1024;

std::vector<BigInt> bell_numbers_up_to(int m) {
  std::vector<BigInt> bell(m + 1);
  bell[0] = 1;
  if (m == 0) return bell;
  std::vector<BigInt> row{1};
  bell[1] = 1;
  for (int i = 2; i <= m; ++i) {
    std::vector<BigInt> next(row.size() + 1);
    next[0] = row.back();
    for (std::size_t k = 0; k < row.size(); ++k) next[k + 1] = next[k] + row[k];
    bell[i] = next.back();
    row = std::move(next);
  }
  return bell;
}

}  // namespace

BigInt count_models(int m) {
  if (m < 1) throw ArgumentError("domain size must be >= 1");
  if (m > kMaxBellCells)
    throw CapacityError("model counting is limited to " + std::to_string(kMaxBellCells) + " cells");
  return bell_numbers_up_to(m)[m];
}

std::pair<BigInt, BigInt> count_model_space(std::span<const int> cards) {
  if (cards.empty()) throw ArgumentError("at least one attribute is required");
  for (int c : cards) {
    if (c < 1) throw ArgumentError("cardinalities must be >= 1");
  }
  const int r = static_cast<int>(cards.size());

  // Stage N conditions attribute N+1 on the product domain of the first N.
  std::vector<std::int64_t> stage_cells(r);
  std::int64_t product = 1;
  for (int stage = 0; stage < r; ++stage) {
    stage_cells[stage] = product;
    if (stage + 1 < r) {
      if (product > kMaxBellCells) throw CapacityError("stage domain exceeds the counting cap");
      product *= cards[stage];
    }
  }
  const std::int64_t max_cells = *std::max_element(stage_cells.begin(), stage_cells.end());
  if (max_cells > kMaxBellCells) throw CapacityError("stage domain exceeds the counting cap");

  const std::vector<BigInt> bell = bell_numbers_up_to(static_cast<int>(max_cells));
  BigInt models = 1;
  BigInt comparisons = 0;
  for (int stage = 0; stage < r; ++stage) {
    models *= bell[stage_cells[stage]];
    comparisons += bell[stage_cells[stage]];
  }
  comparisons -= r;
  return {models, comparisons};
}

namespace {

void visit_assignments(StateModel& sm, int cell, int max_label,
                       const std::function<void(const StateModel&)>& visit) {
  if (cell == sm.domain_size) {
    sm.state_count = max_label;
    visit(sm);
    return;
  }
  for (int label = 1; label <= max_label + 1; ++label) {
    sm.assignment[cell] = label;
    visit_assignments(sm, cell + 1, std::max(max_label, label), visit);
  }
}

}  // namespace

void for_each_state_model(int m, const std::function<void(const StateModel&)>& visit) {
  if (m < 1) throw ArgumentError("domain size must be >= 1");
  if (m > kMaxEnumerationCells)
    throw CapacityError("state-model enumeration is limited to " +
                        std::to_string(kMaxEnumerationCells) + " cells");
  StateModel sm;
  sm.domain_size = m;
  sm.assignment.assign(m, 0);
  sm.assignment[0] = 1;
  visit_assignments(sm, 1, 1, visit);
}

std::vector<StateModel> enumerate_state_models(int m) {
  std::vector<StateModel> models;
  for_each_state_model(m, [&](const StateModel& sm) { models.push_back(sm); });
  return models;
}

BestDecomposition best_state_decomposition(const Dataset& d, int class_attr,
                                           std::span<const int> predictors, const Penalty& p) {
  std::int64_t cells = 1;
  for (int j : predictors) {
    if (j < 1 || j > d.attribute_count()) throw ArgumentError("predictor index out of range");
    cells *= d.card(j);
    if (cells > kMaxEnumerationCells)
      throw CapacityError("predictor domain exceeds " + std::to_string(kMaxEnumerationCells) +
                          " cells; exhaustive decomposition search is infeasible");
  }

  // Per-cell class counts in mixed-radix cell order; every candidate grouping
  // aggregates these rows.
  const CondCountTable base = conditional_counts(d, class_attr, predictors);
  const int alpha = base.child_card;
  const double cn = penalty_value(p, d.row_count());

  std::vector<std::int64_t> merged;
  const auto score_of = [&](const StateModel& sm) {
    merged.assign(static_cast<std::size_t>(sm.state_count) * alpha, 0);
    std::vector<std::int64_t> totals(sm.state_count, 0);
    for (int cell = 0; cell < sm.domain_size; ++cell) {
      const int s = sm.assignment[cell] - 1;
      for (int q = 0; q < alpha; ++q) merged[s * alpha + q] += base.counts[cell][q];
      totals[s] += base.state_totals[cell];
    }
    Bits fit = 0.0;
    for (int s = 0; s < sm.state_count; ++s) {
      if (totals[s] == 0) continue;
      for (int q = 0; q < alpha; ++q) {
        const std::int64_t c = merged[s * alpha + q];
        if (c > 0)
          fit -= static_cast<double>(c) *
                 std::log2(static_cast<double>(c) / static_cast<double>(totals[s]));
      }
    }
    return fit + 0.5 * static_cast<double>(stage_param_count(sm.state_count, alpha)) * cn;
  };

  BestDecomposition best;
  bool have_best = false;
  for_each_state_model(static_cast<int>(cells), [&](const StateModel& sm) {
    const Bits score = score_of(sm);
    // Enumeration is lexicographic, so on full ties the incumbent already has
    // the smaller assignment.
    if (!have_best || score < best.score ||
        (score == best.score && sm.state_count < best.model.state_count)) {
      best.model = sm;
      best.score = score;
      have_best = true;
    }
  });
  return best;
}

}  // namespace dendrolearn
