#include "dendrolearn/scoring.hpp"

#include <cmath>
#include <numbers>

#include "dendrolearn/bbn.hpp"
#include "dendrolearn/errors.hpp"
#include "dendrolearn/forest.hpp"

namespace dendrolearn {

Penalty Penalty::custom(double c) {
  if (!(c >= 0.0)) throw ArgumentError("custom penalty weight must be >= 0");
  return {PenaltyKind::Custom, c};
}

double penalty_value(const Penalty& p, std::int64_t n) {
  if (n < 1) throw ArgumentError("penalty_value requires n >= 1");
  switch (p.kind) {
    case PenaltyKind::MDL:
      return std::log2(static_cast<double>(n));
    case PenaltyKind::AIC:
      return 2.0;
    case PenaltyKind::ML:
      return 0.0;
    case PenaltyKind::Custom:
      return p.custom_c;
  }
  throw ArgumentError("unknown penalty kind");
}

std::int64_t stage_param_count(std::int64_t states, int child_card) {
  if (states < 1) throw ArgumentError("state count must be >= 1");
  if (child_card < 1) throw ArgumentError("child cardinality must be >= 1");
  return states * (child_card - 1);
}

namespace {

constexpr std::int64_t kParamStateGuard = std::int64_t{1} << 40;

std::int64_t family_state_count(const AttributeSchema& schema, std::span<const int> parents) {
  std::int64_t s = 1;
  for (int p : parents) {
    const int c = schema.cards[p - 1];
    if (s > kParamStateGuard / c) throw CapacityError("parent state space too large to count");
    s *= c;
  }
  return s;
}

ScoreBreakdown family_description_length(const BbnStructure& s, const Dataset& d, const Penalty& p,
                                         double model_code_bits) {
  ScoreBreakdown b;
  for (int node : s.order) {
    CondCountTable t = conditional_counts(d, node, s.parents_of(node));
    b.fit += conditional_empirical_entropy(t);
    b.k += stage_param_count(t.states, t.child_card);
  }
  b.complexity = 0.5 * static_cast<double>(b.k) * penalty_value(p, d.row_count());
  b.model_code = model_code_bits;
  b.total = b.fit + b.complexity + b.model_code;
  return b;
}

}  // namespace

std::int64_t model_param_count(const BbnStructure& s, const AttributeSchema& schema) {
  validate_structure(s, schema.size());
  std::int64_t k = 0;
  for (int node : s.order)
    k += stage_param_count(family_state_count(schema, s.parents_of(node)), schema.cards[node - 1]);
  return k;
}

std::int64_t model_param_count(const DendroidStructure& s, const AttributeSchema& schema) {
  std::int64_t k = 0;
  for (int node : s.order) {
    const int q = s.parent_of(node);
    const std::int64_t states = q == 0 ? 1 : schema.cards[q - 1];
    k += stage_param_count(states, schema.cards[node - 1]);
  }
  return k;
}

ScoreBreakdown description_length(const BbnStructure& s, const Dataset& d, const Penalty& p,
                                  bool include_model_code) {
  validate_structure(s, d.attribute_count());
  const double code = include_model_code ? network_class_code_bits(s.node_count()) : 0.0;
  return family_description_length(s, d, p, code);
}

ScoreBreakdown description_length(const DendroidStructure& s, const Dataset& d, const Penalty& p,
                                  bool include_model_code) {
  const double code = include_model_code ? dendroid_class_code_bits(s.node_count()) : 0.0;
  return family_description_length(from_dendroid(s), d, p, code);
}

Bits exact_bayes_code_length(const CondCountTable& t, double a) {
  if (!(a > 0.0)) throw ArgumentError("Dirichlet parameter a must be > 0");
  const int alpha = t.child_card;
  const double lg_a = std::lgamma(a);
  const double lg_alpha_a = std::lgamma(alpha * a);

  double log_sum = 0.0;  // natural log of the product of per-state integrals
  for (std::int64_t s = 0; s < t.states; ++s) {
    if (t.state_totals[s] == 0) continue;
    double term = lg_alpha_a - alpha * lg_a - std::lgamma(static_cast<double>(t.state_totals[s]) + alpha * a);
    for (int q = 0; q < alpha; ++q) term += std::lgamma(static_cast<double>(t.counts[s][q]) + a);
    log_sum += term;
  }
  return -log_sum / std::numbers::ln2;
}

Bits exact_structure_code_length(const BbnStructure& s, const Dataset& d, double a) {
  validate_structure(s, d.attribute_count());
  Bits total = 0.0;
  for (int node : s.order)
    total += exact_bayes_code_length(conditional_counts(d, node, s.parents_of(node)), a);
  return total;
}

double network_class_code_bits(int r) {
  return 0.5 * static_cast<double>(r) * static_cast<double>(r - 1);
}

double dendroid_class_code_bits(int r) {
  double bits = 0.0;
  for (int k = 2; k <= r; ++k) bits += std::log2(static_cast<double>(k));
  return bits;
}

}  // namespace dendrolearn
