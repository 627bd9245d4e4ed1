#pragma once

// Description-length computation: the two-term asymptotic score
// (empirical entropy + (k/2)*c(n)), parameter counts, penalty variants, and
// the exact Bayes mixture code length under a symmetric Dirichlet weight.
// All lengths are in bits.

#include <cstdint>

#include "dendrolearn/dataset.hpp"
#include "dendrolearn/infotheory.hpp"

namespace dendrolearn {

struct BbnStructure;
struct DendroidStructure;

enum class PenaltyKind { MDL, AIC, ML, Custom };

// Per-parameter complexity weight c(n): log2(n) for MDL, 2 for AIC, 0 for
// plain maximum likelihood, or a caller-supplied constant.
struct Penalty {
  PenaltyKind kind = PenaltyKind::MDL;
  double custom_c = 0.0;

  static Penalty mdl() { return {PenaltyKind::MDL, 0.0}; }
  static Penalty aic() { return {PenaltyKind::AIC, 0.0}; }
  static Penalty ml() { return {PenaltyKind::ML, 0.0}; }
  static Penalty custom(double c);  // requires c >= 0
};

double penalty_value(const Penalty& p, std::int64_t n);

// Free parameters of one conditional table: S*(child_card - 1).
std::int64_t stage_param_count(std::int64_t states, int child_card);

struct ScoreBreakdown {
  Bits fit = 0.0;         // empirical-entropy term, total bits
  Bits complexity = 0.0;  // k * c(n) / 2
  Bits model_code = 0.0;  // log2 |model class| when requested, else 0
  Bits total = 0.0;       // fit + complexity + model_code
  std::int64_t k = 0;     // number of free parameters
};

std::int64_t model_param_count(const BbnStructure& s, const AttributeSchema& schema);
std::int64_t model_param_count(const DendroidStructure& s, const AttributeSchema& schema);

// Generic two-term score: per-node conditional empirical entropies from the
// count tables plus (k/2)*c(n). The model-code term is off by default; within
// a fixed model class a uniform model code cancels out of comparisons.
ScoreBreakdown description_length(const BbnStructure& s, const Dataset& d, const Penalty& p,
                                  bool include_model_code = false);
ScoreBreakdown description_length(const DendroidStructure& s, const Dataset& d, const Penalty& p,
                                  bool include_model_code = false);

// Exact code length of the child sequence under a Dirichlet(a,...,a) mixture
// over each state's conditional distribution, via log-gamma sums per state.
// a = 1/2 gives the Krichevsky-Trofimov mixture; a = 1 the uniform prior.
Bits exact_bayes_code_length(const CondCountTable& t, double a);

// Sum of exact per-node code lengths over a structure.
Bits exact_structure_code_length(const BbnStructure& s, const Dataset& d, double a);

// Uniform-code lengths of the finite structure classes, in bits: a network
// over R ordered nodes has 2^(R(R-1)/2) member structures; a single-parent
// (rooted-forest) factorization has R! choices of parent assignment.
double network_class_code_bits(int r);
double dendroid_class_code_bits(int r);

}  // namespace dendrolearn
