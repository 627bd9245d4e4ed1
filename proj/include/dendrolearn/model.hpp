#pragma once

// Fitted models: a structure plus smoothed conditional probability tables
// p = (count + a) / (state_total + a*card), joint-probability evaluation,
// ancestral sampling, and a line-oriented text serialization.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dendrolearn/bbn.hpp"
#include "dendrolearn/dataset.hpp"
#include "dendrolearn/scoring.hpp"

namespace dendrolearn {

// Per node: a state x card matrix of conditional probabilities. Rows sum to 1
// and every entry is strictly positive (smoothing guarantees it).
struct ParamTable {
  std::vector<std::vector<std::vector<double>>> rows;  // rows[node-1][state][value]
};

struct FittedModel {
  AttributeSchema schema;
  std::vector<std::vector<std::string>> values;  // code -> raw string, per attribute
  BbnStructure structure;
  ParamTable params;
  std::int64_t fitted_n = 0;
  Penalty penalty;    // penalty the structure was selected under (metadata)
  double a = 0.5;     // Dirichlet smoothing weight used for the tables
};

FittedModel fit_parameters(const BbnStructure& structure, const Dataset& d, double a,
                           const Penalty& penalty = Penalty::mdl());

// Product over nodes of the table entry selected by the record's parent
// configuration and child value; strictly positive.
double joint_probability(const FittedModel& m, std::span<const ValueCode> record);

// Ancestral sampling in structure order with a seeded splitmix64 generator
// and an inverse-CDF draw per row; a fixed seed gives a fixed dataset.
Dataset sample(const FittedModel& m, std::int64_t n, std::uint64_t seed);

void save_model(const FittedModel& m, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

std::string penalty_to_string(const Penalty& p);
Penalty penalty_from_string(const std::string& spec);

}  // namespace dendrolearn
