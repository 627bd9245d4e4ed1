#pragma once

// Command-line surface: learn / score / impute / generate / count-models.
// All output is stable key=value lines or CSV so batch runs stay
// machine-parseable and reproducible. Exit codes: 0 ok, 2 input or usage
// error, 3 capacity guard exceeded.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dendrolearn/bbn.hpp"

namespace dendrolearn {

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_path;  // model file for learn; CSV for impute/generate
  std::string model_path;
  std::string method = "forest";  // forest | bbn-greedy | bbn-exhaustive
  std::string penalty_spec = "mdl";
  std::string ordering = "natural";  // or a comma-separated permutation
  int max_parents = kDefaultMaxParents;
  double a = 0.5;
  std::uint64_t seed = 0;
  std::int64_t generate_n = 0;
  bool exact = false;
  bool posterior_column = false;
  std::string cards_spec;
  std::int64_t m_cells = -1;
  int verbosity = 0;
  int threads = 0;  // 0 = auto; set from DENDROLEARN_THREADS
};

int cmd_learn(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_score(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_impute(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_count_models(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace dendrolearn
