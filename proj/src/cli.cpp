#include "dendrolearn/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <unordered_map>

#include "dendrolearn/errors.hpp"
#include "dendrolearn/forest.hpp"
#include "dendrolearn/impute.hpp"
#include "dendrolearn/model.hpp"
#include "dendrolearn/partitions.hpp"

namespace dendrolearn {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> parse_ordering(const std::string& spec, int r) {
  std::vector<int> order;
  if (spec == "natural") {
    for (int j = 1; j <= r; ++j) order.push_back(j);
    return order;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string token =
        comma == std::string::npos ? spec.substr(start) : spec.substr(start, comma - start);
    try {
      std::size_t used = 0;
      order.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ArgumentError("invalid ordering entry '" + token + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return order;  // permutation validity is checked by the learners
}

std::vector<int> parse_cards(const std::string& spec) {
  std::vector<int> cards;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string token =
        comma == std::string::npos ? spec.substr(start) : spec.substr(start, comma - start);
    try {
      std::size_t used = 0;
      cards.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ArgumentError("invalid cardinality '" + token + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cards;
}

void print_breakdown(std::ostream& out, const ScoreBreakdown& b) {
  out << "fit=" << format_double(b.fit) << "\n";
  out << "complexity=" << format_double(b.complexity) << "\n";
  out << "model_code=" << format_double(b.model_code) << "\n";
  out << "total=" << format_double(b.total) << "\n";
  out << "k=" << b.k << "\n";
}

void print_structure(std::ostream& out, const BbnStructure& s) {
  std::int64_t edges = 0;
  for (const auto& parents : s.parents) edges += static_cast<std::int64_t>(parents.size());
  out << "edges=" << edges << "\n";
  for (int node : s.order) {
    out << "parents." << node << "=";
    const auto& parents = s.parents_of(node);
    for (std::size_t k = 0; k < parents.size(); ++k) {
      if (k > 0) out << ",";
      out << parents[k];
    }
    out << "\n";
  }
}

void write_csv_dataset(std::ostream& out, const Dataset& d) {
  const int r = d.attribute_count();
  for (int j = 1; j <= r; ++j) {
    if (j > 1) out << ",";
    out << d.name(j);
  }
  out << "\n";
  for (std::int64_t row = 0; row < d.row_count(); ++row) {
    for (int j = 1; j <= r; ++j) {
      if (j > 1) out << ",";
      out << d.raw_value(j, d.value(row, j));
    }
    out << "\n";
  }
}

// Writes to the path when given, otherwise to fallback (stdout).
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ParseError("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int cmd_learn(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const Penalty penalty = penalty_from_string(cfg.penalty_spec);
    const Dataset d = load_csv(cfg.input_path);
    if (cfg.verbosity > 0)
      err << "loaded " << d.row_count() << " rows over " << d.attribute_count()
          << " attributes\n";

    BbnStructure structure;
    if (cfg.method == "forest") {
      structure = from_dendroid(orient_forest(learn_forest(d, penalty, cfg.threads)));
    } else if (cfg.method == "bbn-greedy" || cfg.method == "bbn-exhaustive") {
      const std::vector<int> order = parse_ordering(cfg.ordering, d.attribute_count());
      structure = cfg.method == "bbn-greedy"
                      ? learn_bbn_greedy(d, order, penalty, cfg.max_parents)
                      : learn_bbn_exhaustive(d, order, penalty, cfg.max_parents);
    } else {
      throw ArgumentError("unknown method '" + cfg.method +
                          "' (expected forest, bbn-greedy, or bbn-exhaustive)");
    }

    const FittedModel model = fit_parameters(structure, d, cfg.a, penalty);
    save_model(model, cfg.output_path);
    if (cfg.verbosity > 0) err << "wrote model to " << cfg.output_path << "\n";

    const ScoreBreakdown b = description_length(structure, d, penalty, true);
    out << "method=" << cfg.method << "\n";
    out << "penalty=" << penalty_to_string(penalty) << "\n";
    out << "n=" << d.row_count() << "\n";
    out << "r=" << d.attribute_count() << "\n";
    print_breakdown(out, b);
    print_structure(out, structure);
    return 0;
  });
}

int cmd_score(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const FittedModel model = load_model(cfg.model_path);
    const Dataset d = load_csv_with_dictionary(cfg.input_path, model.schema, model.values);
    const Penalty penalty =
        cfg.penalty_spec.empty() ? model.penalty : penalty_from_string(cfg.penalty_spec);

    const ScoreBreakdown b = description_length(model.structure, d, penalty, true);
    out << "penalty=" << penalty_to_string(penalty) << "\n";
    out << "n=" << d.row_count() << "\n";
    out << "r=" << d.attribute_count() << "\n";
    print_breakdown(out, b);
    if (cfg.exact) {
      const Bits exact = exact_structure_code_length(model.structure, d, model.a);
      out << "exact=" << format_double(exact) << "\n";
      out << "gap=" << format_double(std::abs(b.fit + b.complexity - exact)) << "\n";
    }
    return 0;
  });
}

int cmd_impute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const FittedModel model = load_model(cfg.model_path);
    const CsvContent csv = read_csv(cfg.input_path);
    if (csv.header != model.schema.names)
      throw SchemaError(cfg.input_path + ": header does not match the model's attribute names");

    const int r = model.schema.size();
    std::vector<std::unordered_map<std::string, ValueCode>> codes(r);
    for (int j = 0; j < r; ++j)
      for (ValueCode c = 0; c < static_cast<ValueCode>(model.values[j].size()); ++c)
        codes[j].emplace(model.values[j][c], c);

    OutputTarget target(cfg.output_path, out);
    std::ostream& os = target.stream();
    for (int j = 0; j < r; ++j) {
      if (j > 0) os << ",";
      os << model.schema.names[j];
    }
    if (cfg.posterior_column) os << ",map_posterior";
    os << "\n";

    for (std::size_t k = 0; k < csv.rows.size(); ++k) {
      const std::string where = cfg.input_path + ":" + std::to_string(k + 2);
      PartialRecord record;
      record.values.resize(r);
      bool any_missing = false;
      for (int j = 0; j < r; ++j) {
        const std::string& raw = csv.rows[k][j];
        if (raw == "?") {
          record.values[j] = kMissingValue;
          any_missing = true;
          continue;
        }
        auto it = codes[j].find(raw);
        if (it == codes[j].end())
          throw SchemaError(where + ": unknown value '" + raw + "' for attribute '" +
                            model.schema.names[j] + "'");
        record.values[j] = it->second;
      }

      std::vector<std::string> fields = csv.rows[k];
      double map_probability = 1.0;
      if (any_missing) {
        std::vector<Completion> dist;
        try {
          dist = posterior(model, record);
        } catch (const ArgumentError& e) {
          throw ArgumentError(where + ": " + e.what());
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < dist.size(); ++c)
          if (dist[c].probability > dist[best].probability) best = c;
        map_probability = dist[best].probability;
        for (int j = 0; j < r; ++j)
          if (record.values[j] == kMissingValue)
            fields[j] = model.values[j][dist[best].record[j]];
      }
      for (int j = 0; j < r; ++j) {
        if (j > 0) os << ",";
        os << fields[j];
      }
      if (cfg.posterior_column) os << "," << format_double(map_probability);
      os << "\n";
    }
    return 0;
  });
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const FittedModel model = load_model(cfg.model_path);
    const Dataset d = sample(model, cfg.generate_n, cfg.seed);
    OutputTarget target(cfg.output_path, out);
    write_csv_dataset(target.stream(), d);
    return 0;
  });
}

int cmd_count_models(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (!cfg.cards_spec.empty()) {
      const std::vector<int> cards = parse_cards(cfg.cards_spec);
      const auto [models, comparisons] = count_model_space(cards);
      out << "cards=" << cfg.cards_spec << "\n";
      out << "models=" << models << "\n";
      out << "comparisons=" << comparisons << "\n";
    } else {
      const BigInt models = count_models(static_cast<int>(cfg.m_cells));
      out << "m=" << cfg.m_cells << "\n";
      out << "models=" << models << "\n";
    }
    return 0;
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;

  CLI::App app{"MDL learning of dependency forests and belief networks over categorical data"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", cfg.verbosity, "Progress notes on the error stream");

  CLI::App* learn = app.add_subcommand("learn", "Learn a model from a complete-records CSV");
  learn->add_option("--input", cfg.input_path, "Input CSV")->required();
  learn->add_option("--out", cfg.output_path, "Model file to write")->required();
  learn->add_option("--method", cfg.method, "forest | bbn-greedy | bbn-exhaustive");
  learn->add_option("--penalty", cfg.penalty_spec, "mdl | aic | ml | custom:<c>");
  learn->add_option("--ordering", cfg.ordering,
                    "Node ordering for bbn methods: 'natural' or e.g. 2,1,3");
  learn->add_option("--max-parents", cfg.max_parents, "Parent-set size cap for bbn methods");
  learn->add_option("--a", cfg.a, "Dirichlet smoothing weight for the fitted tables");
  learn->callback([&] { cfg.command = "learn"; });

  CLI::App* score = app.add_subcommand("score", "Score a model file against a CSV");
  score->add_option("--input", cfg.input_path, "Input CSV")->required();
  score->add_option("--model", cfg.model_path, "Model file")->required();
  score->add_option("--penalty", cfg.penalty_spec,
                    "Override the penalty recorded in the model file");
  score->add_flag("--exact", cfg.exact, "Also print the exact Bayes code length and the gap");
  score->callback([&] { cfg.command = "score"; });

  CLI::App* impute = app.add_subcommand("impute", "Fill '?' cells using a model file");
  impute->add_option("--input", cfg.input_path, "Input CSV; missing cells are '?'")->required();
  impute->add_option("--model", cfg.model_path, "Model file")->required();
  impute->add_option("--out", cfg.output_path, "Output CSV (default: stdout)");
  impute->add_flag("--posterior", cfg.posterior_column,
                   "Append a map_posterior column with the chosen completion's probability");
  impute->callback([&] { cfg.command = "impute"; });

  CLI::App* generate = app.add_subcommand("generate", "Sample rows from a model file");
  generate->add_option("--model", cfg.model_path, "Model file")->required();
  generate->add_option("--n", cfg.generate_n, "Number of rows")->required();
  generate->add_option("--seed", cfg.seed, "Generator seed");
  generate->add_option("--out", cfg.output_path, "Output CSV (default: stdout)");
  generate->callback([&] { cfg.command = "generate"; });

  CLI::App* count = app.add_subcommand("count-models", "Model-space counts");
  count->add_option("--m", cfg.m_cells, "Cells of a single predictor domain");
  count->add_option("--cards", cfg.cards_spec, "Attribute cardinalities, e.g. 2,2,3");
  count->callback([&] { cfg.command = "count-models"; });

  std::vector<const char*> argv;
  argv.push_back("dendrolearn");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (const char* env = std::getenv("DENDROLEARN_THREADS")) {
    try {
      std::size_t used = 0;
      cfg.threads = std::stoi(env, &used);
      if (used != std::string(env).size() || cfg.threads < 0) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      err << "error: DENDROLEARN_THREADS must be a nonnegative integer\n";
      return 2;
    }
  }

  if (cfg.command == "learn") return cmd_learn(cfg, out, err);
  if (cfg.command == "score") {
    // Without an explicit --penalty the model's recorded penalty applies.
    if (score->count("--penalty") == 0) cfg.penalty_spec.clear();
    return cmd_score(cfg, out, err);
  }
  if (cfg.command == "impute") return cmd_impute(cfg, out, err);
  if (cfg.command == "generate") return cmd_generate(cfg, out, err);
  if (cfg.command == "count-models") {
    if ((cfg.m_cells >= 0) == !cfg.cards_spec.empty()) {
      err << "error: count-models requires exactly one of --m or --cards\n";
      return 2;
    }
    return cmd_count_models(cfg, out, err);
  }
  err << "error: no command given\n";
  return 2;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace dendrolearn
