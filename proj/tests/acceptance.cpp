// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. argv[1] must point at the CLI binary (used by the
// determinism criterion).

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dendrolearn/bbn.hpp"
#include "dendrolearn/forest.hpp"
#include "dendrolearn/impute.hpp"
#include "dendrolearn/infotheory.hpp"
#include "dendrolearn/model.hpp"
#include "dendrolearn/partitions.hpp"
#include "dendrolearn/scoring.hpp"
#include "test_util.hpp"

using namespace dendrolearn;
using Clock = std::chrono::steady_clock;
using Rational = boost::multiprecision::cpp_rational;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string g_cli_path;

bool check(bool condition, std::string& detail, const std::string& message) {
  if (!condition && detail.empty()) detail = message;
  return condition;
}

// ---------------------------------------------------------------------------
// 1. Model counting: 15 groupings of a 2x2 domain, canonical enumeration, and
//    the binomial recurrence for the partition counts up to 15 cells.
bool criterion_model_counting(std::string& detail) {
  const auto start = Clock::now();
  bool ok = check(count_models(4) == 15, detail, "count_models(4) != 15");

  const auto models = enumerate_state_models(4);
  ok = check(models.size() == 15, detail, "enumerate_state_models(4) size") && ok;
  std::set<std::vector<int>> distinct;
  for (const auto& sm : models) {
    int max_label = 0;
    bool canonical = sm.assignment[0] == 1;
    for (int label : sm.assignment) {
      canonical = canonical && label <= max_label + 1;
      max_label = std::max(max_label, label);
    }
    ok = check(canonical && max_label == sm.state_count, detail, "non-canonical assignment") && ok;
    distinct.insert(sm.assignment);
  }
  ok = check(distinct.size() == 15, detail, "enumerated assignments are not distinct") && ok;

  std::vector<BigInt> bell(16);
  bell[0] = 1;
  for (int m = 1; m <= 15; ++m) bell[m] = count_models(m);
  std::vector<std::vector<BigInt>> binom(16, std::vector<BigInt>(16, 0));
  for (int i = 0; i <= 15; ++i) {
    binom[i][0] = 1;
    for (int k = 1; k <= i; ++k)
      binom[i][k] = binom[i - 1][k - 1] + (k <= i - 1 ? binom[i - 1][k] : 0);
  }
  for (int m = 0; m <= 14; ++m) {
    BigInt sum = 0;
    for (int k = 0; k <= m; ++k) sum += binom[m][k] * bell[k];
    ok = check(bell[m + 1] == sum, detail, "binomial recurrence fails at m=" + std::to_string(m)) && ok;
  }

  const double elapsed = seconds_since(start);
  ok = check(elapsed < 1.0, detail, "counting took " + std::to_string(elapsed) + "s") && ok;
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Forest optimality: the thresholded Kruskal sweep reaches the exhaustive
//    minimum on 210 seeded datasets under three penalties each.
bool criterion_forest_optimality(std::string& detail) {
  const auto start = Clock::now();
  SplitMix64 rng(0xACCE5501);
  const Penalty penalties[3] = {Penalty::mdl(), Penalty::aic(), Penalty::custom(1.0)};
  bool ok = true;
  int cases = 0;
  for (int trial = 0; trial < 210; ++trial) {
    const int r = 2 + static_cast<int>(rng.next_below(4));  // 2..5
    const std::int64_t n = 8 + static_cast<std::int64_t>(rng.next_below(193));  // 8..200
    // Mostly dependent data, occasionally independent noise; cards 1..3.
    Dataset d = trial % 4 == 0 ? dltest::random_dataset(rng, r, 1, 3, n)
                               : sample(dltest::random_tree_model(rng, r, 2, 3), n, rng.next());
    for (const Penalty& p : penalties) {
      ++cases;
      const ForestStructure learned = learn_forest(d, p);
      const double learned_score = forest_description_length(orient_forest(learned), d, p).total;
      const auto [best, best_score] = brute_force_best_forest(d, p);
      if (std::abs(learned_score - best_score) > 1e-9) {
        ok = check(false, detail,
                   "trial " + std::to_string(trial) + ": learned " +
                       std::to_string(learned_score) + " vs optimal " +
                       std::to_string(best_score));
      }
    }
  }
  const double elapsed = seconds_since(start);
  ok = check(cases == 630, detail, "unexpected case count") && ok;
  ok = check(elapsed < 60.0, detail, "optimality sweep took " + std::to_string(elapsed) + "s") && ok;
  return ok;
}

// ---------------------------------------------------------------------------
// 3. The mutual-information route and the count-table route price the same
//    forest identically on 50 random forest/dataset pairs.
bool criterion_score_equivalence(std::string& detail) {
  SplitMix64 rng(0xACCE5503);
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 3 + static_cast<int>(rng.next_below(3));
    const Dataset d = dltest::random_dataset(rng, r, 1, 4, 10 + rng.next_below(200));
    ForestStructure f;
    f.node_count = r;
    DisjointSets components(r + 1);
    for (int i = 1; i <= r; ++i)
      for (int j = i + 1; j <= r; ++j)
        if (rng.next_unit() < 0.4 && components.unite(i, j)) f.edges.emplace_back(i, j);

    const Penalty p = trial % 3 == 0   ? Penalty::mdl()
                      : trial % 3 == 1 ? Penalty::aic()
                                       : Penalty::custom(0.31);
    const DendroidStructure s = orient_forest(f);
    const double via_mi = forest_description_length(s, d, p).total;
    const double via_counts = description_length(s, d, p).total;
    if (std::abs(via_mi - via_counts) > 1e-9)
      ok = check(false, detail,
                 "trial " + std::to_string(trial) + ": " + std::to_string(via_mi) + " vs " +
                     std::to_string(via_counts));
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 4. With a zero penalty and strictly positive pairwise MIs the learner
//    returns the maximum-MI spanning tree (independent Prim oracle).
bool criterion_chow_liu_reduction(std::string& detail) {
  SplitMix64 rng(0xACCE5504);
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    // The reduction is conditioned on strictly positive pairwise MIs, so
    // redraw (deterministically) the rare sample whose counts factorize.
    int r = 0;
    std::vector<std::vector<double>> mi;
    std::optional<Dataset> data;
    bool all_positive = false;
    for (int attempt = 0; attempt < 20 && !all_positive; ++attempt) {
      r = 4 + static_cast<int>(rng.next_below(3));  // 4..6
      data.emplace(sample(dltest::random_tree_model(rng, r, 2, 3), 200 + rng.next_below(300),
                          rng.next()));
      const Dataset& d = *data;

      // Independent MI estimates from raw histograms.
      mi.assign(r + 1, std::vector<double>(r + 1, 0.0));
      all_positive = true;
      for (int i = 1; i <= r; ++i) {
        for (int j = i + 1; j <= r; ++j) {
          std::vector<std::vector<std::int64_t>> counts(d.card(i),
                                                        std::vector<std::int64_t>(d.card(j), 0));
          std::vector<std::int64_t> ri(d.card(i), 0), cj(d.card(j), 0);
          for (std::int64_t row = 0; row < d.row_count(); ++row) {
            ++counts[d.value(row, i)][d.value(row, j)];
            ++ri[d.value(row, i)];
            ++cj[d.value(row, j)];
          }
          double value = 0.0;
          const double n = static_cast<double>(d.row_count());
          for (int u = 0; u < d.card(i); ++u)
            for (int v = 0; v < d.card(j); ++v)
              if (counts[u][v] > 0)
                value += (counts[u][v] / n) *
                         std::log2(counts[u][v] * n / (static_cast<double>(ri[u]) * cj[v]));
          mi[i][j] = mi[j][i] = value;
          all_positive = all_positive && value > 0.0;
        }
      }
    }
    if (!all_positive) {
      ok = check(false, detail, "trial " + std::to_string(trial) + ": no valid draw in 20 tries");
      continue;
    }
    const Dataset& d = *data;

    // Prim's maximum spanning tree.
    std::vector<bool> in_tree(r + 1, false);
    std::vector<double> best(r + 1, -1.0);
    std::vector<int> link(r + 1, 0);
    std::vector<std::pair<int, int>> expected;
    in_tree[1] = true;
    for (int v = 2; v <= r; ++v) {
      best[v] = mi[1][v];
      link[v] = 1;
    }
    for (int step = 1; step < r; ++step) {
      int pick = 0;
      for (int v = 1; v <= r; ++v)
        if (!in_tree[v] && (pick == 0 || best[v] > best[pick])) pick = v;
      in_tree[pick] = true;
      expected.emplace_back(std::min(pick, link[pick]), std::max(pick, link[pick]));
      for (int v = 1; v <= r; ++v)
        if (!in_tree[v] && mi[pick][v] > best[v]) {
          best[v] = mi[pick][v];
          link[v] = pick;
        }
    }
    std::sort(expected.begin(), expected.end());

    const ForestStructure f = learn_forest(d, Penalty::custom(0.0));
    if (f.edges != expected)
      ok = check(false, detail, "trial " + std::to_string(trial) + ": tree mismatch");
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 5. The exact Dirichlet(1/2) code length stays within 3 bits of the two-term
//    score for a seeded 0.3-biased coin across four decades of n, and the
//    first two sequential code lengths are exactly 1 and 3 bits.
bool criterion_exact_length_bounded(std::string& detail) {
  bool ok = true;
  CondCountTable t;
  t.child = 1;
  t.child_card = 2;
  t.states = 1;

  t.n = 1;
  t.counts = {{1, 0}};
  t.state_totals = {1};
  ok = check(std::abs(exact_bayes_code_length(t, 0.5) - 1.0) < 1e-9, detail,
             "first-symbol length is not 1 bit") && ok;

  t.n = 2;
  t.counts = {{1, 1}};
  t.state_totals = {2};
  ok = check(std::abs(exact_bayes_code_length(t, 0.5) - 3.0) < 1e-9, detail,
             "length of (1,1) is not 3 bits") && ok;

  SplitMix64 rng(0xACCE5505);
  for (const std::int64_t n : {100L, 1000L, 10000L, 100000L}) {
    std::int64_t ones = 0;
    for (std::int64_t k = 0; k < n; ++k) ones += rng.next_unit() < 0.3 ? 1 : 0;
    t.n = n;
    t.counts = {{n - ones, ones}};
    t.state_totals = {n};
    const double exact = exact_bayes_code_length(t, 0.5);
    const double asymptotic =
        empirical_entropy(t.counts[0]) + 0.5 * std::log2(static_cast<double>(n));
    if (std::abs(exact - asymptotic) > 3.0)
      ok = check(false, detail,
                 "n=" + std::to_string(n) + ": gap " + std::to_string(exact - asymptotic));
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 6. Structure recovery: a 5-node two-tree forest with strong dependencies is
//    recovered exactly at n=5000 and never over-connected at n=50.
bool criterion_structure_recovery(std::string& detail) {
  const std::vector<std::pair<int, int>> truth{{1, 2}, {2, 3}, {4, 5}};
  const FittedModel gen = dltest::binary_forest_model(5, truth, 0.05);

  const Dataset big = sample(gen, 5000, 42);
  const ForestStructure recovered = learn_forest(big, Penalty::mdl());
  bool ok = check(recovered.edges == truth, detail, "n=5000 did not recover the exact edge set");

  const Dataset small = sample(gen, 50, 42);
  const ForestStructure sparse = learn_forest(small, Penalty::mdl());
  for (const auto& e : sparse.edges) {
    if (std::find(truth.begin(), truth.end(), e) == truth.end())
      ok = check(false, detail, "n=50 selected a spurious edge");
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Probability-model invariants: normalized rows, unit total mass, and
//    posteriors that match the exhaustive joint-table oracle.
bool criterion_probability_invariants(std::string& detail) {
  SplitMix64 rng(0xACCE5507);
  bool ok = true;
  for (int trial = 0; trial < 4; ++trial) {
    const int r = 3 + static_cast<int>(rng.next_below(2));
    FittedModel m = dltest::random_tree_model(rng, r, 2, 3);
    if (trial == 3) {
      // Also exercise a model fitted from data rather than one built by hand.
      const Dataset d = sample(m, 500, rng.next());
      m = fit_parameters(m.structure, d, 0.5);
    }

    for (const auto& table : m.params.rows) {
      for (const auto& row : table) {
        double sum = 0.0;
        for (double p : row) {
          sum += p;
          ok = check(p > 0.0, detail, "non-positive table entry") && ok;
        }
        ok = check(std::abs(sum - 1.0) < 1e-9, detail, "row does not sum to 1") && ok;
      }
    }

    std::vector<int> cards(m.schema.cards);
    std::int64_t cells = 1;
    for (int c : cards) cells *= c;
    double mass = 0.0;
    std::vector<ValueCode> record(r);
    for (std::int64_t cell = 0; cell < cells; ++cell) {
      mixed_radix_decode(cell, cards, record);
      mass += joint_probability(m, record);
    }
    ok = check(std::abs(mass - 1.0) < 1e-9, detail, "joint mass is not 1") && ok;

    // Posteriors vs the joint table, for every 1- and 2-missing pattern and
    // every assignment of the known attributes.
    for (int a = 0; a < r && ok; ++a) {
      for (int b = a; b < r && ok; ++b) {
        std::int64_t known_cells = 1;
        for (int j = 0; j < r; ++j)
          if (j != a && j != b) known_cells *= cards[j];
        for (std::int64_t known = 0; known < known_cells && ok; ++known) {
          PartialRecord partial;
          partial.values.assign(r, kMissingValue);
          std::int64_t rest = known;
          for (int j = r - 1; j >= 0; --j) {
            if (j == a || j == b) continue;
            partial.values[j] = static_cast<ValueCode>(rest % cards[j]);
            rest /= cards[j];
          }

          const auto got = posterior(m, partial);
          double norm = 0.0;
          std::size_t cursor = 0;
          bool match = true;
          std::vector<double> table_probs;
          for (std::int64_t cell = 0; cell < cells; ++cell) {
            mixed_radix_decode(cell, cards, record);
            bool consistent = true;
            for (int j = 0; j < r && consistent; ++j)
              consistent = partial.values[j] == kMissingValue || partial.values[j] == record[j];
            if (!consistent) continue;
            const double p = joint_probability(m, record);
            norm += p;
            match = match && cursor < got.size() && got[cursor].record == record;
            table_probs.push_back(p);
            ++cursor;
          }
          match = match && cursor == got.size();
          for (std::size_t k = 0; k < table_probs.size() && match; ++k)
            match = std::abs(got[k].probability - table_probs[k] / norm) < 1e-9;
          ok = check(match, detail, "posterior differs from the joint-table oracle") && ok;
        }
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 8. A uniform code over each enumerated model class sums to exactly 1 in
//    rational arithmetic (the Kraft bound met with equality).
bool criterion_kraft_equality(std::string& detail) {
  bool ok = true;
  for (int m = 2; m <= 6; ++m) {
    const auto models = enumerate_state_models(m);
    Rational mass = 0;
    for (std::size_t g = 0; g < models.size(); ++g) mass += Rational(1, models.size());
    ok = check(mass == 1, detail, "mass != 1 for m=" + std::to_string(m)) && ok;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 9. CLI determinism: identical flags and seeds give byte-identical outputs.
bool criterion_cli_determinism(std::string& detail) {
  if (g_cli_path.empty()) {
    detail = "CLI path not supplied (argv[1])";
    return false;
  }
  dltest::TempDir dir;
  const FittedModel gen = dltest::binary_forest_model(4, {{1, 2}, {3, 4}}, 0.1);
  const Dataset d = sample(gen, 800, 7);
  std::string csv_text = "x1,x2,x3,x4\n";
  for (std::int64_t row = 0; row < d.row_count(); ++row) {
    for (int j = 1; j <= 4; ++j) {
      if (j > 1) csv_text += ",";
      csv_text += d.raw_value(j, d.value(row, j));
    }
    csv_text += "\n";
  }
  const auto csv = dir.file("train.csv");
  dltest::write_file(csv, csv_text);

  const auto run_shell = [&](const std::string& command) {
    return std::system(command.c_str()) == 0;
  };
  const std::string quoted_cli = "'" + g_cli_path + "'";
  bool ok = true;
  for (int run = 1; run <= 2; ++run) {
    const std::string suffix = std::to_string(run);
    ok = run_shell(quoted_cli + " learn --input '" + csv.string() + "' --penalty mdl --out '" +
                   dir.file("model" + suffix + ".txt").string() + "' > '" +
                   dir.file("learn" + suffix + ".out").string() + "' 2>/dev/null") &&
         ok;
  }
  ok = check(ok, detail, "learn invocation failed");
  ok = check(dltest::read_file(dir.file("model1.txt")) == dltest::read_file(dir.file("model2.txt")),
             detail, "model files differ between runs") && ok;
  ok = check(dltest::read_file(dir.file("learn1.out")) == dltest::read_file(dir.file("learn2.out")),
             detail, "learn stdout differs between runs") && ok;

  for (int run = 1; run <= 2; ++run) {
    const std::string suffix = std::to_string(run);
    ok = run_shell(quoted_cli + " generate --model '" + dir.file("model1.txt").string() +
                   "' --n 500 --seed 42 --out '" + dir.file("gen" + suffix + ".csv").string() +
                   "' 2>/dev/null") &&
         ok;
  }
  ok = check(ok, detail, "generate invocation failed");
  ok = check(dltest::read_file(dir.file("gen1.csv")) == dltest::read_file(dir.file("gen2.csv")),
             detail, "generated files differ between runs") && ok;
  return ok;
}

struct Criterion {
  const char* name;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  const std::vector<Criterion> criteria{
      {"model counting (15 groupings, canonical enumeration, recurrence)", criterion_model_counting},
      {"forest learner matches the exhaustive optimum (630 cases)", criterion_forest_optimality},
      {"MI route and count-table route price forests identically", criterion_score_equivalence},
      {"zero penalty reduces to the maximum-MI spanning tree", criterion_chow_liu_reduction},
      {"exact Dirichlet(1/2) length within 3 bits of the two-term score", criterion_exact_length_bounded},
      {"two-tree forest recovered at n=5000, never over-connected at n=50", criterion_structure_recovery},
      {"normalized tables, unit joint mass, joint-table posteriors", criterion_probability_invariants},
      {"uniform model codes meet the Kraft bound with equality", criterion_kraft_equality},
      {"byte-identical learn/generate reruns", criterion_cli_determinism},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    std::string detail;
    const auto start = Clock::now();
    const bool ok = criteria[k].run(detail);
    const double elapsed = seconds_since(start);
    std::printf("[%zu/%zu] %s  %s (%.2fs)\n", k + 1, criteria.size(), ok ? "PASS" : "FAIL",
                criteria[k].name, elapsed);
    if (!ok) {
      std::printf("        %s\n", detail.c_str());
      ++failures;
    }
  }
  return failures;
}
