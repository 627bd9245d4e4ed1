#include <doctest.h>

#include <cmath>
#include <vector>

#include "dendrolearn/errors.hpp"
#include "dendrolearn/infotheory.hpp"
#include "test_util.hpp"

using namespace dendrolearn;

TEST_CASE("empirical_entropy in total bits") {
  const std::vector<std::int64_t> even{50, 50};
  CHECK(empirical_entropy(even) == doctest::Approx(100.0).epsilon(1e-12));

  const std::vector<std::int64_t> constant{7, 0};
  CHECK(empirical_entropy(constant) == 0.0);

  // 4*H(3/4) evaluated directly from the formula.
  const std::vector<std::int64_t> skewed{3, 1};
  CHECK(std::abs(empirical_entropy(skewed) - 3.2451124978365313) < 1e-9);

  CHECK_THROWS_AS(empirical_entropy(std::vector<std::int64_t>{0, 0}), ArgumentError);
  CHECK_THROWS_AS(empirical_entropy(std::vector<std::int64_t>{3, -1}), ArgumentError);
}

TEST_CASE("empirical_entropy is bounded by n*log2(m)") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_below(6));
    std::vector<std::int64_t> counts(m);
    std::int64_t n = 0;
    for (auto& c : counts) {
      c = static_cast<std::int64_t>(rng.next_below(40));
      n += c;
    }
    if (n == 0) counts[0] = n = 1;
    CHECK(empirical_entropy(counts) <= static_cast<double>(n) * std::log2(m) + 1e-9);
    CHECK(empirical_entropy(counts) >= 0.0);
  }
}

TEST_CASE("conditional entropy with one state equals the marginal entropy") {
  const Dataset d = dltest::make_dataset({3}, {{0}, {1}, {1}, {2}, {2}, {2}});
  const CondCountTable t = conditional_counts(d, 1, {});
  CHECK(conditional_empirical_entropy(t) ==
        doctest::Approx(empirical_entropy(t.counts[0])).epsilon(1e-12));
}

TEST_CASE("conditional entropy vanishes when the parent determines the child") {
  const Dataset d =
      dltest::make_dataset({2, 2}, {{0, 0}, {0, 0}, {1, 1}, {1, 1}, {0, 0}});
  const std::vector<int> parents{1};
  CHECK(conditional_empirical_entropy(conditional_counts(d, 2, parents)) == 0.0);
}

TEST_CASE("conditional entropy matches an independent per-state oracle") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset d = dltest::random_dataset(rng, 3, 2, 3, 5 + rng.next_below(60));
    const std::vector<int> parents{1, 3};
    const CondCountTable t = conditional_counts(d, 2, parents);

    double expected = 0.0;
    for (std::int64_t s = 0; s < t.states; ++s) {
      if (t.state_totals[s] == 0) continue;
      for (int q = 0; q < t.child_card; ++q) {
        if (t.counts[s][q] == 0) continue;
        expected -= static_cast<double>(t.counts[s][q]) *
                    std::log2(static_cast<double>(t.counts[s][q]) /
                              static_cast<double>(t.state_totals[s]));
      }
    }
    CHECK(std::abs(conditional_empirical_entropy(t) - expected) < 1e-9);
  }
}

TEST_CASE("mutual information of a deterministic binary pair is one bit") {
  PairCounts pc;
  pc.i = 1;
  pc.j = 2;
  pc.n = 100;
  pc.table = {{50, 0}, {0, 50}};
  CHECK(mutual_information(pc) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mutual information of product-form counts is zero") {
  PairCounts pc;
  pc.i = 1;
  pc.j = 2;
  pc.n = 100;
  pc.table = {{25, 25}, {25, 25}};
  CHECK(mutual_information(pc) == 0.0);
}

TEST_CASE("mutual information is symmetric and bounded") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset d = dltest::random_dataset(rng, 2, 2, 4, 2 + rng.next_below(50));
    const Bits ij = mutual_information(pair_counts(d, 1, 2));
    const Bits ji = mutual_information(pair_counts(d, 2, 1));
    CHECK(std::abs(ij - ji) < 1e-12);
    CHECK(ij >= 0.0);
    CHECK(ij <= std::min(std::log2(d.card(1)), std::log2(d.card(2))) + 1e-12);
  }
}

TEST_CASE("conditioning on a parent removes exactly the mutual information") {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = dltest::random_dataset(rng, 4, 2, 3, 10 + rng.next_below(100));
    const double n = static_cast<double>(d.row_count());
    for (int child = 1; child <= 4; ++child) {
      const Bits marginal = empirical_entropy(conditional_counts(d, child, {}).counts[0]);
      for (int parent = 1; parent <= 4; ++parent) {
        if (parent == child) continue;
        const std::vector<int> parents{parent};
        const Bits conditional = conditional_empirical_entropy(conditional_counts(d, child, parents));
        const Bits mi = mutual_information(pair_counts(d, child, parent));
        CHECK(std::abs(conditional - (marginal - n * mi)) < 1e-9);
      }
    }
  }
}
