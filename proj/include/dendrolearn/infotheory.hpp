#pragma once

// Empirical entropy and mutual information over count tables. All quantities
// are in bits (base-2 logs). Entropies are returned in total form (summed
// over the n rows); mutual information is per example — callers multiply by n
// when they need totals. The 0*log(0) = 0 convention applies cell-wise.

#include <cstdint>
#include <span>

#include "dendrolearn/dataset.hpp"

namespace dendrolearn {

using Bits = double;

// Total empirical entropy of a marginal count vector: sum_q -c_q*log2(c_q/n).
Bits empirical_entropy(std::span<const std::int64_t> counts);

// Total conditional empirical entropy sum_s sum_q -n[q,s]*log2(n[q,s]/n[s]);
// states with n[s] = 0 contribute nothing.
Bits conditional_empirical_entropy(const CondCountTable& t);

// Per-example plug-in mutual information from a co-occurrence table.
Bits mutual_information(const PairCounts& pc);

}  // namespace dendrolearn
