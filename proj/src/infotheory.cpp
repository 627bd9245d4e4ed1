#include "dendrolearn/infotheory.hpp"

#include <algorithm>
#include <cmath>

#include "dendrolearn/errors.hpp"

namespace dendrolearn {

namespace {

// sum_q -c_q*log2(c_q/total) over one count row.
Bits row_entropy(std::span<const std::int64_t> counts, std::int64_t total) {
  Bits h = 0.0;
  for (std::int64_t c : counts) {
    if (c > 0) h -= static_cast<double>(c) * std::log2(static_cast<double>(c) / static_cast<double>(total));
  }
  return h;
}

}  // namespace

Bits empirical_entropy(std::span<const std::int64_t> counts) {
  std::int64_t n = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw ArgumentError("counts must be nonnegative");
    n += c;
  }
  if (n == 0) throw ArgumentError("counts must not be all zero");
  return row_entropy(counts, n);
}

Bits conditional_empirical_entropy(const CondCountTable& t) {
  Bits h = 0.0;
  for (std::int64_t s = 0; s < t.states; ++s) {
    if (t.state_totals[s] > 0) h += row_entropy(t.counts[s], t.state_totals[s]);
  }
  return h;
}

Bits mutual_information(const PairCounts& pc) {
  const auto rows = pc.table.size();
  const auto cols = rows == 0 ? 0 : pc.table[0].size();
  std::vector<std::int64_t> row_sum(rows, 0), col_sum(cols, 0);
  for (std::size_t u = 0; u < rows; ++u)
    for (std::size_t v = 0; v < cols; ++v) {
      row_sum[u] += pc.table[u][v];
      col_sum[v] += pc.table[u][v];
    }

  const double n = static_cast<double>(pc.n);
  Bits mi = 0.0;
  for (std::size_t u = 0; u < rows; ++u)
    for (std::size_t v = 0; v < cols; ++v) {
      const std::int64_t c = pc.table[u][v];
      if (c == 0) continue;
      // log2(p(u,v)/(p(u)p(v))) with the counts kept integral inside the log.
      const double ratio = (static_cast<double>(c) * n) /
                           (static_cast<double>(row_sum[u]) * static_cast<double>(col_sum[v]));
      mi += (static_cast<double>(c) / n) * std::log2(ratio);
    }
  // Exact-arithmetic MI is nonnegative; rounding can leave a tiny residue.
  return std::max(mi, 0.0);
}

}  // namespace dendrolearn
