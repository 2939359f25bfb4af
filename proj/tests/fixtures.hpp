// Test-only fixtures and independent oracles. Nothing here calls the code
// path it is used to check.
#pragma once

#include "ldens/data.hpp"
#include "ldens/ensemble.hpp"
#include "ldens/rng.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ldens::test {

/// Two isotropic Gaussian blobs (class 0 at -sep/2, class 1 at +sep/2 on the
/// first axis), routed through the normal CSV preprocessing path so the
/// result can be split like a real dataset.
inline Dataset two_gaussians(std::size_t m, std::size_t dim, double sep, std::uint64_t seed) {
  ColumnSchema schema;
  for (std::size_t d = 0; d < dim; ++d) schema.columns.push_back({"f" + std::to_string(d), ColumnKind::Numerical});
  schema.columns.push_back({"y", ColumnKind::Label});
  schema.positive_label = "1";

  RawTable raw;
  for (const auto& c : schema.columns) raw.header.push_back(c.name);
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const int label = static_cast<int>(i % 2);
    RawRow row;
    for (std::size_t d = 0; d < dim; ++d) {
      double v = noise(rng);
      if (d == 0) v += label == 1 ? sep / 2 : -sep / 2;
      row.emplace_back(std::to_string(v));
    }
    row.emplace_back(std::to_string(label));
    raw.rows.push_back(std::move(row));
  }
  return preprocess(raw, schema, "two_gaussians");
}

/// Delegation-chain recount with an explicit hop limit; nullopt on a cycle.
/// Returns, per voter, how many voters (itself included) resolve to it.
inline std::optional<std::vector<std::int64_t>> recount_weights(const EnsembleState& s) {
  std::vector<std::int64_t> count(s.voters.size(), 0);
  for (std::size_t j = 0; j < s.voters.size(); ++j) {
    std::size_t at = j;
    std::size_t hops = 0;
    while (s.voters[at].delegate_to != at) {
      at = s.voters[at].delegate_to;
      if (++hops > s.voters.size()) return std::nullopt;
    }
    ++count[at];
  }
  return count;
}

inline bool weights_consistent(const EnsembleState& s) {
  const auto rc = recount_weights(s);
  if (!rc) return false;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < s.voters.size(); ++i) {
    if ((*rc)[i] != s.voters[i].weight) return false;
    if ((s.voters[i].weight > 0) != (s.voters[i].delegate_to == i)) return false;
    sum += s.voters[i].weight;
  }
  return sum == static_cast<std::int64_t>(s.voters.size());
}

/// Number of n x cols 0/1 matrices whose every column has exactly k ones,
/// by walking every matrix cell-by-cell as a mixed-radix counter.
inline std::uint64_t enumerate_column_matrices(unsigned n, unsigned cols, unsigned k) {
  std::vector<int> cell(n * cols, 0);
  std::uint64_t hits = 0;
  while (true) {
    bool ok = true;
    for (unsigned c = 0; c < cols && ok; ++c) {
      unsigned ones = 0;
      for (unsigned r = 0; r < n; ++r) ones += cell[c * n + r];
      ok = ones == k;
    }
    hits += ok;
    std::size_t pos = 0;
    while (pos < cell.size() && cell[pos] == 1) cell[pos++] = 0;
    if (pos == cell.size()) break;
    cell[pos] = 1;
  }
  return hits;
}

/// Integer power for small exact expectations.
inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

inline std::uint64_t choose(unsigned n, unsigned k) {
  std::uint64_t c = 1;
  for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace ldens::test
