#include "ldens/analysis.hpp"

#include "ldens/error.hpp"
#include "ldens/mechanisms.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace ldens {
namespace {

void check_rate(double n, double n_final, double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error("retention rate must lie strictly inside (0, 1)");
  if (!(n_final >= 1.0 && n_final <= n)) throw Error("n_final must lie in [1, n]");
}

}  // namespace

double ExactRatio::to_double() const {
  if (denominator <= 0) throw Error("ratio denominator must be positive");
  if (numerator == 0) return 0.0;
  // Scale so the integer quotient carries 64-65 significant bits, then undo
  // the scaling in the exponent.
  const auto num_bits = static_cast<long>(boost::multiprecision::msb(numerator));
  const auto den_bits = static_cast<long>(boost::multiprecision::msb(denominator));
  const long shift = 64 - (num_bits - den_bits);
  const BigInt q = shift >= 0 ? BigInt(numerator << shift) / denominator
                              : numerator / BigInt(denominator << -shift);
  return std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
}

double min_increments(double n, double n_final, double r) {
  check_rate(n, n_final, r);
  return std::log(n_final / n) / std::log(r);
}

double delegation_cost_bound(double n, double n_final, double r) {
  const double z = min_increments(n, n_final, r);
  return n * (1.0 - std::pow(r, z + 1.0)) / (1.0 - r);
}

CostCurvePoint cost_curve_point(std::size_t n, std::size_t n_final, double r) {
  const auto dn = static_cast<double>(n), df = static_cast<double>(n_final);
  return {n, n_final, r, min_increments(dn, df, r), delegation_cost_bound(dn, df, r)};
}

std::vector<std::size_t> simulate_pruning_schedule(std::size_t n, std::size_t n_final, double r) {
  check_rate(static_cast<double>(n), static_cast<double>(n_final), r);
  std::vector<std::size_t> active;
  std::size_t g = n;
  while (true) {
    active.push_back(g);
    const auto k = removal_count(g, r, n_final);
    if (k == 0) break;
    g -= k;
  }
  return active;
}

std::int64_t simulated_incremental_cost(std::size_t n, std::size_t n_final, double r) {
  std::int64_t sum = 0;
  for (auto g : simulate_pruning_schedule(n, n_final, r)) sum += static_cast<std::int64_t>(g);
  return sum;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

PivotalBound pivotal_fraction(unsigned n, unsigned m) {
  if (n < 1) throw Error("pivotal_fraction needs n >= 1");
  if (m < 2) throw Error("pivotal_fraction needs m >= 2");
  const BigInt column = binomial(n, (n + 1) / 2);
  PivotalBound out;
  out.ratio.numerator = 0;
  out.ratio.denominator = 0;
  BigInt pivotal_term = column * column;
  BigInt total_term = BigInt(1) << (2 * n);
  for (unsigned k = 2; k <= m; ++k) {
    out.ratio.numerator += pivotal_term;
    out.ratio.denominator += total_term;
    pivotal_term *= column;
    total_term <<= n;
  }
  out.approx = out.ratio.to_double();
  return out;
}

std::uint64_t brute_force_pivotal_count(unsigned n, unsigned m_p) {
  if (n < 1 || m_p < 1) throw Error("brute_force_pivotal_count needs n, m_p >= 1");
  if (n * m_p > 24) throw Error("instance too large for enumeration (n * m_p > 24)");
  const unsigned need = (n + 1) / 2;
  const std::uint64_t column_mask = (std::uint64_t{1} << n) - 1;
  const std::uint64_t states = std::uint64_t{1} << (n * m_p);
  std::uint64_t count = 0;
  for (std::uint64_t s = 0; s < states; ++s) {
    bool ok = true;
    for (unsigned j = 0; j < m_p && ok; ++j)
      ok = static_cast<unsigned>(std::popcount((s >> (j * n)) & column_mask)) == need;
    count += ok;
  }
  return count;
}

bool check_lemma1_counterexample_absence(unsigned n, unsigned m) {
  if (n < 1 || m < 1) throw Error("lemma check needs n, m >= 1");
  if (n * m > 20) throw Error("instance too large for enumeration (n * m > 20)");
  if (n == 1) return true;
  const unsigned need = (n + 1) / 2;
  const std::uint64_t states = std::uint64_t{1} << (n * m);
  // Bit (j * n + i) of a state: voter i correct on example j.
  auto bit = [n](std::uint64_t s, unsigned i, unsigned j) { return static_cast<unsigned>((s >> (j * n + i)) & 1U); };

  std::vector<unsigned> sums(m);
  for (std::uint64_t s = 0; s < states; ++s) {
    unsigned correct = 0;
    for (unsigned j = 0; j < m; ++j) {
      sums[j] = static_cast<unsigned>(std::popcount((s >> (j * n)) & ((std::uint64_t{1} << n) - 1)));
      correct += sums[j] >= need;
    }
    // A voter pivotal on no example may delegate to anyone: every example it
    // backs correctly keeps a majority without it, and k's vote only adds.
    for (unsigned i = 0; i < n; ++i) {
      bool pivotal = false;
      for (unsigned j = 0; j < m && !pivotal; ++j) pivotal = sums[j] == need && bit(s, i, j);
      if (pivotal) continue;
      for (unsigned k = 0; k < n; ++k) {
        if (k == i) continue;
        unsigned after = 0;
        for (unsigned j = 0; j < m; ++j) after += sums[j] - bit(s, i, j) + bit(s, k, j) >= need;
        if (after < correct) return false;
      }
    }
  }
  return true;
}

}  // namespace ldens
