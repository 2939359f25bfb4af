#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ldens {

using BigInt = boost::multiprecision::cpp_int;

/// Exact nonnegative ratio; compared by cross-multiplication, never rounded.
struct ExactRatio {
  BigInt numerator;
  BigInt denominator{1};

  /// numerator / denominator as a double, correct even when both exceed the
  /// double range.
  double to_double() const;

  friend bool operator==(const ExactRatio& a, const ExactRatio& b) {
    return a.numerator * b.denominator == b.numerator * a.denominator;
  }
};

/// Increments needed for n * r^z to shrink to n_final: log(n_final/n) / log(r).
double min_increments(double n, double n_final, double r);

/// Analytic lower bound on incremental training cost in units of u examples:
/// n (1 - r^(z+1)) / (1 - r).
double delegation_cost_bound(double n, double n_final, double r);

struct CostCurvePoint {
  std::size_t n = 0;
  std::size_t n_final = 0;
  double r = 0.0;
  double z = 0.0;
  double bound = 0.0;
};

CostCurvePoint cost_curve_point(std::size_t n, std::size_t n_final, double r);

/// Integer pruning schedule the trainer follows when every selected voter can
/// delegate and data never runs out: active counts per trained increment,
/// ending with the increment on which selection comes back empty.
std::vector<std::size_t> simulate_pruning_schedule(std::size_t n, std::size_t n_final, double r);

/// Sum of the schedule: incremental cost in units of u.
std::int64_t simulated_incremental_cost(std::size_t n, std::size_t n_final, double r);

BigInt binomial(unsigned n, unsigned k);

struct PivotalBound {
  ExactRatio ratio;
  double approx = 0.0;
};

/// sum_{k=2..m} C(n, ceil(n/2))^k  over  sum_{k=2..m} 2^(n k).
PivotalBound pivotal_fraction(unsigned n, unsigned m);

/// Exhaustive count of n x m_p binary matrices whose every column holds
/// exactly ceil(n/2) ones. Requires n * m_p <= 24.
std::uint64_t brute_force_pivotal_count(unsigned n, unsigned m_p);

/// Exhaustive check over every n x m correctness matrix (all voters
/// self-delegating, unit weight): a voter pivotal on no example can delegate
/// to any other voter without lowering the number of correctly decided
/// examples. That implies at least one harmless delegation exists whenever
/// such a voter does. Requires n * m <= 20.
bool check_lemma1_counterexample_absence(unsigned n, unsigned m);

}  // namespace ldens
