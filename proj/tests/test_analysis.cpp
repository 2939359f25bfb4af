#include "fixtures.hpp"

#include "ldens/analysis.hpp"
#include "ldens/error.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

using namespace ldens;

namespace {

// Decimal long division: 20 significant digits of num/den, parsed by strtod.
double decimal_quotient(const BigInt& num, const BigInt& den) {
  const std::string nd = num.str(), dd = den.str();
  long exp10 = static_cast<long>(nd.size()) - static_cast<long>(dd.size());
  const long scale = 20 - exp10;
  BigInt scaled = num;
  BigInt d = den;
  if (scale >= 0)
    scaled *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale));
  else
    d *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-scale));
  const std::string digits = BigInt(scaled / d).str();
  const std::string text = digits + "e" + std::to_string(-scale);
  return std::strtod(text.c_str(), nullptr);
}

}  // namespace

TEST_CASE("min_increments") {
  CHECK(min_increments(100, 25, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(min_increments(350, 350, 0.5) == 0.0);
  const double z = min_increments(350, 10, 0.95);
  CHECK(z == doctest::Approx(69.314).epsilon(1e-5));
  // Iterating n <- n r crosses n_final right after floor(z) steps.
  double g = 350;
  int steps = 0;
  while (g > 10) {
    g *= 0.95;
    ++steps;
  }
  CHECK(steps == static_cast<int>(std::ceil(z)));
  for (double r : {0.1, 0.37, 0.5, 0.8, 0.95, 0.99})
    for (double nf : {1.0, 10.0, 25.0, 99.0}) {
      const double zz = min_increments(350, nf, r);
      CHECK(std::abs(350 * std::pow(r, zz) - nf) <= 1e-9 * nf);
    }
  CHECK_THROWS_AS(min_increments(10, 5, 1.0), Error);
  CHECK_THROWS_AS(min_increments(10, 5, 0.0), Error);
  CHECK_THROWS_AS(min_increments(10, 11, 0.5), Error);
}

TEST_CASE("delegation_cost_bound") {
  CHECK(delegation_cost_bound(100, 25, 0.5) == doctest::Approx(175.0).epsilon(1e-15));
  CHECK(delegation_cost_bound(100, 25, 0.5) == doctest::Approx(100.0 + 50.0 + 25.0));
  const auto p = cost_curve_point(350, 10, 0.8);
  CHECK(p.z == min_increments(350, 10, 0.8));
  CHECK(p.bound == delegation_cost_bound(350, 10, 0.8));
  CHECK(p.bound >= 350);

  SUBCASE("non-increasing in the delegation rate 1 - r") {
    for (double nf : {10.0, 25.0, 50.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int k = 1; k < 1000; ++k) {
        const double b = delegation_cost_bound(350, nf, 1.0 - k / 1000.0);
        CHECK(b <= prev * (1 + 1e-12));
        prev = b;
        // closed form (n - n_final r) / (1 - r)
        const double r = 1.0 - k / 1000.0;
        CHECK(b == doctest::Approx((350 - nf * r) / (1 - r)).epsilon(1e-9));
      }
    }
  }
  SUBCASE("never above the simulated integer schedule") {
    for (std::size_t n : {50u, 100u, 200u, 350u})
      for (std::size_t nf : {1u, 10u, 25u})
        for (double r : {0.05, 0.15, 0.5, 0.8, 0.95}) {
          const auto sim = simulated_incremental_cost(n, nf, r);
          CHECK(delegation_cost_bound(static_cast<double>(n), static_cast<double>(nf), r) <=
                static_cast<double>(sim) + 1e-9);
        }
  }
}

TEST_CASE("simulated schedule") {
  const auto s = simulate_pruning_schedule(100, 25, 0.5);
  CHECK(s == std::vector<std::size_t>{100, 50, 25});
  CHECK(simulated_incremental_cost(100, 25, 0.5) == 175);
  CHECK(simulate_pruning_schedule(10, 10, 0.5) == std::vector<std::size_t>{10});
}

TEST_CASE("binomial") {
  CHECK(binomial(5, 3) == 10);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(51, 26).str() == "247959266474052");
  for (unsigned n = 0; n < 30; ++n)
    for (unsigned k = 0; k <= n; ++k) CHECK(binomial(n, k) == BigInt(test::choose(n, k)));
}

TEST_CASE("brute-force pivotal counts") {
  CHECK(brute_force_pivotal_count(3, 1) == 3);
  CHECK(brute_force_pivotal_count(3, 2) == 9);
  CHECK(brute_force_pivotal_count(5, 2) == 100);
  for (unsigned n = 1; n <= 5; ++n)
    for (unsigned mp = 1; mp <= 3; ++mp) {
      const auto expect = test::ipow(test::choose(n, (n + 1) / 2), mp);
      CHECK(brute_force_pivotal_count(n, mp) == expect);
      if (n * mp <= 12) CHECK(test::enumerate_column_matrices(n, mp, (n + 1) / 2) == expect);
    }
  CHECK_THROWS_AS(brute_force_pivotal_count(5, 5), Error);
}

TEST_CASE("pivotal_fraction") {
  const auto p = pivotal_fraction(3, 2);
  CHECK(p.ratio == ExactRatio{9, 64});
  CHECK(p.approx == 0.140625);
  CHECK(test::enumerate_column_matrices(3, 2, 2) == 9);

  const auto q = pivotal_fraction(3, 3);
  CHECK(q.ratio == ExactRatio{9 + 27, 64 + 512});

  CHECK(pivotal_fraction(11, 11).approx == doctest::Approx(7.7e-8).epsilon(0.01));
  CHECK(pivotal_fraction(51, 51).approx == doctest::Approx(1.36e-49).epsilon(0.01));
  CHECK_THROWS_AS(pivotal_fraction(5, 1), Error);

  SUBCASE("exact-to-float conversion agrees to 15 significant digits") {
    for (unsigned n : {11u, 21u, 31u, 41u, 51u})
      for (unsigned m : {11u, 21u, 31u, 41u, 51u}) {
        const auto b = pivotal_fraction(n, m);
        const double oracle = decimal_quotient(b.ratio.numerator, b.ratio.denominator);
        CHECK(std::abs(b.approx - oracle) <= 1e-15 * oracle);
      }
  }
  SUBCASE("decreasing in n for fixed m") {
    for (unsigned m : {5u, 11u})
      for (unsigned n = 3; n < 40; n += 2) CHECK(pivotal_fraction(n + 2, m).approx < pivotal_fraction(n, m).approx);
  }
}

TEST_CASE("ExactRatio") {
  CHECK(ExactRatio{1, 3} == ExactRatio{2, 6});
  CHECK_FALSE(ExactRatio{1, 3} == ExactRatio{1, 4});
  CHECK(ExactRatio{0, 7}.to_double() == 0.0);
  CHECK(ExactRatio{1, 3}.to_double() == 1.0 / 3.0);
  const BigInt huge = BigInt(1) << 5000;
  CHECK((ExactRatio{huge, huge * 4}.to_double()) == 0.25);
  CHECK((ExactRatio{3, huge}.to_double()) == 0.0);  // underflows cleanly
  CHECK_THROWS_AS((ExactRatio{1, 0}.to_double()), Error);
}

TEST_CASE("lemma check") {
  CHECK(check_lemma1_counterexample_absence(1, 4));
  CHECK(check_lemma1_counterexample_absence(3, 2));
  CHECK(check_lemma1_counterexample_absence(3, 3));
  CHECK(check_lemma1_counterexample_absence(4, 3));
  CHECK_THROWS_AS(check_lemma1_counterexample_absence(5, 5), Error);
}
