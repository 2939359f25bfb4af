#include "fixtures.hpp"

#include "ldens/data.hpp"
#include "ldens/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

using namespace ldens;

namespace {

ColumnSchema mixed_schema() {
  return parse_schema(
      "num,numerical\n"
      "cat,categorical\n"
      "label,label\n"
      "positive_label=yes\n");
}

}  // namespace

TEST_CASE("schema sidecar parsing") {
  const auto s = mixed_schema();
  CHECK(s.columns.size() == 3);
  CHECK(s.label_index() == 2);
  CHECK(s.positive_label == "yes");
  CHECK_THROWS_AS(parse_schema("a,numerical\npositive_label=1\n"), ConfigError);             // no label
  CHECK_THROWS_AS(parse_schema("y,label\npositive_label=1\n"), ConfigError);                 // no features
  CHECK_THROWS_AS(parse_schema("a,numerical\ny,label\nz,label\npositive_label=1\n"), ConfigError);
  CHECK_THROWS_AS(parse_schema("a,ordinal\ny,label\npositive_label=1\n"), ConfigError);
}

TEST_CASE("load_csv") {
  const auto s = mixed_schema();

  SUBCASE("header only gives an empty table") {
    const auto t = parse_csv("num,cat,label\n", s);
    CHECK(t.rows.empty());
  }
  SUBCASE("missing sentinel survives loading") {
    const auto t = parse_csv("num,cat,label\n1,a,yes\n?,b,no\n", s);
    REQUIRE(t.rows.size() == 2);
    CHECK_FALSE(t.rows[1][0].has_value());
    CHECK(*t.rows[1][1] == "b");
  }
  SUBCASE("column count mismatch") {
    CHECK_THROWS_AS(parse_csv("num,cat,label\n1,a\n", s), Error);
    CHECK_THROWS_AS(parse_csv("num,label\n", s), Error);
    CHECK_THROWS_AS(parse_csv("num,kat,label\n", s), Error);
  }
  SUBCASE("a third label value is rejected") {
    CHECK_THROWS_AS(parse_csv("num,cat,label\n1,a,yes\n2,a,no\n3,a,maybe\n", s), Error);
    CHECK_THROWS_AS(parse_csv("num,cat,label\n1,a,no\n2,a,nope\n", s), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_csv("/nonexistent/x.csv", s), ConfigError);
  }
}

TEST_CASE("preprocess encodes and standardizes") {
  const auto s = mixed_schema();
  const auto t = parse_csv("num,cat,label\n1,a,yes\n2,b,no\n3,a,yes\n", s);
  const auto d = preprocess(t, s);
  REQUIRE(d.x.rows() == 3);
  REQUIRE(d.x.cols() == 3);
  // mean 2, population sd sqrt(2/3)
  const double sd = std::sqrt(2.0 / 3.0);
  CHECK(d.x(0, 0) == doctest::Approx(-1.0 / sd).epsilon(1e-12));
  CHECK(d.x(1, 0) == doctest::Approx(0.0));
  CHECK(d.x(2, 0) == doctest::Approx(1.0 / sd).epsilon(1e-12));
  CHECK(d.x(0, 0) == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(d.standardization_stats[0].stddev == doctest::Approx(0.8165).epsilon(1e-4));
  // one-hot, first-appearance order a, b
  CHECK(d.x(0, 1) == 1.0);
  CHECK(d.x(0, 2) == 0.0);
  CHECK(d.x(1, 1) == 0.0);
  CHECK(d.x(1, 2) == 1.0);
  CHECK(d.x(2, 1) == 1.0);
  CHECK(d.y == Labels{1, 0, 1});
}

TEST_CASE("constant numerical column encodes as zeros") {
  const auto s = mixed_schema();
  const auto d = preprocess(parse_csv("num,cat,label\n5,a,yes\n5,a,no\n5,a,yes\n", s), s);
  for (int r = 0; r < 3; ++r) CHECK(d.x(r, 0) == 0.0);
  CHECK(d.standardization_stats[0].stddev == 1.0);
}

TEST_CASE("incomplete rows are dropped without touching survivors") {
  const auto s = mixed_schema();
  const auto full = preprocess(parse_csv("num,cat,label\n1,a,yes\n3,b,no\n", s), s);
  const auto holes = preprocess(parse_csv("num,cat,label\n1,a,yes\n?,a,no\n3,b,no\n7,?,yes\n", s), s);
  CHECK(holes.dropped_rows == 2);
  CHECK(holes.x == full.x);
  CHECK(holes.y == full.y);
  CHECK_THROWS_AS(preprocess(parse_csv("num,cat,label\n?,a,yes\n", s), s), Error);
}

TEST_CASE("preprocess is deterministic") {
  const auto d1 = test::two_gaussians(50, 3, 2.0, 9);
  const auto d2 = test::two_gaussians(50, 3, 2.0, 9);
  CHECK(d1.x == d2.x);
  CHECK(d1.y == d2.y);
}

TEST_CASE("standardized columns have zero mean and unit variance") {
  const auto d = test::two_gaussians(200, 4, 3.0, 3);
  for (Eigen::Index c = 0; c < d.x.cols(); ++c) {
    const double mean = d.x.col(c).mean();
    const double var = (d.x.col(c).array() - mean).square().mean();
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(var - 1.0) < 1e-9);
  }
}

TEST_CASE("shuffle_split") {
  const auto d = test::two_gaussians(100, 2, 2.0, 1);

  SUBCASE("sizes") {
    const auto s = shuffle_split(d, 0.2, 7);
    CHECK(s.train.size() == 80);
    CHECK(s.test.size() == 20);
  }
  SUBCASE("same seed, same split") {
    const auto a = shuffle_split(d, 0.2, 7);
    const auto b = shuffle_split(d, 0.2, 7);
    CHECK(a.train.source_rows == b.train.source_rows);
    CHECK(a.train.x == b.train.x);
    CHECK(a.test.x == b.test.x);
  }
  SUBCASE("disjoint cover") {
    const auto s = shuffle_split(d, 0.3, 11);
    std::set<std::size_t> all(s.train.source_rows.begin(), s.train.source_rows.end());
    for (auto r : s.test.source_rows) CHECK(all.insert(r).second);
    CHECK(all.size() == 100);
  }
  SUBCASE("statistics come from the training rows") {
    const auto s = shuffle_split(d, 0.25, 5);
    for (Eigen::Index c = 0; c < s.train.x.cols(); ++c) {
      CHECK(std::abs(s.train.x.col(c).mean()) < 1e-9);
      CHECK(std::abs(s.test.x.col(c).mean()) > 1e-9);  // different rows, different mean
    }
  }
  SUBCASE("empty split is an error") {
    CHECK_THROWS_AS(shuffle_split(d, 0.001, 1), ConfigError);
    CHECK_THROWS_AS(shuffle_split(d, 0.999, 1), ConfigError);
    CHECK_THROWS_AS(shuffle_split(d, 1.0, 1), ConfigError);
  }
}

TEST_CASE("unseen test categories encode as all zeros") {
  const auto s = mixed_schema();
  std::string csv = "num,cat,label\n";
  for (int i = 0; i < 19; ++i) csv += std::to_string(i) + ",a," + (i % 2 ? "yes" : "no") + "\n";
  csv += "99,zzz,yes\n";
  const auto d = preprocess(parse_csv(csv, s), s);
  // Find a seed whose test split holds the odd row out.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto sp = shuffle_split(d, 0.1, seed);
    const auto it = std::find(sp.test.source_rows.begin(), sp.test.source_rows.end(), std::size_t{19});
    if (it == sp.test.source_rows.end()) continue;
    const auto r = static_cast<Eigen::Index>(it - sp.test.source_rows.begin());
    CHECK(sp.train.x.cols() == 2);  // num + category "a"
    CHECK(sp.test.x(r, 1) == 0.0);
    return;
  }
  FAIL("no seed put the unseen category in the test split");
}

TEST_CASE("spambase: different seeds give different row orders") {
  const auto d = load_dataset(resolve_dataset("spambase", LDENS_TEST_DATA_DIR));
  CHECK(d.size() == 4597);
  CHECK(d.dim() == 57);
  const auto a = shuffle_split(d, 0.2, 1);
  const auto b = shuffle_split(d, 0.2, 2);
  CHECK(a.train.source_rows != b.train.source_rows);
}

TEST_CASE("partition_increments") {
  SUBCASE("exact division") {
    const auto p = partition_increments(100, 25);
    CHECK(p.count() == 4);
    for (const auto& s : p.slices) CHECK(s.count == 25);
  }
  SUBCASE("leftover joins the last increment") {
    const auto p = partition_increments(103, 25);
    REQUIRE(p.count() == 4);
    CHECK(p.slices.back().count == 28);
  }
  SUBCASE("too few rows") { CHECK_THROWS_AS(partition_increments(24, 25), ConfigError); }
  SUBCASE("zero size") { CHECK_THROWS_AS(partition_increments(24, 0), ConfigError); }
  SUBCASE("slices partition the rows") {
    for (std::size_t m = 1; m < 120; m += 7)
      for (std::size_t u = 1; u <= m; u += 5) {
        const auto p = partition_increments(m, u);
        std::vector<int> hit(m, 0);
        for (std::size_t k = 0; k < p.count(); ++k) {
          const auto& s = p.slices[k];
          if (k + 1 < p.count()) CHECK(s.count == u);
          else CHECK((s.count >= u && s.count <= 2 * u - 1));
          for (std::size_t r = s.begin; r < s.begin + s.count; ++r) ++hit[r];
        }
        CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
        CHECK(p.count() == m / u);
      }
  }
}

TEST_CASE("dataset registry") {
  const auto entries = list_datasets(LDENS_TEST_DATA_DIR);
  std::set<std::string> names;
  for (const auto& e : entries) names.insert(e.name);
  CHECK(names.count("spambase"));
  CHECK(names.count("heart"));
  CHECK_THROWS_AS(resolve_dataset("no-such-dataset", LDENS_TEST_DATA_DIR), ConfigError);

  const auto heart = load_dataset(resolve_dataset("heart", LDENS_TEST_DATA_DIR));
  CHECK(heart.size() == 270);
}
