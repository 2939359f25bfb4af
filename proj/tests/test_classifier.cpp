#include "fixtures.hpp"

#include "ldens/classifier.hpp"
#include "ldens/error.hpp"

#include <doctest.h>

#include <limits>
#include <sstream>

using namespace ldens;

namespace {

LinearModel zero_model(std::size_t dim, SgdHyperparams h = {}) {
  auto m = init_model(dim, 1, h);
  m.w.setZero();
  m.b = 0.0;
  return m;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix x(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) x(i, j++) = v;
    ++i;
  }
  return x;
}

}  // namespace

TEST_CASE("init_model") {
  const auto a = init_model(3, 42);
  const auto b = init_model(3, 42);
  const auto c = init_model(3, 43);
  CHECK(a.w.size() == 3);
  CHECK(a.w == b.w);
  CHECK(a.w != c.w);
  CHECK(a.b == 0.0);
  CHECK(a.epochs_seen == 0);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(a.w[i]) <= 0.01);
  CHECK_THROWS_AS(init_model(0, 1), Error);
  SgdHyperparams bad;
  bad.eta0 = 0.0;
  CHECK_THROWS_AS(init_model(2, 1, bad), ConfigError);
}

TEST_CASE("partial_fit single hinge-violating step") {
  SgdHyperparams h;
  h.lambda = 0.0;
  h.eta0 = 0.01;
  auto m = zero_model(2, h);
  const Matrix x = rows({{1.0, 0.0}});
  const std::vector<int> y{1};
  const double loss = partial_fit(m, x, y);
  CHECK(loss == doctest::Approx(1.0));
  CHECK(m.w[0] == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(m.w[1] == 0.0);
  CHECK(m.b == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(m.epochs_seen == 1);
  CHECK(m.examples_seen == 1);
}

TEST_CASE("partial_fit negative label moves the other way") {
  SgdHyperparams h;
  h.lambda = 0.0;
  auto m = zero_model(2, h);
  const Matrix x = rows({{0.0, 2.0}});
  partial_fit(m, x, std::vector<int>{0});
  CHECK(m.w[1] == doctest::Approx(-0.02));
  CHECK(m.b == doctest::Approx(-0.01));
}

TEST_CASE("partial_fit leaves w alone when the margin is met") {
  SgdHyperparams h;
  h.lambda = 0.0;
  auto m = zero_model(2, h);
  m.w << 2.0, 0.0;
  const Matrix x = rows({{1.0, 5.0}});
  partial_fit(m, x, std::vector<int>{1});
  CHECK(m.w[0] == 2.0);
  CHECK(m.w[1] == 0.0);
  CHECK(m.b == 0.0);
}

TEST_CASE("L2 shrinkage follows the step-size schedule") {
  SgdHyperparams h;
  h.lambda = 0.5;
  h.eta0 = 0.1;
  auto m = zero_model(1, h);
  m.w << 10.0;
  const Matrix x = rows({{1.0}, {1.0}, {1.0}});
  partial_fit(m, x, std::vector<int>{1, 1, 1});  // margin 10 >= 1 each time
  double w = 10.0;
  for (int t = 0; t < 3; ++t) {
    const double eta = 0.1 / (1.0 + 0.1 * 0.5 * t);
    w *= 1.0 - eta * 0.5;
  }
  CHECK(m.w[0] == doctest::Approx(w).epsilon(1e-14));
  CHECK(m.updates == 3);
}

TEST_CASE("partial_fit counters and errors") {
  auto m = init_model(2, 5);
  const Matrix x = rows({{1, 2}, {3, 4}, {5, 6}});
  const std::vector<int> y{0, 1, 0};
  for (int k = 1; k <= 4; ++k) {
    partial_fit(m, x, y);
    CHECK(m.epochs_seen == k);
    CHECK(m.examples_seen == 3 * k);
  }
  CHECK_THROWS_AS(partial_fit(m, Matrix(0, 2), std::vector<int>{}), Error);
  CHECK_THROWS_AS(partial_fit(m, rows({{1, 2, 3}}), std::vector<int>{1}), Error);
}

TEST_CASE("full_fit") {
  SUBCASE("separable two points") {
    auto m = init_model(1, 3);
    const Matrix x = rows({{1.0}, {-1.0}});
    const std::vector<int> y{1, 0};
    const int epochs = full_fit(m, x, y);
    CHECK(epochs >= 1);
    CHECK(m.epochs_seen == epochs);
    CHECK(accuracy_on(m, x, y) == 1.0);
  }
  SUBCASE("epoch cap") {
    SgdHyperparams h;
    h.max_epochs_full_fit = 1;
    auto m = init_model(1, 3, h);
    m.epochs_seen = 7;
    CHECK(full_fit(m, rows({{1.0}, {-1.0}}), std::vector<int>{1, 0}) == 1);
    CHECK(m.epochs_seen == 8);
  }
  SUBCASE("infinite tolerance stops after patience epochs") {
    SgdHyperparams h;
    h.tol = std::numeric_limits<double>::infinity();
    h.patience = 4;
    auto m = init_model(1, 3, h);
    CHECK(full_fit(m, rows({{1.0}, {-1.0}}), std::vector<int>{1, 0}) == 4);
    CHECK(m.epochs_seen == 4);
  }
  SUBCASE("losses stay finite on standardized data") {
    const auto d = test::two_gaussians(300, 5, 2.0, 17);
    auto m = init_model(5, 2);
    full_fit(m, d.x, d.y);
    CHECK(m.w.allFinite());
    CHECK(std::isfinite(m.b));
    CHECK(accuracy_on(m, d.x, d.y) > 0.75);
  }
}

TEST_CASE("predict") {
  auto m = zero_model(1);
  m.w << 1.0;
  CHECK(predict(m, Vector::Constant(1, 2.0)) == 1);
  CHECK(predict(m, Vector::Constant(1, 0.0)) == 0);
  auto m2 = zero_model(2);
  m2.w << -1.0, 2.0;
  m2.b = 0.5;
  Vector x(2);
  x << 1.0, 0.0;
  CHECK(predict(m2, x) == 0);
  CHECK_THROWS_AS(predict(m2, Vector::Constant(3, 1.0)), Error);
}

TEST_CASE("accuracy_on") {
  auto m = zero_model(1);  // constant score 0 -> class 0
  CHECK(accuracy_on(m, rows({{1}, {2}, {3}, {4}}), std::vector<int>{0, 0, 1, 1}) == 0.5);
  CHECK_THROWS_AS(accuracy_on(m, Matrix(0, 1), std::vector<int>{}), Error);

  const auto d = test::two_gaussians(120, 3, 1.0, 4);
  auto fitted = init_model(3, 8);
  partial_fit(fitted, d.x, d.y);
  std::size_t hits = 0;
  for (Eigen::Index r = 0; r < d.x.rows(); ++r) {
    const double score = fitted.w.dot(d.x.row(r).transpose()) + fitted.b;
    hits += (score > 0 ? 1 : 0) == d.y[static_cast<std::size_t>(r)];
  }
  CHECK(accuracy_on(fitted, d.x, d.y) == static_cast<double>(hits) / 120.0);
}

TEST_CASE("training is deterministic") {
  const auto d = test::two_gaussians(80, 4, 2.0, 6);
  auto a = init_model(4, 99);
  auto b = init_model(4, 99);
  for (int k = 0; k < 3; ++k) {
    partial_fit(a, d.x, d.y);
    partial_fit(b, d.x, d.y);
  }
  full_fit(a, d.x, d.y);
  full_fit(b, d.x, d.y);
  CHECK(a.w == b.w);
  CHECK(a.b == b.b);
  CHECK(a.epochs_seen == b.epochs_seen);
}

TEST_CASE("model dump round trip") {
  auto m = init_model(3, 12);
  m.b = -0.25;
  m.epochs_seen = 9;
  std::stringstream ss;
  write_model(ss, m);
  const auto back = read_model(ss);
  CHECK(back.w == m.w);
  CHECK(back.b == m.b);
  CHECK(back.epochs_seen == 9);
  std::stringstream junk("hello 1 2");
  CHECK_THROWS_AS(read_model(junk), Error);
}
