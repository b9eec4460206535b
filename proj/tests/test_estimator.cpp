#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hpdiv/estimator.hpp"
#include "hpdiv/random.hpp"

using namespace hpdiv;

namespace {

PointCloud cloud_from(std::initializer_list<std::initializer_list<double>> pts) {
  PointCloud c(pts.size(), pts.begin()->size());
  std::size_t i = 0;
  for (const auto& p : pts) {
    std::size_t k = 0;
    for (double v : p) c.point(i)[k++] = v;
    ++i;
  }
  return c;
}

// Frozen reference values for a unit mean shift between standard normals at
// p = q = 1/2. Both are dimension independent: the shifted pair reduces to a
// one-dimensional problem along the shift direction.
constexpr double kUnitShiftDivergence = 0.20405426563350031;
constexpr double kUnitShiftBayes = 0.308537538725987;  // Phi(-1/2)

}  // namespace

TEST_CASE("the smallest possible sample estimates zero divergence") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0, 0.0}});
  s.y_points = cloud_from({{1.0, 1.0}});
  auto e = estimate_divergence(s);
  CHECK(e.r_statistic == 1);
  // a_hat = 1 * 2 / 2 = 1, so the raw value is exactly 0.
  CHECK(e.a_hat == 1.0);
  CHECK(e.d_hat_raw == 0.0);
  CHECK(e.d_hat == 0.0);
  CHECK(e.p_hat == 0.5);
  CHECK(e.q_hat == 0.5);
}

TEST_CASE("alternating line: every edge mixed, estimate pinned at zero") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0}, {2.0}});
  s.y_points = cloud_from({{1.0}, {3.0}});
  auto e = estimate_divergence(s);
  CHECK(e.r_statistic == 3);
  CHECK(e.a_hat == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(e.d_hat_raw == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(e.d_hat == 0.0);  // clamped
}

TEST_CASE("separated clusters estimate maximal divergence") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0, 0.0}, {0.1, 0.0}, {0.0, 0.1}, {0.1, 0.1}});
  s.y_points = cloud_from({{9.0, 9.0}, {9.1, 9.0}, {9.0, 9.1}, {9.1, 9.1}});
  auto e = estimate_divergence(s);
  CHECK(e.r_statistic == 1);
  CHECK(e.a_hat == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(e.d_hat == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("identity a_hat + d_hat_raw == 1 holds on random samples") {
  rng64 g = make_rng(11);
  for (int t = 0; t < 25; ++t) {
    LabeledPointSet s;
    s.x_points = PointCloud(5 + t % 7, 2);
    s.y_points = PointCloud(4 + t % 5, 2);
    for (double& v : s.x_points.coords) v = uniform01(g);
    for (double& v : s.y_points.coords) v = uniform01(g);
    auto e = estimate_divergence(s);
    CHECK(e.a_hat + e.d_hat_raw == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.d_hat >= 0.0);
    CHECK(e.d_hat <= 1.0);
    CHECK(e.p_hat + e.q_hat == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("density models validate their parameters") {
  CHECK_THROWS_AS(DensityModel::gaussian_model({}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(DensityModel::gamma_copula_model(2, -1.0).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(DensityModel::gamma_copula_model(2, 1.0, 0.0).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(DensityModel::gamma_copula_model(2, 1.0, 1.0, 1.0).validate(),
                  std::invalid_argument);  // rho must stay below 1
  CHECK_THROWS_AS(DensityModel::student_t_model(2, 0.0).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(DensityModel::gaussian_model({0.0, 0.0}).validate());
  CHECK_NOTHROW(DensityModel::gamma_copula_model(3).validate());
  CHECK_NOTHROW(DensityModel::student_t_model(1).validate());
}

TEST_CASE("gaussian pdf matches the closed form") {
  auto f = DensityModel::gaussian_model({1.0, -1.0});
  double x[2] = {1.0, -1.0};
  CHECK(f.pdf(x) == doctest::Approx(1.0 / (2 * 3.141592653589793)).epsilon(1e-13));
  double y[2] = {2.0, -1.0};
  CHECK(f.pdf(y) ==
        doctest::Approx(std::exp(-0.5) / (2 * 3.141592653589793)).epsilon(1e-13));
}

TEST_CASE("student t pdf reduces to the univariate density at dim 1") {
  auto f = DensityModel::student_t_model(1, 3.0);
  for (double x : {-1.5, 0.0, 0.7, 2.0}) {
    CHECK(f.pdf(&x) == doctest::Approx(student_t_pdf(x, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("identical densities have zero divergence up to noise") {
  auto f = DensityModel::gaussian_model({0.0, 0.0});
  OracleConfig cfg;
  cfg.samples = 200000;
  cfg.seed = 5;
  auto r = true_hp_divergence(f, f, 0.5, cfg);
  // With f0 == f1 the integrand is constant, so the estimate is exact.
  CHECK(std::fabs(r.value) < 1e-12);
  CHECK(r.standard_error < 1e-12);
}

TEST_CASE("divergence oracle reproduces the unit-shift reference value") {
  OracleConfig cfg;
  cfg.samples = 1000000;
  cfg.seed = 2;
  for (std::size_t d : {1u, 3u}) {
    std::vector<double> m0(d, 0.0), m1(d, 0.0);
    m1[0] = 1.0;
    auto r = true_hp_divergence(DensityModel::gaussian_model(m0),
                                DensityModel::gaussian_model(m1), 0.5, cfg);
    CAPTURE(d);
    CHECK(r.standard_error < 2e-3);
    CHECK(std::fabs(r.value - kUnitShiftDivergence) < 4 * r.standard_error);
  }
}

TEST_CASE("divergence oracle is symmetric in its arguments") {
  auto f0 = DensityModel::gaussian_model({0.0});
  auto f1 = DensityModel::gamma_copula_model(1, 2.0, 1.0);
  OracleConfig cfg;
  cfg.samples = 400000;
  cfg.seed = 3;
  auto a = true_hp_divergence(f0, f1, 0.3, cfg);
  cfg.seed = 4;
  auto b = true_hp_divergence(f1, f0, 0.7, cfg);
  double se = std::hypot(a.standard_error, b.standard_error);
  CHECK(std::fabs(a.value - b.value) < 4 * se);
}

TEST_CASE("bayes error oracle reproduces the unit-shift reference value") {
  OracleConfig cfg;
  cfg.samples = 1000000;
  cfg.seed = 6;
  for (std::size_t d : {1u, 2u}) {
    std::vector<double> m0(d, 0.0), m1(d, 0.0);
    m1[0] = 1.0;
    auto r = true_bayes_error(DensityModel::gaussian_model(m0),
                              DensityModel::gaussian_model(m1), 0.5, cfg);
    CAPTURE(d);
    CHECK(std::fabs(r.value - kUnitShiftBayes) < 4 * r.standard_error + 1e-4);
  }
}

TEST_CASE("bayes error of identical densities is min(p, q)") {
  auto f = DensityModel::student_t_model(2, 3.0);
  OracleConfig cfg;
  cfg.samples = 100000;
  cfg.seed = 8;
  auto r = true_bayes_error(f, f, 0.3, cfg);
  CHECK(r.value == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("oracle flags configs that cannot reach the tolerance") {
  auto f0 = DensityModel::gaussian_model({0.0});
  auto f1 = DensityModel::gaussian_model({1.0});
  OracleConfig cfg;
  cfg.samples = 500;  // far too few draws for the default tolerance
  cfg.seed = 9;
  auto r = true_hp_divergence(f0, f1, 0.5, cfg);
  CHECK(r.se_warning);
  CHECK(r.standard_error > cfg.se_tolerance);
}

TEST_CASE("oracle draws are deterministic for a fixed config") {
  auto f0 = DensityModel::gamma_copula_model(2, 1.5, 2.0, 0.3);
  auto f1 = DensityModel::student_t_model(2, 3.0);
  OracleConfig cfg;
  cfg.samples = 50000;
  cfg.seed = 10;
  auto a = true_hp_divergence(f0, f1, 0.4, cfg);
  auto b = true_hp_divergence(f0, f1, 0.4, cfg);
  CHECK(a.value == b.value);
  CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("bootstrap intervals are ordered and centered sanely") {
  rng64 g = make_rng(13);
  LabeledPointSet s;
  s.x_points = PointCloud(40, 2);
  s.y_points = PointCloud(40, 2);
  for (double& v : s.x_points.coords) v = draw_normal(g);
  for (std::size_t i = 0; i < 40; ++i) {
    s.y_points.point(i)[0] = draw_normal(g) + 3.0;
    s.y_points.point(i)[1] = draw_normal(g);
  }
  auto iv = bootstrap_interval(s, 200, 0.95, 17);
  CHECK(iv.low <= iv.high);
  CHECK(iv.low >= 0.0);
  CHECK(iv.high <= 1.0);
  CHECK(iv.point == estimate_divergence(s).d_hat);
  // Strongly separated classes: the interval should sit near 1.
  CHECK(iv.low > 0.5);

  auto again = bootstrap_interval(s, 200, 0.95, 17);
  CHECK(again.low == iv.low);
  CHECK(again.high == iv.high);
}

TEST_CASE("bootstrap rejects undersized trial counts and bad levels") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0, 0.0}, {1.0, 0.0}});
  s.y_points = cloud_from({{0.5, 0.5}, {1.5, 0.5}});
  CHECK_THROWS_AS(bootstrap_interval(s, 99, 0.95, 1), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_interval(s, 200, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_interval(s, 200, 1.0, 1), std::invalid_argument);
}

TEST_CASE("sampling means track the model parameters") {
  rng64 g = make_rng(21);
  const int n = 100000;

  auto gauss = DensityModel::gaussian_model({1.0, 0.0});
  double sx = 0, sy = 0;
  double buf[2];
  for (int i = 0; i < n; ++i) {
    gauss.sample_into(g, buf);
    sx += buf[0];
    sy += buf[1];
  }
  CHECK(std::fabs(sx / n - 1.0) < 0.02);
  CHECK(std::fabs(sy / n) < 0.02);

  auto gam = DensityModel::gamma_copula_model(2, 2.0, 2.0, 0.5);
  sx = sy = 0;
  for (int i = 0; i < n; ++i) {
    gam.sample_into(g, buf);
    CHECK(buf[0] > 0.0);
    sx += buf[0];
    sy += buf[1];
  }
  CHECK(std::fabs(sx / n - 1.0) < 0.02);  // mean alpha/beta = 1
  CHECK(std::fabs(sy / n - 1.0) < 0.02);

  auto tee = DensityModel::student_t_model(2, 5.0);
  sx = 0;
  for (int i = 0; i < n; ++i) {
    tee.sample_into(g, buf);
    sx += buf[0];
  }
  CHECK(std::fabs(sx / n) < 0.03);
}
