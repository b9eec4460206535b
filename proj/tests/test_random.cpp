#include <cmath>
#include <vector>

#include "doctest.h"
#include "hpdiv/random.hpp"

using namespace hpdiv;

TEST_CASE("splitmix64 is deterministic and advances state") {
  std::uint64_t s1 = 42, s2 = 42;
  auto a = splitmix64(s1);
  auto b = splitmix64(s2);
  CHECK(a == b);
  CHECK(s1 == s2);
  CHECK(splitmix64(s1) != a);
}

TEST_CASE("sub_seed separates streams by tag and indices") {
  auto base = sub_seed(7, 1);
  CHECK(base == sub_seed(7, 1));
  CHECK(base != sub_seed(7, 2));
  CHECK(sub_seed(7, 1, 0) != sub_seed(7, 1, 1));
  CHECK(sub_seed(7, 1, 3, 4) != sub_seed(7, 1, 4, 3));
  CHECK(sub_seed(8, 1) != sub_seed(7, 1));
}

TEST_CASE("uniform01 stays in [0,1) and uniform01_open in (0,1)") {
  rng64 g = make_rng(123);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double u = uniform01(g);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    double v = uniform01_open(g);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  CHECK(lo < 0.01);  // the stream actually covers the range
  CHECK(hi > 0.99);
}

TEST_CASE("normal cdf/quantile are mutual inverses") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (double p = 0.0005; p < 1.0; p += 0.013) {
    double x = norm_quantile(p);
    CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-12));
  }
  for (double x = -5.0; x <= 5.0; x += 0.37) {
    CHECK(norm_quantile(norm_cdf(x)) == doctest::Approx(x).epsilon(1e-10));
  }
}

TEST_CASE("norm_pdf matches the density formula") {
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(norm_pdf(1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-14));
}

TEST_CASE("regularized incomplete gamma: known values and inversion") {
  // For shape 1 the CDF is 1 - exp(-x).
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0})
    CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
  // Chi-square with 2k dof: P(k, x/2); median of chi2_2 is 2 ln 2.
  CHECK(gamma_p(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-13));
  for (double a : {0.5, 1.0, 2.0, 5.0, 9.5}) {
    for (double u = 0.02; u < 1.0; u += 0.07) {
      double x = gamma_p_inv(a, u);
      CHECK(gamma_p(a, x) == doctest::Approx(u).epsilon(1e-9));
    }
  }
}

TEST_CASE("draw_gamma matches the target mean and variance") {
  rng64 g = make_rng(99);
  const double a = 2.0, b = 3.0;
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    double x = draw_gamma(g, a, b);
    CHECK(x > 0.0);
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(a / b).epsilon(0.02));
  CHECK(var == doctest::Approx(a / (b * b)).epsilon(0.05));
}

TEST_CASE("draw_normal matches moments and symmetry") {
  rng64 g = make_rng(1234);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    double z = draw_normal(g);
    sum += z;
    sumsq += z * z;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
}

namespace {
// Closed-form CDF of the t distribution with 3 degrees of freedom.
double t3_cdf(double x) {
  const double s = x / std::sqrt(3.0);
  return 0.5 + (s / (1.0 + s * s) + std::atan(s)) / 3.141592653589793;
}
}  // namespace

TEST_CASE("draw_student_t matches the known 3-dof distribution") {
  rng64 g = make_rng(777);
  const int n = 200000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = draw_student_t(g, 3.0);
  for (double q : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    int below = 0;
    for (double x : xs) below += x < q;
    CHECK(std::fabs(static_cast<double>(below) / n - t3_cdf(q)) < 0.005);
  }
}

TEST_CASE("student_t_pdf integrates consistently with the 3-dof cdf") {
  // Trapezoid over [-8, 8] compared against the closed form.
  const double nu = 3.0;
  double acc = 0.0;
  const int steps = 16000;
  const double a = -8.0, b = 8.0, dx = (b - a) / steps;
  for (int i = 0; i <= steps; ++i) {
    double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    acc += w * student_t_pdf(a + i * dx, nu);
  }
  CHECK(acc * dx == doctest::Approx(t3_cdf(8.0) - t3_cdf(-8.0)).epsilon(1e-6));
}
