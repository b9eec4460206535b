#include "hpdiv/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hpdiv {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t tag,
                       std::uint64_t i, std::uint64_t j) {
  std::uint64_t s = master;
  (void)splitmix64(s);
  s ^= (tag + 1) * 0xA24BAED4963EE407ull;
  (void)splitmix64(s);
  s ^= (i + 1) * 0x9FB21C651E98DF25ull;
  (void)splitmix64(s);
  s ^= (j + 1) * 0xD6E8FEB86659FD93ull;
  return splitmix64(s);
}

double norm_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("norm_quantile: p must be in (0,1)");

  // Acklam's piecewise rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  // One Halley refinement against the exact CDF.
  double e = norm_cdf(x) - p;
  double u = e / norm_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

namespace {

// Series expansion of P(a,x), valid and fast for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) = 1 - P(a,x), Lentz's method, for x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delt = d * c;
    h *= delt;
    if (std::fabs(delt - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0)
    throw std::domain_error("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_p_inv(double a, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("gamma_p_inv: u must be in (0,1)");
  if (a == 1.0) return -std::log1p(-u);

  // Wilson-Hilferty starting point, then safeguarded Newton on P(a,x)-u.
  double z = norm_quantile(u);
  double t = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a));
  double x = (t > 0.0) ? a * t * t * t : std::exp((std::log(u) +
                                                   std::lgamma(a + 1.0)) /
                                                  a);
  if (!(x > 0.0)) x = 1e-8;
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    double f = gamma_p(a, x) - u;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    double logpdf = (a - 1.0) * std::log(x) - x - std::lgamma(a);
    double step = f / std::exp(logpdf);
    double xn = x - step;
    if (!(xn > lo && (xn < hi))) xn = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
    if (std::fabs(xn - x) <= 1e-14 * (std::fabs(x) + 1e-300)) {
      x = xn;
      break;
    }
    x = xn;
  }
  return x;
}

double student_t_pdf(double x, double nu) {
  if (nu <= 0.0) throw std::domain_error("student_t_pdf: nu must be > 0");
  double lognorm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                   0.5 * std::log(nu * 3.14159265358979323846);
  return std::exp(lognorm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double draw_gamma(rng64& g, double a, double b) {
  double u = uniform01_open(g);
  double x = (a == 1.0) ? -std::log1p(-u) : gamma_p_inv(a, u);
  return x / b;
}

double draw_student_t(rng64& g, double nu) {
  double z = draw_normal(g);
  double chi2 = 2.0 * gamma_p_inv(0.5 * nu, uniform01_open(g));
  return z / std::sqrt(chi2 / nu);
}

}  // namespace hpdiv
