#include "hpdiv/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "hpdiv/parallel.hpp"

namespace hpdiv {

DensityModel DensityModel::gaussian_model(std::vector<double> mean_in) {
  DensityModel m;
  m.kind = DensityKind::gaussian;
  m.dim = mean_in.size();
  m.mean = std::move(mean_in);
  m.validate();
  return m;
}

DensityModel DensityModel::gamma_copula_model(std::size_t dim, double alpha,
                                              double beta, double rho) {
  DensityModel m;
  m.kind = DensityKind::gamma_copula;
  m.dim = dim;
  m.alpha = alpha;
  m.beta = beta;
  m.rho = rho;
  m.validate();
  return m;
}

DensityModel DensityModel::student_t_model(std::size_t dim, double nu) {
  DensityModel m;
  m.kind = DensityKind::student_t;
  m.dim = dim;
  m.nu = nu;
  m.validate();
  return m;
}

void DensityModel::validate() const {
  if (dim == 0) throw std::invalid_argument("DensityModel: dim must be >= 1");
  switch (kind) {
    case DensityKind::gaussian:
      if (mean.size() != dim)
        throw std::invalid_argument("DensityModel: mean length != dim");
      for (double v : mean)
        if (!std::isfinite(v))
          throw std::invalid_argument("DensityModel: non-finite mean");
      break;
    case DensityKind::gamma_copula:
      if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("DensityModel: gamma shape/rate must be > 0");
      if (!(rho >= 0.0) || !(rho < 1.0))
        throw std::invalid_argument("DensityModel: copula rho must be in [0,1)");
      break;
    case DensityKind::student_t:
      if (!(nu > 0.0))
        throw std::invalid_argument("DensityModel: t degrees of freedom must be > 0");
      break;
  }
}

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log_pdf_gaussian(const DensityModel& m, const double* x) {
  double q = 0.0;
  for (std::size_t k = 0; k < m.dim; ++k) {
    double d = x[k] - m.mean[k];
    q += d * d;
  }
  return -0.5 * (q + static_cast<double>(m.dim) * kLog2Pi);
}

double log_pdf_gamma_copula(const DensityModel& m, const double* x) {
  const double d = static_cast<double>(m.dim);
  double lp = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < m.dim; ++k) {
    if (!(x[k] > 0.0)) return -std::numeric_limits<double>::infinity();
    lp += m.alpha * std::log(m.beta) + (m.alpha - 1.0) * std::log(x[k]) -
          m.beta * x[k] - std::lgamma(m.alpha);
    double u = gamma_p(m.alpha, m.beta * x[k]);
    u = std::min(std::max(u, 1e-300), 1.0 - 1e-16);
    double z = norm_quantile(u);
    s1 += z;
    s2 += z * z;
  }
  if (m.dim == 1 || m.rho == 0.0) return lp;
  // Equicorrelation matrix: det = (1-rho)^(d-1) (1+(d-1)rho) and the
  // quadratic form has the closed form below, so no linear algebra needed.
  const double r = m.rho;
  double det = (d - 1.0) * std::log1p(-r) + std::log1p((d - 1.0) * r);
  double quad = s2 / (1.0 - r) - r * s1 * s1 / ((1.0 - r) * (1.0 + (d - 1.0) * r));
  return lp - 0.5 * det - 0.5 * (quad - s2);
}

double log_pdf_student_t(const DensityModel& m, const double* x) {
  const double d = static_cast<double>(m.dim);
  double q = 0.0;
  for (std::size_t k = 0; k < m.dim; ++k) q += x[k] * x[k];
  return std::lgamma(0.5 * (m.nu + d)) - std::lgamma(0.5 * m.nu) -
         0.5 * d * std::log(m.nu * 3.141592653589793238462643) -
         0.5 * (m.nu + d) * std::log1p(q / m.nu);
}

}  // namespace

double DensityModel::pdf(const double* x) const {
  double lp;
  switch (kind) {
    case DensityKind::gaussian: lp = log_pdf_gaussian(*this, x); break;
    case DensityKind::gamma_copula: lp = log_pdf_gamma_copula(*this, x); break;
    default: lp = log_pdf_student_t(*this, x); break;
  }
  return std::exp(lp);
}

void DensityModel::sample_into(rng64& g, double* out) const {
  switch (kind) {
    case DensityKind::gaussian:
      for (std::size_t k = 0; k < dim; ++k) out[k] = mean[k] + draw_normal(g);
      return;
    case DensityKind::gamma_copula: {
      const double z0 = draw_normal(g);  // shared copula factor
      const double sr = std::sqrt(rho), sc = std::sqrt(1.0 - rho);
      for (std::size_t k = 0; k < dim; ++k) {
        double z = sr * z0 + sc * draw_normal(g);
        double u = norm_cdf(z);
        u = std::min(std::max(u, 1e-300), 1.0 - 1e-16);
        out[k] = gamma_p_inv(alpha, u) / beta;
      }
      return;
    }
    case DensityKind::student_t: {
      for (std::size_t k = 0; k < dim; ++k) out[k] = draw_normal(g);
      double chi2 = 2.0 * gamma_p_inv(0.5 * nu, uniform01_open(g));
      double scale = std::sqrt(chi2 / nu);
      for (std::size_t k = 0; k < dim; ++k) out[k] /= scale;
      return;
    }
  }
}

DivergenceEstimate estimate_divergence(const LabeledPointSet& sample) {
  FrResult fr = fr_statistic(sample);
  DivergenceEstimate est;
  est.r_statistic = fr.r_statistic;
  est.m = fr.m;
  est.n = fr.n;
  const double m = static_cast<double>(fr.m), n = static_cast<double>(fr.n);
  est.p_hat = m / (m + n);
  est.q_hat = n / (m + n);
  est.a_hat = static_cast<double>(fr.r_statistic) * (m + n) / (2.0 * m * n);
  est.d_hat_raw = 1.0 - est.a_hat;
  est.d_hat = std::min(1.0, std::max(0.0, est.d_hat_raw));
  return est;
}

namespace {

enum class OracleKind { divergence, bayes };

OracleResult run_oracle(const DensityModel& f0, const DensityModel& f1,
                        double p, const OracleConfig& cfg, OracleKind which) {
  f0.validate();
  f1.validate();
  if (f0.dim != f1.dim)
    throw std::invalid_argument("oracle: density dimensions differ");
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("oracle: p must lie in (0,1)");
  if (cfg.samples < 2)
    throw std::invalid_argument("oracle: needs at least 2 samples");
  const double q = 1.0 - p;

  rng64 g = make_rng(sub_seed(cfg.seed,
                              which == OracleKind::divergence ? 0x4850 : 0x4245));
  std::vector<double> x(f0.dim);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    if (uniform01(g) < p)
      f0.sample_into(g, x.data());
    else
      f1.sample_into(g, x.data());
    const double a = p * f0.pdf(x.data());
    const double b = q * f1.pdf(x.data());
    const double den = a + b;
    double term;
    if (which == OracleKind::divergence) {
      // w = (p f0 - q f1)/(p f0 + q f1); estimator is affine in E[w^2]
      double w = (den > 0.0) ? (a - b) / den : 1.0;
      term = w * w;
    } else {
      term = (den > 0.0) ? std::min(a, b) / den : 0.0;
    }
    sum += term;
    sumsq += term * term;
  }
  const double s_count = static_cast<double>(cfg.samples);
  const double mean = sum / s_count;
  double var = (sumsq - s_count * mean * mean) / (s_count - 1.0);
  var = std::max(var, 0.0);
  const double se_mean = std::sqrt(var / s_count);

  OracleResult out;
  if (which == OracleKind::divergence) {
    const double scale = 1.0 / (4.0 * p * q);
    out.value = scale * (mean - (p - q) * (p - q));
    out.standard_error = scale * se_mean;
  } else {
    out.value = mean;
    out.standard_error = se_mean;
  }
  out.se_warning = out.standard_error > cfg.se_tolerance;
  return out;
}

bool all_rows_equal(const PointCloud& cloud) {
  for (std::size_t i = 1; i < cloud.size(); ++i)
    if (std::memcmp(cloud.point(i), cloud.point(0),
                    cloud.dim * sizeof(double)) != 0)
      return false;
  return true;
}

std::size_t pick_index(rng64& g, std::size_t count) {
  auto i = static_cast<std::size_t>(uniform01(g) * static_cast<double>(count));
  return std::min(i, count - 1);
}

PointCloud resample_cloud(const PointCloud& src, rng64& g) {
  PointCloud out;
  out.dim = src.dim;
  out.coords.resize(src.coords.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::size_t j = pick_index(g, src.size());
    std::copy(src.point(j), src.point(j) + src.dim, out.point(i));
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - std::floor(h);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

OracleResult true_hp_divergence(const DensityModel& f0, const DensityModel& f1,
                                double p, const OracleConfig& cfg) {
  return run_oracle(f0, f1, p, cfg, OracleKind::divergence);
}

OracleResult true_bayes_error(const DensityModel& f0, const DensityModel& f1,
                              double p, const OracleConfig& cfg) {
  return run_oracle(f0, f1, p, cfg, OracleKind::bayes);
}

BootstrapInterval bootstrap_interval(const LabeledPointSet& sample,
                                     std::size_t trials, double level,
                                     std::uint64_t seed) {
  sample.validate();
  if (trials < 100)
    throw std::invalid_argument("bootstrap_interval: trials must be >= 100");
  if (!(level > 0.0) || !(level < 1.0))
    throw std::invalid_argument("bootstrap_interval: level must lie in (0,1)");

  // Collapse detection only makes sense for a class that has two distinct
  // rows to begin with.
  const bool watch_x = sample.m() >= 2 && !all_rows_equal(sample.x_points);
  const bool watch_y = sample.n() >= 2 && !all_rows_equal(sample.y_points);
  constexpr std::size_t kMaxRetries = 100;

  std::vector<double> stats(trials);
  parallel_for(trials, [&](std::size_t t) {
    LabeledPointSet boot;
    std::size_t attempt = 0;
    for (;; ++attempt) {
      if (attempt > kMaxRetries)
        throw std::runtime_error(
            "bootstrap_interval: resample kept collapsing a class onto one point");
      rng64 g = make_rng(sub_seed(seed, 0xB007, t, attempt));
      boot.x_points = resample_cloud(sample.x_points, g);
      boot.y_points = resample_cloud(sample.y_points, g);
      if (watch_x && all_rows_equal(boot.x_points)) continue;
      if (watch_y && all_rows_equal(boot.y_points)) continue;
      break;
    }
    stats[t] = estimate_divergence(boot).d_hat;
  });

  std::sort(stats.begin(), stats.end());
  const double alpha = 1.0 - level;
  BootstrapInterval out;
  out.low = quantile_sorted(stats, 0.5 * alpha);
  out.high = quantile_sorted(stats, 1.0 - 0.5 * alpha);
  out.point = estimate_divergence(sample).d_hat;
  return out;
}

}  // namespace hpdiv
