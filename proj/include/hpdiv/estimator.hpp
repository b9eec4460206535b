#pragma once

#include <cstdint>
#include <vector>

#include "hpdiv/fr.hpp"
#include "hpdiv/random.hpp"

namespace hpdiv {

struct DivergenceEstimate {
  std::size_t r_statistic = 0;
  std::size_t m = 0, n = 0;
  double a_hat = 0.0;      // R * (m+n) / (2mn)
  double d_hat_raw = 0.0;  // 1 - a_hat, may dip below 0 at finite N
  double d_hat = 0.0;      // clamped to [0, 1]
  double p_hat = 0.0, q_hat = 0.0;
};

enum class DensityKind { gaussian, gamma_copula, student_t };

// The three synthetic densities used throughout. gaussian is a shifted
// standard normal (identity covariance). gamma_copula couples Gamma(alpha,
// rate beta) marginals through an equicorrelated Gaussian copula. student_t
// is the elliptical multivariate t (shared chi-square mixing variable), which
// reduces to the usual univariate t at dim 1.
struct DensityModel {
  DensityKind kind = DensityKind::gaussian;
  std::size_t dim = 1;
  std::vector<double> mean;                       // gaussian location
  double alpha = 1.0, beta = 1.0, rho = 0.5;      // gamma marginals + copula
  double nu = 3.0;                                // t degrees of freedom

  static DensityModel gaussian_model(std::vector<double> mean_in);
  static DensityModel gamma_copula_model(std::size_t dim, double alpha = 1.0,
                                         double beta = 1.0, double rho = 0.5);
  static DensityModel student_t_model(std::size_t dim, double nu = 3.0);

  double pdf(const double* x) const;
  void sample_into(rng64& g, double* out) const;  // writes dim coordinates
  void validate() const;
};

struct OracleConfig {
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
  double se_tolerance = 2e-3;  // standard errors above this raise se_warning
};

struct OracleResult {
  double value = 0.0;
  double standard_error = 0.0;
  bool se_warning = false;
};

struct BootstrapInterval {
  double low = 0.0, high = 0.0;
  double point = 0.0;
};

// R -> divergence transform: a_hat = R(m+n)/(2mn), d_hat_raw = 1 - a_hat.
DivergenceEstimate estimate_divergence(const LabeledPointSet& sample);

// Ground-truth divergence between two densities by importance sampling from
// the mixture p*f0 + q*f1. Deterministic for a fixed config.
OracleResult true_hp_divergence(const DensityModel& f0, const DensityModel& f1,
                                double p, const OracleConfig& cfg);

// Ground-truth Bayes error: integral of min(p*f0, q*f1), same sampler.
OracleResult true_bayes_error(const DensityModel& f0, const DensityModel& f1,
                              double p, const OracleConfig& cfg);

// Percentile interval for the divergence estimate: per-class resampling with
// replacement, trials >= 100. A resample where a class with at least two
// distinct rows collapses onto one point is retried a bounded number of
// times, then reported as an error.
BootstrapInterval bootstrap_interval(const LabeledPointSet& sample,
                                     std::size_t trials, double level,
                                     std::uint64_t seed);

}  // namespace hpdiv
