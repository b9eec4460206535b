#pragma once

#include <cstddef>
#include <vector>

namespace hpdiv {

// Shared parameter bundle for the bound evaluators. Free constants that the
// source formulas leave unnamed default to 1 and stay configurable.
struct BoundParams {
  std::size_t m = 1, n = 1;
  std::size_t d = 2;
  double eta = 1.0;      // Holder smoothness in (0, 1]
  std::size_t h = 7;     // partition parameter
  double c_delta = 1.0;  // constant inside the cell-count term
  double c_d = 6.0;      // MST degree constant (exact for d=2)
  double t = 0.0;        // deviation threshold
  double delta = 0.05;   // failure probability

  double big_n() const { return static_cast<double>(m + n); }
  void validate() const;  // d >= 2, 0 < eta <= 1, h >= 2, constants > 0
};

struct EpsilonStarResult {
  double epsilon_star = 0.0;
  double lower_bound = 0.0;     // h^(d+1) N^(1/d) scaled by c_delta
  double objective_value = 0.0;
  bool at_boundary = false;
  bool convexity_warning = false;  // t sits above the rough convexity regime
};

struct VarianceLikeBound {
  double t = 0.0;             // deviation matching failure probability delta
  double epsilon_star = 0.0;  // fixed-point epsilon
  double c_prime_at_star = 0.0;
  bool vacuous = false;  // delta >= C'(eps*): the bound says nothing
  bool converged = false;
  std::size_t iterations = 0;
};

// Bias term N^(-eta^2/(d(eta+1))), constant 1.
double bias_rate(double big_n, std::size_t d, double eta);

// Variance term 32 c_d^2 q / (m+n) with q = n/(m+n).
double variance_bound(std::size_t m, std::size_t n, double c_d);

// bias^2-plus-variance rate grid: entries N^(-eta^2/(d(eta+1))) + 1/N,
// indexed [N index][d index].
std::vector<std::vector<double>> mse_rate_surface(
    const std::vector<double>& n_grid, const std::vector<std::size_t>& d_grid,
    double eta);

// Cell-count scale a_h = c_delta h^d (m+n)^(1/d).
double partition_scale(std::size_t m, std::size_t n, std::size_t d,
                       std::size_t h, double c_delta);

// Leading constant 8 / (1 - 0.5 (1 - 2 a_h / eps)^(-2)). Defined for eps
// large enough that the denominator is positive; smaller eps is a domain
// error. main_text_form switches to the variant printed alongside the
// derivation, 8 (1 - N^(-2/d) eps^2)^(-2), kept only for comparison; the
// default form is the one that reproduces the reference table.
double c_prime(double eps, std::size_t m, std::size_t n, std::size_t d,
               std::size_t h = 7, double c_delta = 1.0,
               bool main_text_form = false);

// C'(eps) exp(-(t/(2 eps))^(d/(d-1)) / ((m+n) 8 4^(d/(d-1)))).
double concentration_bound_mean(double t, double eps, std::size_t m,
                                std::size_t n, std::size_t d,
                                std::size_t h = 7, double c_delta = 1.0);

// C'(eps) exp(-t^(d/(d-1)) / (8 (4 eps)^(d/(d-1)) (m+n))). Its exponent at
// argument t equals the mean-form exponent at 2t.
double concentration_bound_median(double t, double eps, std::size_t m,
                                  std::size_t n, std::size_t d,
                                  std::size_t h = 7, double c_delta = 1.0);

// Minimizes the mean-form bound over eps in [lower, 1e6 lower] where lower =
// c_delta h^(d+1) N^(1/d): coarse 200-point log-spaced scan to bracket the
// minimum, then golden-section to 1e-8 relative tolerance. at_boundary marks
// a minimizer pinned at the lower constraint.
EpsilonStarResult optimize_epsilon(double t, std::size_t m, std::size_t n,
                                   std::size_t d, std::size_t h = 7,
                                   double c_delta = 1.0);

// Deviation t with mean-form bound equal to delta at the self-consistent
// eps*: iterates t = 2 eps* ((m+n) Ctilde log(C'(eps*)/delta))^((d-1)/d)
// against optimize_epsilon until the relative change drops below 1e-6.
VarianceLikeBound variance_like_bound(double delta, std::size_t m,
                                      std::size_t n, std::size_t d,
                                      std::size_t h = 7, double c_delta = 1.0);

// Rough regime edge 7^(d-1) N^(1-1/d^2) above which the convexity argument
// behind the eps optimization stops being justified.
double convexity_threshold(double big_n, std::size_t d);

}  // namespace hpdiv
