#pragma once

#include <cstdint>
#include <random>

// Seeded sampling utilities. Everything here is deliberately self-contained:
// simulation results must be bit-identical across runs and across worker
// thread counts, so all inverse CDFs and seed derivations are implemented
// locally instead of relying on std::distributions (whose output is
// implementation-defined).

namespace hpdiv {

// SplitMix64 step (Steele, Lea, Flood 2014). Used both as a tiny PRNG and as
// the mixing function for deriving independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Derive a per-task seed from a master seed and up to three indices
// (stream tag, outer index, inner index). Distinct inputs give independent
// streams; the derivation is pure, so the result does not depend on which
// thread asks for it.
std::uint64_t sub_seed(std::uint64_t master, std::uint64_t tag,
                       std::uint64_t i = 0, std::uint64_t j = 0);

using rng64 = std::mt19937_64;

inline rng64 make_rng(std::uint64_t seed) { return rng64(seed); }

// Uniform draw in [0,1) with 53 random bits.
inline double uniform01(rng64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform draw in (0,1), safe for inverse CDFs with a pole at 0.
inline double uniform01_open(rng64& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

// ---- special functions -----------------------------------------------------

double norm_pdf(double x);
double norm_cdf(double x);
// Inverse standard normal CDF; Acklam's rational approximation polished with
// one Halley step (relative error far below simulation noise).
double norm_quantile(double p);

// Regularized lower incomplete gamma P(a, x); series for x < a+1, continued
// fraction otherwise.
double gamma_p(double a, double x);
// Inverse of P(a, .) at probability u (Wilson-Hilferty start, Newton polish).
double gamma_p_inv(double a, double u);

// Standard Student t density with nu degrees of freedom.
double student_t_pdf(double x, double nu);

// ---- seeded draws ----------------------------------------------------------

inline double draw_normal(rng64& g) { return norm_quantile(uniform01_open(g)); }

// Gamma(shape a, rate b) via inverse CDF; shape 1 short-circuits to the
// exponential formula.
double draw_gamma(rng64& g, double a, double b);

// Standard Student t via z / sqrt(chi2_nu / nu) with an inverse-CDF chi^2.
double draw_student_t(rng64& g, double nu);

}  // namespace hpdiv
