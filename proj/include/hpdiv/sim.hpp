#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hpdiv/estimator.hpp"

namespace hpdiv {

struct ExperimentConfig {
  DensityModel f0, f1;
  double p = 0.5;                     // label proportion used by the oracle
  std::vector<std::size_t> n_grid;    // per-class sizes, strictly increasing
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double eta = 1.0;                   // smoothness for the theory overlay
  OracleConfig oracle;
  // When set, used as the exact ground truth instead of running the
  // integration oracle (e.g. 0 for f0 == f1, or a frozen high-sample value).
  std::optional<double> known_truth;

  void validate() const;
};

struct ExperimentRow {
  std::size_t n_per_class = 0;
  double mse = 0, mse_se = 0;
  double bias = 0, bias_se = 0;
  double variance = 0, variance_se = 0;
  double theory_mse = 0;      // bias_rate(2N)^2 + 1/(2N), constants 1
  double oracle_truth = 0;
  double oracle_se = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string version;
  std::vector<ExperimentRow> rows;
  bool partial = false;  // oracle failed; rows empty or incomplete
};

struct ComparisonReport {
  std::vector<std::string> labels;        // one per distribution
  std::vector<ExperimentReport> reports;  // same order
};

// Seeded draws from a density model, one row per point.
PointCloud sample(const DensityModel& model, std::size_t count,
                  std::uint64_t seed);

// For each N in the grid, runs `trials` independent repetitions (m = n = N),
// accumulates squared error of d_hat against the mixture-sampled ground
// truth, and attaches the closed-form rate overlay. Per-trial sub-seeds make
// the report a pure function of the config, whatever the thread count.
// threads = 0 defers to HPDIV_THREADS / hardware.
ExperimentReport run_mse_experiment(const ExperimentConfig& config,
                                    std::size_t threads = 0);

// Null-calibration sweep: every config must have f0 == f1 (truth exactly 0).
// Each distribution runs under a sub-seed derived from its position so the
// curves are independent yet reproducible.
ComparisonReport run_distribution_comparison(
    const std::vector<ExperimentConfig>& configs, std::size_t threads = 0);

std::string density_label(const DensityModel& model);
bool same_density(const DensityModel& a, const DensityModel& b);

struct StructureCheckRow {
  std::size_t instance = 0;
  std::uint64_t instance_seed = 0;  // replaying this seed reproduces the row
  std::size_t d = 0, n_total = 0;
  std::string check;
  double lhs = 0, rhs = 0;
  double margin = 0;  // rhs - lhs; negative means a violated inequality
};

struct StructureReport {
  std::vector<StructureCheckRow> rows;
  std::size_t violations = 0;
};

// Deterministic structural inequalities of the pooled-sample MST, checked on
// seeded Gaussian instances (classes N(0,I) vs N(e1,I), m+n = size):
//   subadditivity_l2/l3: R <= sum of per-cell R + 2 * boundary-crossing edges
//   dual_lower:          R <= R* (corner-augmented statistic, one cell)
// and, in the plane where the MST degree constant 6 is exact:
//   dual_upper:          R* <= R + 6 * 2^d
//   one_point_move:      |R change from relocating one point| <= 4 * 6
// Dimension and size cycle through the given lists by instance index.
StructureReport verify_structure(const std::vector<std::size_t>& dims,
                                 const std::vector<std::size_t>& sizes,
                                 std::size_t trials, std::uint64_t seed,
                                 std::size_t threads = 0);

std::string structure_to_csv(const StructureReport& report);

// CSV with one leading '#' metadata comment (version + config echo), a
// header row, then one row per N. 17 significant digits throughout.
std::string report_to_csv(const ExperimentReport& report);
std::string comparison_to_csv(const ComparisonReport& report);

}  // namespace hpdiv
