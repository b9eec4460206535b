#include "hpdiv/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hpdiv/parallel.hpp"
#include "hpdiv/theory.hpp"
#include "hpdiv/version.hpp"

namespace hpdiv {

void ExperimentConfig::validate() const {
  f0.validate();
  f1.validate();
  if (f0.dim != f1.dim)
    throw std::invalid_argument("ExperimentConfig: density dims differ");
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("ExperimentConfig: p must lie in (0,1)");
  if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials >= 1");
  if (n_grid.empty())
    throw std::invalid_argument("ExperimentConfig: empty N grid");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    if (n_grid[i] >= n_grid[i + 1])
      throw std::invalid_argument("ExperimentConfig: N grid must increase");
  if (n_grid.front() < 1)
    throw std::invalid_argument("ExperimentConfig: N must be >= 1");
  if (!(eta > 0.0) || !(eta <= 1.0))
    throw std::invalid_argument("ExperimentConfig: eta must lie in (0,1]");
}

PointCloud sample(const DensityModel& model, std::size_t count,
                  std::uint64_t seed) {
  model.validate();
  if (count < 1) throw std::invalid_argument("sample: count >= 1");
  rng64 g = make_rng(seed);
  PointCloud out;
  out.dim = model.dim;
  out.coords.resize(count * model.dim);
  for (std::size_t i = 0; i < count; ++i) model.sample_into(g, out.point(i));
  return out;
}

std::string density_label(const DensityModel& model) {
  switch (model.kind) {
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::gamma_copula: return "gamma_copula";
    default: return "student_t";
  }
}

bool same_density(const DensityModel& a, const DensityModel& b) {
  if (a.kind != b.kind || a.dim != b.dim) return false;
  switch (a.kind) {
    case DensityKind::gaussian: return a.mean == b.mean;
    case DensityKind::gamma_copula:
      return a.alpha == b.alpha && a.beta == b.beta && a.rho == b.rho;
    default: return a.nu == b.nu;
  }
}

namespace {

constexpr std::uint64_t kTrialTag = 0x5e0a;

double sample_se(const std::vector<double>& values, double mean) {
  const std::size_t t = values.size();
  if (t < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (static_cast<double>(t) - 1.0) /
                   static_cast<double>(t));
}

void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_config_comment(std::string& out, const ExperimentReport& r) {
  out += "# hpdiv ";
  out += r.version;
  out += " f0=";
  out += density_label(r.config.f0);
  out += " f1=";
  out += density_label(r.config.f1);
  out += " dim=";
  out += std::to_string(r.config.f0.dim);
  out += " p=";
  append_g17(out, r.config.p);
  out += " trials=";
  out += std::to_string(r.config.trials);
  out += " seed=";
  out += std::to_string(r.config.seed);
  out += " eta=";
  append_g17(out, r.config.eta);
  if (r.config.known_truth.has_value()) {
    out += " truth=";
    append_g17(out, *r.config.known_truth);
  }
  if (r.partial) out += " partial=1";
  out += "\n";
}

void append_row(std::string& out, const ExperimentRow& row,
                const char* prefix) {
  out += prefix;
  out += std::to_string(row.n_per_class);
  const double cols[] = {row.mse,      row.mse_se,      row.bias,
                         row.bias_se,  row.variance,    row.variance_se,
                         row.theory_mse, row.oracle_truth, row.oracle_se};
  for (double c : cols) {
    out += ',';
    append_g17(out, c);
  }
  out += "\n";
}

constexpr const char* kRowHeader =
    "n_per_class,mse,mse_se,bias,bias_se,variance,variance_se,"
    "theory_mse,oracle_truth,oracle_se";

ExperimentReport run_experiment_inner(const ExperimentConfig& config,
                                      std::size_t threads) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.version = kVersion;

  double truth = 0.0, truth_se = 0.0;
  if (config.known_truth.has_value()) {
    truth = *config.known_truth;
  } else {
    OracleConfig ocfg = config.oracle;
    ocfg.seed = sub_seed(config.seed, 0x0bac1e);
    try {
      OracleResult o = true_hp_divergence(config.f0, config.f1, config.p, ocfg);
      truth = o.value;
      truth_se = o.standard_error;
    } catch (const std::exception&) {
      report.partial = true;
      return report;
    }
  }

  const std::size_t grid = config.n_grid.size();
  const std::size_t trials = config.trials;
  std::vector<double> d_hats(grid * trials);
  parallel_for(grid * trials, [&](std::size_t task) {
    const std::size_t gi = task / trials;
    const std::size_t t = task % trials;
    const std::size_t n = config.n_grid[gi];
    rng64 g = make_rng(sub_seed(config.seed, kTrialTag, gi, t));
    LabeledPointSet s;
    s.x_points.dim = s.y_points.dim = config.f0.dim;
    s.x_points.coords.resize(n * config.f0.dim);
    s.y_points.coords.resize(n * config.f1.dim);
    for (std::size_t i = 0; i < n; ++i)
      config.f0.sample_into(g, s.x_points.point(i));
    for (std::size_t i = 0; i < n; ++i)
      config.f1.sample_into(g, s.y_points.point(i));
    d_hats[task] = estimate_divergence(s).d_hat;
  }, threads);

  report.rows.resize(grid);
  for (std::size_t gi = 0; gi < grid; ++gi) {
    ExperimentRow& row = report.rows[gi];
    row.n_per_class = config.n_grid[gi];
    std::vector<double> vals(d_hats.begin() +
                                 static_cast<std::ptrdiff_t>(gi * trials),
                             d_hats.begin() +
                                 static_cast<std::ptrdiff_t>((gi + 1) * trials));
    const double tcount = static_cast<double>(trials);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= tcount;

    std::vector<double> sq_err(trials);
    double mse = 0.0, var = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double e = vals[t] - truth;
      sq_err[t] = e * e;
      mse += e * e;
      var += (vals[t] - mean) * (vals[t] - mean);
    }
    mse /= tcount;
    var /= tcount;  // population form keeps mse = bias^2 + var an identity

    row.mse = mse;
    row.mse_se = sample_se(sq_err, mse);
    row.bias = mean - truth;
    row.bias_se = sample_se(vals, mean);
    row.variance = var;
    std::vector<double> centered_sq(trials);
    for (std::size_t t = 0; t < trials; ++t)
      centered_sq[t] = (vals[t] - mean) * (vals[t] - mean);
    row.variance_se = sample_se(centered_sq, var);

    const double big_n = 2.0 * static_cast<double>(row.n_per_class);
    const double b = bias_rate(big_n, config.f0.dim, config.eta);
    row.theory_mse = b * b + 1.0 / big_n;
    row.oracle_truth = truth;
    row.oracle_se = truth_se;
  }
  return report;
}

}  // namespace

ExperimentReport run_mse_experiment(const ExperimentConfig& config,
                                    std::size_t threads) {
  return run_experiment_inner(config, threads);
}

ComparisonReport run_distribution_comparison(
    const std::vector<ExperimentConfig>& configs, std::size_t threads) {
  if (configs.empty())
    throw std::invalid_argument("run_distribution_comparison: no configs");
  ComparisonReport out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    ExperimentConfig cfg = configs[i];
    if (!same_density(cfg.f0, cfg.f1))
      throw std::invalid_argument(
          "run_distribution_comparison: f0 and f1 must match (null setting)");
    cfg.seed = sub_seed(cfg.seed, 0xd157, i);
    cfg.known_truth = 0.0;  // matching densities have divergence exactly 0
    out.labels.push_back(density_label(cfg.f0));
    out.reports.push_back(run_experiment_inner(cfg, threads));
  }
  return out;
}

StructureReport verify_structure(const std::vector<std::size_t>& dims,
                                 const std::vector<std::size_t>& sizes,
                                 std::size_t trials, std::uint64_t seed,
                                 std::size_t threads) {
  if (dims.empty() || sizes.empty())
    throw std::invalid_argument("verify_structure: empty dims or sizes");
  if (trials < 1) throw std::invalid_argument("verify_structure: trials >= 1");
  for (std::size_t d : dims)
    if (d < 2) throw std::invalid_argument("verify_structure: dims must be >= 2");
  for (std::size_t s : sizes)
    if (s < 2) throw std::invalid_argument("verify_structure: sizes must be >= 2");

  std::vector<std::vector<StructureCheckRow>> per_instance(trials);
  parallel_for(trials, [&](std::size_t i) {
    const std::size_t d = dims[i % dims.size()];
    const std::size_t n_total = sizes[i % sizes.size()];
    const std::uint64_t iseed = sub_seed(seed, 0x57ab, i);
    rng64 g = make_rng(iseed);

    const std::size_t m = std::max<std::size_t>(1, n_total / 2);
    const std::size_t n = std::max<std::size_t>(1, n_total - m);
    LabeledPointSet s;
    s.x_points.dim = s.y_points.dim = d;
    s.x_points.coords.resize(m * d);
    s.y_points.coords.resize(n * d);
    for (double& v : s.x_points.coords) v = draw_normal(g);
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      double* p = s.y_points.point(i2);
      for (std::size_t k = 0; k < d; ++k) p[k] = draw_normal(g) + (k == 0);
    }

    const auto r = static_cast<double>(fr_statistic(s).r_statistic);
    auto& rows = per_instance[i];
    auto push = [&](const char* check, double lhs, double rhs) {
      rows.push_back({i, iseed, d, m + n, check, lhs, rhs, rhs - lhs});
    };

    for (std::size_t l : {std::size_t{2}, std::size_t{3}}) {
      PartitionReport pr = partition_fr(s, l);
      push(l == 2 ? "subadditivity_l2" : "subadditivity_l3", r,
           static_cast<double>(pr.sum_per_cell_r()) +
               2.0 * static_cast<double>(pr.crossing_edge_count));
    }

    DualFrResult dual = dual_fr_statistic(s, 1);
    const auto r_star = static_cast<double>(dual.total_dual_r());
    push("dual_lower", r, r_star);
    if (d == 2) {
      push("dual_upper", r_star, r + 6.0 * 4.0);
      std::size_t idx = std::min(
          static_cast<std::size_t>(uniform01(g) * static_cast<double>(m + n)),
          m + n - 1);
      std::vector<double> pos(d);
      for (double& v : pos) v = draw_normal(g);
      push("one_point_move",
           static_cast<double>(perturb_one_point_delta(s, idx, pos)), 24.0);
    }
  }, threads);

  StructureReport out;
  for (auto& rows : per_instance)
    for (auto& row : rows) {
      if (row.margin < 0.0) ++out.violations;
      out.rows.push_back(std::move(row));
    }
  return out;
}

std::string structure_to_csv(const StructureReport& report) {
  std::string out = "# hpdiv ";
  out += kVersion;
  out += " violations=";
  out += std::to_string(report.violations);
  out += "\ninstance,seed,d,n_total,check,lhs,rhs,margin\n";
  for (const StructureCheckRow& row : report.rows) {
    out += std::to_string(row.instance);
    out += ',';
    out += std::to_string(row.instance_seed);
    out += ',';
    out += std::to_string(row.d);
    out += ',';
    out += std::to_string(row.n_total);
    out += ',';
    out += row.check;
    const double cols[] = {row.lhs, row.rhs, row.margin};
    for (double c : cols) {
      out += ',';
      append_g17(out, c);
    }
    out += "\n";
  }
  return out;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::string out;
  append_config_comment(out, report);
  out += kRowHeader;
  out += "\n";
  for (const ExperimentRow& row : report.rows) append_row(out, row, "");
  return out;
}

std::string comparison_to_csv(const ComparisonReport& report) {
  std::string out;
  out += "# hpdiv ";
  out += kVersion;
  out += " distributions=";
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    if (i) out += '+';
    out += report.labels[i];
  }
  out += "\n";
  out += "dist,";
  out += kRowHeader;
  out += "\n";
  for (std::size_t i = 0; i < report.reports.size(); ++i)
    for (const ExperimentRow& row : report.reports[i].rows)
      append_row(out, row, (report.labels[i] + ",").c_str());
  return out;
}

}  // namespace hpdiv
