// Command-line front end: estimation, simulation, bound evaluation, and
// structural checks, all emitting CSV with a metadata comment line.
// Exit codes: 0 success, 1 data error, 2 usage error, 3 invariant violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hpdiv/data.hpp"
#include "hpdiv/sim.hpp"
#include "hpdiv/theory.hpp"
#include "hpdiv/version.hpp"
#include "json.hpp"

namespace {

using namespace hpdiv;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s,
                                         const char* what) {
  std::vector<std::size_t> out;
  for (const std::string& tok : split(s, ',')) {
    if (tok.empty())
      throw std::invalid_argument(std::string(what) + ": empty entry in list");
    char* end = nullptr;
    unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size())
      throw std::invalid_argument(std::string(what) + ": bad integer '" + tok +
                                  "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ',')) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
      throw std::invalid_argument(std::string(what) + ": bad number '" + tok +
                                  "'");
    out.push_back(v);
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string meta_line(const std::string& cmd, const std::string& flags) {
  std::string out = "# hpdiv ";
  out += kVersion;
  out += ' ';
  out += cmd;
  if (!flags.empty()) {
    out += ' ';
    out += flags;
  }
  out += '\n';
  return out;
}

// Shared per-command plumbing.
struct Common {
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "csv";

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
    cmd->add_option("--output", output, "Write CSV here instead of stdout");
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv"}))
        ->capture_default_str();
  }
  std::string echo() const {
    return "--seed " + std::to_string(seed) + " --format " + format;
  }
};

// Dataset flags shared by estimate and feature-sweep.
struct DatasetFlags {
  std::string input, label_col = "label", classes, features;
  std::size_t max_rows = 0;
  std::string normalize = "none", delimiter = "auto", header = "auto";
  double jitter = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", input, "Labeled delimited file")->required();
    cmd->add_option("--label-col", label_col, "Label column name or index")
        ->capture_default_str();
    cmd->add_option("--classes", classes,
                    "Two label values 'a,b' mapped to the classes "
                    "(default: first two distinct)");
    cmd->add_option("--features", features,
                    "Feature columns, comma separated (default: all others)");
    cmd->add_option("--max-rows", max_rows,
                    "Per-class cap, seeded subsample (0 = keep all)")
        ->capture_default_str();
    cmd->add_option("--normalize", normalize, "Feature scaling")
        ->check(CLI::IsMember({"none", "unit-cube", "z-score"}))
        ->capture_default_str();
    cmd->add_option("--delimiter", delimiter, "Field separator")
        ->check(CLI::IsMember({"auto", "comma", "semicolon", "tab"}))
        ->capture_default_str();
    cmd->add_option("--header", header, "First row is a header")
        ->check(CLI::IsMember({"auto", "yes", "no"}))
        ->capture_default_str();
    cmd->add_option("--jitter", jitter,
                    "Uniform(-a,a) noise after normalization (0 = off)")
        ->capture_default_str();
  }

  DatasetSpec to_spec(std::uint64_t seed) const {
    DatasetSpec spec;
    spec.path = input;
    spec.label_column = label_col;
    if (!classes.empty()) {
      auto parts = split(classes, ',');
      if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
        throw std::invalid_argument("--classes needs exactly two labels 'a,b'");
      spec.class_x = parts[0];
      spec.class_y = parts[1];
    }
    if (!features.empty()) spec.feature_columns = split(features, ',');
    spec.max_rows_per_class = max_rows;
    spec.normalize = normalize == "unit-cube"  ? Normalize::unit_cube
                     : normalize == "z-score" ? Normalize::z_score
                                              : Normalize::none;
    spec.seed = seed;
    spec.jitter = jitter;
    if (delimiter == "comma") spec.delimiter = ',';
    if (delimiter == "semicolon") spec.delimiter = ';';
    if (delimiter == "tab") spec.delimiter = '\t';
    if (header != "auto") spec.has_header = (header == "yes");
    return spec;
  }

  std::string echo() const {
    std::string out = "--input " + input + " --label-col " + label_col;
    if (!classes.empty()) out += " --classes " + classes;
    if (!features.empty()) out += " --features " + features;
    out += " --max-rows " + std::to_string(max_rows) + " --normalize " +
           normalize + " --delimiter " + delimiter + " --header " + header +
           " --jitter " + g17(jitter);
    return out;
  }
};

// Distribution flags shared by simulate and compare-dists.
struct FamilyFlags {
  std::size_t dim = 2;
  double alpha = 1.0, beta = 1.0, rho = 0.5, nu = 3.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dim", dim, "Dimension")->capture_default_str();
    cmd->add_option("--alpha", alpha, "Gamma shape")->capture_default_str();
    cmd->add_option("--beta", beta, "Gamma rate")->capture_default_str();
    cmd->add_option("--rho", rho, "Copula correlation")->capture_default_str();
    cmd->add_option("--nu", nu, "t degrees of freedom")->capture_default_str();
  }

  DensityModel build(const std::string& dist, double shift) const {
    if (dist == "gaussian") {
      std::vector<double> mean(dim, 0.0);
      if (dim > 0) mean[0] = shift;
      return DensityModel::gaussian_model(std::move(mean));
    }
    if (dist == "gamma-copula")
      return DensityModel::gamma_copula_model(dim, alpha, beta, rho);
    return DensityModel::student_t_model(dim, nu);
  }

  std::string echo() const {
    return "--dim " + std::to_string(dim) + " --alpha " + g17(alpha) +
           " --beta " + g17(beta) + " --rho " + g17(rho) + " --nu " + g17(nu);
  }
};

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string key, value, extra;
    if (!(ls >> key)) continue;
    if (!(ls >> value) || (ls >> extra))
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key value'");
    out[key] = value;
  }
  return out;
}

const std::map<std::string, std::string> kConfigKeys = {
    {"dist", "--dist"},       {"dim", "--dim"},
    {"shift", "--shift"},     {"n_grid", "--n-grid"},
    {"trials", "--trials"},   {"seed", "--seed"},
    {"eta", "--eta"},         {"p", "--p"},
    {"oracle_samples", "--oracle-samples"},
    {"alpha", "--alpha"},     {"beta", "--beta"},
    {"rho", "--rho"},         {"nu", "--nu"}};

struct Table2Row {
  std::size_t d;
  std::size_t big_n;
  double t;
  double ref_eps;
  double ref_bound;
};

const Table2Row kTable2[] = {
    {2, 1000, 2e7, 1.1424e4, 0.3439},
    {4, 10000, 3e10, 1.7746e5, 0.0895},
    {5, 550, 1e10, 4.7236e5, 0.9929},
    {6, 10000, 2e12, 3.8727e6, 0.1637},
    {8, 1200, 12e12, 9.7899e7, 0.7176},
    {10, 3500, 2e15, 4.4718e9, 0.4795},
    {15, 100000000, 1e24, 1.1348e14, 0.9042},
};

int cmd_estimate(const Common& common, const DatasetFlags& data,
                 std::size_t bootstrap, double level) {
  LabeledPointSet sample = load_labeled_csv(data.to_spec(common.seed));
  DivergenceEstimate est = estimate_divergence(sample);

  std::string flags = data.echo() + " " + common.echo();
  if (bootstrap > 0)
    flags += " --bootstrap " + std::to_string(bootstrap) + " --level " +
             g17(level);
  std::string out = meta_line("estimate", flags);
  out += "m,n,r_statistic,a_hat,d_hat_raw,d_hat";
  if (bootstrap > 0) out += ",boot_low,boot_point,boot_high";
  out += "\n";
  out += std::to_string(est.m) + "," + std::to_string(est.n) + "," +
         std::to_string(est.r_statistic) + "," + g17(est.a_hat) + "," +
         g17(est.d_hat_raw) + "," + g17(est.d_hat);
  if (bootstrap > 0) {
    BootstrapInterval bi =
        bootstrap_interval(sample, bootstrap, level, common.seed);
    out += "," + g17(bi.low) + "," + g17(bi.point) + "," + g17(bi.high);
  }
  out += "\n";
  write_output(common.output, out);
  return 0;
}

int cmd_simulate(const Common& common, const FamilyFlags& family,
                 const std::string& dist, double shift,
                 const std::string& n_grid, std::size_t trials, double eta,
                 double p, std::size_t oracle_samples) {
  if (common.output.empty())
    throw std::invalid_argument(
        "simulate: --output is required (a metadata sidecar is written "
        "next to it)");
  ExperimentConfig cfg;
  cfg.f0 = family.build(dist, 0.0);
  cfg.f1 = dist == "gaussian" ? family.build(dist, shift)
                              : family.build(dist, 0.0);
  cfg.p = p;
  cfg.n_grid = parse_size_list(n_grid, "--n-grid");
  cfg.trials = trials;
  cfg.seed = common.seed;
  cfg.eta = eta;
  cfg.oracle.samples = oracle_samples;

  ExperimentReport report = run_mse_experiment(cfg);

  std::string flags = "--dist " + dist + " " + family.echo() + " --shift " +
                      g17(shift) + " --n-grid " + n_grid + " --trials " +
                      std::to_string(trials) + " --eta " + g17(eta) + " --p " +
                      g17(p) + " --oracle-samples " +
                      std::to_string(oracle_samples) + " " + common.echo();
  write_output(common.output, meta_line("simulate", flags) +
                                  report_to_csv(report));

  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["command"] = "simulate";
  meta["dist"] = dist;
  meta["dim"] = cfg.f0.dim;
  meta["shift"] = shift;
  meta["n_grid"] = cfg.n_grid;
  meta["trials"] = cfg.trials;
  meta["seed"] = cfg.seed;
  meta["eta"] = cfg.eta;
  meta["p"] = cfg.p;
  meta["oracle_samples"] = cfg.oracle.samples;
  meta["partial"] = report.partial;
  std::ofstream side(common.output + ".meta.json");
  if (!side)
    throw std::runtime_error("cannot write sidecar " + common.output +
                             ".meta.json");
  side << meta.dump(2) << "\n";

  if (report.partial) {
    std::cerr << "simulate: ground-truth oracle failed; partial report\n";
    return 1;
  }
  return 0;
}

int cmd_compare_dists(const Common& common, const FamilyFlags& family,
                      const std::string& n_grid, std::size_t trials,
                      double eta) {
  std::vector<ExperimentConfig> configs;
  for (const char* dist : {"gaussian", "gamma-copula", "student-t"}) {
    ExperimentConfig cfg;
    cfg.f0 = family.build(dist, 0.0);
    cfg.f1 = cfg.f0;
    cfg.n_grid = parse_size_list(n_grid, "--n-grid");
    cfg.trials = trials;
    cfg.seed = common.seed;
    cfg.eta = eta;
    configs.push_back(std::move(cfg));
  }
  ComparisonReport report = run_distribution_comparison(configs);
  std::string flags = family.echo() + " --n-grid " + n_grid + " --trials " +
                      std::to_string(trials) + " --eta " + g17(eta) + " " +
                      common.echo();
  write_output(common.output,
               meta_line("compare-dists", flags) + comparison_to_csv(report));
  return 0;
}

int cmd_bounds(const Common& common, std::size_t m, std::size_t n,
               std::size_t d, double eta, std::size_t h, double c_delta,
               double c_d, double t, double epsilon, double delta,
               bool main_text) {
  std::string flags = "--m " + std::to_string(m) + " --n " +
                      std::to_string(n) + " --d " + std::to_string(d) +
                      " --eta " + g17(eta) + " --part " + std::to_string(h) +
                      " --c-delta " + g17(c_delta) + " --c-d " + g17(c_d) +
                      " --t " + g17(t) + " --epsilon " + g17(epsilon) +
                      " --delta " + g17(delta) + " " + common.echo();
  std::string out = meta_line("bounds", flags);
  out += "quantity,value\n";
  auto row = [&](const char* name, double v) {
    out += name;
    out += ',';
    out += g17(v);
    out += '\n';
  };
  const double big_n = static_cast<double>(m + n);
  row("bias_rate", bias_rate(big_n, d, eta));
  row("variance_bound", variance_bound(m, n, c_d));
  row("mse_rate", bias_rate(big_n, d, eta) + 1.0 / big_n);
  row("convexity_threshold", convexity_threshold(big_n, d));
  row("partition_scale", partition_scale(m, n, d, h, c_delta));

  double eps_used = epsilon;
  if (t > 0.0) {
    EpsilonStarResult opt = optimize_epsilon(t, m, n, d, h, c_delta);
    row("epsilon_star", opt.epsilon_star);
    row("epsilon_lower_bound", opt.lower_bound);
    row("at_boundary", opt.at_boundary ? 1 : 0);
    row("convexity_warning", opt.convexity_warning ? 1 : 0);
    if (eps_used <= 0.0) eps_used = opt.epsilon_star;
  }
  if (eps_used > 0.0) {
    row("epsilon_used", eps_used);
    row("c_prime", c_prime(eps_used, m, n, d, h, c_delta));
    if (main_text)
      row("c_prime_main_text", c_prime(eps_used, m, n, d, h, c_delta, true));
    if (t > 0.0) {
      row("mean_bound", concentration_bound_mean(t, eps_used, m, n, d, h,
                                                 c_delta));
      row("median_bound", concentration_bound_median(t, eps_used, m, n, d, h,
                                                     c_delta));
    }
  }
  VarianceLikeBound vb = variance_like_bound(delta, m, n, d, h, c_delta);
  row("variance_like_t", vb.t);
  row("variance_like_eps_star", vb.epsilon_star);
  row("variance_like_vacuous", vb.vacuous ? 1 : 0);
  write_output(common.output, out);
  return 0;
}

int cmd_epsilon_star(const Common& common, double t, std::size_t m,
                     std::size_t n, std::size_t d, std::size_t h,
                     double c_delta) {
  EpsilonStarResult opt = optimize_epsilon(t, m, n, d, h, c_delta);
  std::string flags = "--t " + g17(t) + " --m " + std::to_string(m) +
                      " --n " + std::to_string(n) + " --d " +
                      std::to_string(d) + " --part " + std::to_string(h) +
                      " --c-delta " + g17(c_delta) + " " + common.echo();
  std::string out = meta_line("epsilon-star", flags);
  out +=
      "t,m,n,d,h,c_delta,epsilon_star,lower_bound,objective_value,"
      "at_boundary,convexity_warning\n";
  out += g17(t) + "," + std::to_string(m) + "," + std::to_string(n) + "," +
         std::to_string(d) + "," + std::to_string(h) + "," + g17(c_delta) +
         "," + g17(opt.epsilon_star) + "," + g17(opt.lower_bound) + "," +
         g17(opt.objective_value) + "," + (opt.at_boundary ? "1" : "0") + "," +
         (opt.convexity_warning ? "1" : "0") + "\n";
  write_output(common.output, out);
  return 0;
}

int cmd_table2(const Common& common) {
  std::string out = meta_line("table2", common.echo());
  out +=
      "d,N,t,epsilon_star,lower_bound,bound_value,at_boundary,"
      "reference_epsilon_star,reference_bound,epsilon_rel_err,bound_rel_err\n";
  for (const Table2Row& row : kTable2) {
    const std::size_t m = row.big_n / 2, n = row.big_n - row.big_n / 2;
    EpsilonStarResult opt = optimize_epsilon(row.t, m, n, row.d);
    const double eps_err =
        std::fabs(opt.epsilon_star - row.ref_eps) / row.ref_eps;
    const double bound_err =
        std::fabs(opt.objective_value - row.ref_bound) / row.ref_bound;
    out += std::to_string(row.d) + "," + std::to_string(row.big_n) + "," +
           g17(row.t) + "," + g17(opt.epsilon_star) + "," +
           g17(opt.lower_bound) + "," + g17(opt.objective_value) + "," +
           (opt.at_boundary ? "1" : "0") + "," + g17(row.ref_eps) + "," +
           g17(row.ref_bound) + "," + g17(eps_err) + "," + g17(bound_err) +
           "\n";
  }
  write_output(common.output, out);
  return 0;
}

int cmd_heatmap(const Common& common, const std::string& n_grid,
                const std::string& dims, double eta) {
  std::vector<double> ns = parse_double_list(n_grid, "--n-grid");
  std::vector<std::size_t> ds = parse_size_list(dims, "--dims");
  auto surface = mse_rate_surface(ns, ds, eta);
  std::string flags = "--n-grid " + n_grid + " --dims " + dims + " --eta " +
                      g17(eta) + " " + common.echo();
  std::string out = meta_line("heatmap", flags);
  out += "N,d,rate\n";
  for (std::size_t i = 0; i < ns.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j)
      out += g17(ns[i]) + "," + std::to_string(ds[j]) + "," +
             g17(surface[i][j]) + "\n";
  write_output(common.output, out);
  return 0;
}

int cmd_feature_sweep(const Common& common, const DatasetFlags& data,
                      std::size_t dims) {
  LabeledPointSet sample = load_labeled_csv(data.to_spec(common.seed));
  const std::size_t k_max = dims == 0 ? sample.dim() : dims;
  auto sweep = feature_sweep(sample, k_max);
  std::string flags = data.echo() + " --dims " + std::to_string(dims) + " " +
                      common.echo();
  std::string out = meta_line("feature-sweep", flags);
  out += "k,m,n,r_statistic,a_hat,d_hat_raw,d_hat\n";
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    const DivergenceEstimate& est = sweep[k];
    out += std::to_string(k + 1) + "," + std::to_string(est.m) + "," +
           std::to_string(est.n) + "," + std::to_string(est.r_statistic) +
           "," + g17(est.a_hat) + "," + g17(est.d_hat_raw) + "," +
           g17(est.d_hat) + "\n";
  }
  write_output(common.output, out);
  return 0;
}

int cmd_verify_structure(const Common& common, std::size_t trials,
                         const std::string& dims, const std::string& sizes) {
  StructureReport report = verify_structure(parse_size_list(dims, "--dims"),
                                            parse_size_list(sizes, "--sizes"),
                                            trials, common.seed);
  std::string flags = "--trials " + std::to_string(trials) + " --dims " +
                      dims + " --sizes " + sizes + " " + common.echo();
  write_output(common.output, meta_line("verify-structure", flags) +
                                  structure_to_csv(report));
  if (report.violations > 0) {
    for (const StructureCheckRow& row : report.rows)
      if (row.margin < 0) {
        std::cerr << "verify-structure: " << report.violations
                  << " violation(s); first at instance " << row.instance
                  << " (seed " << row.instance_seed << ", check " << row.check
                  << ")\n";
        break;
      }
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Henze-Penrose divergence estimation via the multicolored "
               "minimal spanning tree, with closed-form rate and "
               "concentration bounds"};
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand(
      "estimate", "Divergence estimate from a labeled delimited file");
  Common est_common;
  DatasetFlags est_data;
  std::size_t est_bootstrap = 0;
  double est_level = 0.95;
  est_common.attach(est);
  est_data.attach(est);
  est->add_option("--bootstrap", est_bootstrap,
                  "Percentile-interval resamples (0 = off, else >= 100)")
      ->capture_default_str();
  est->add_option("--level", est_level, "Interval level in (0,1)")
      ->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "Seeded MSE-versus-N experiment with rate overlay");
  Common sim_common;
  FamilyFlags sim_family;
  std::string sim_config, sim_dist = "gaussian";
  std::string sim_grid = "100,200,300,400,500,600,700,800";
  std::size_t sim_trials = 100, sim_oracle_samples = 1000000;
  double sim_shift = 1.0, sim_eta = 1.0, sim_p = 0.5;
  sim_common.attach(sim);
  sim_family.attach(sim);
  sim->add_option("--config", sim_config,
                  "Key-value config file; explicit flags override it");
  sim->add_option("--dist", sim_dist, "Distribution family")
      ->check(CLI::IsMember({"gaussian", "gamma-copula", "student-t"}))
      ->capture_default_str();
  sim->add_option("--shift", sim_shift,
                  "Mean offset of f1 along the first axis (gaussian only)")
      ->capture_default_str();
  sim->add_option("--n-grid", sim_grid, "Per-class sizes, increasing")
      ->capture_default_str();
  sim->add_option("--trials", sim_trials, "Trials per grid point")
      ->capture_default_str();
  sim->add_option("--eta", sim_eta, "Smoothness for the rate overlay")
      ->capture_default_str();
  sim->add_option("--p", sim_p, "Label proportion for the oracle")
      ->capture_default_str();
  sim->add_option("--oracle-samples", sim_oracle_samples,
                  "Ground-truth integration sample count")
      ->capture_default_str();

  // compare-dists
  auto* cmp = app.add_subcommand(
      "compare-dists",
      "Null-calibration curves for the three distribution families");
  Common cmp_common;
  FamilyFlags cmp_family;
  std::string cmp_grid = "100,300,500";
  std::size_t cmp_trials = 100;
  double cmp_eta = 1.0;
  cmp_common.attach(cmp);
  cmp_family.attach(cmp);
  cmp->add_option("--n-grid", cmp_grid, "Per-class sizes, increasing")
      ->capture_default_str();
  cmp->add_option("--trials", cmp_trials, "Trials per grid point")
      ->capture_default_str();
  cmp->add_option("--eta", cmp_eta, "Smoothness for the rate overlay")
      ->capture_default_str();

  // bounds
  auto* bnd = app.add_subcommand(
      "bounds", "Evaluate every closed-form rate and concentration bound");
  Common bnd_common;
  std::size_t bnd_m = 500, bnd_n = 500, bnd_d = 2, bnd_h = 7;
  double bnd_eta = 1.0, bnd_c_delta = 1.0, bnd_c_d = 6.0;
  double bnd_t = 0.0, bnd_eps = 0.0, bnd_delta = 0.05;
  bool bnd_main_text = false;
  bnd_common.attach(bnd);
  bnd->add_option("--m", bnd_m, "Class-0 size")->capture_default_str();
  bnd->add_option("--n", bnd_n, "Class-1 size")->capture_default_str();
  bnd->add_option("--d", bnd_d, "Dimension (>= 2)")->capture_default_str();
  bnd->add_option("--eta", bnd_eta, "Smoothness in (0,1]")
      ->capture_default_str();
  bnd->add_option("--part", bnd_h, "Partition parameter h")->capture_default_str();
  bnd->add_option("--c-delta", bnd_c_delta, "Cell-count constant")
      ->capture_default_str();
  bnd->add_option("--c-d", bnd_c_d, "MST degree constant")
      ->capture_default_str();
  bnd->add_option("--t", bnd_t,
                  "Deviation threshold; > 0 adds the concentration rows")
      ->capture_default_str();
  bnd->add_option("--epsilon", bnd_eps,
                  "Fixed epsilon (0 = use the optimized value)")
      ->capture_default_str();
  bnd->add_option("--delta", bnd_delta, "Failure probability")
      ->capture_default_str();
  bnd->add_flag("--main-text-cprime", bnd_main_text,
                "Also print the alternative leading-constant form");

  // epsilon-star
  auto* eps = app.add_subcommand(
      "epsilon-star", "Minimize the concentration bound over epsilon");
  Common eps_common;
  double eps_t = 0.0, eps_c_delta = 1.0;
  std::size_t eps_m = 0, eps_n = 0, eps_d = 2, eps_h = 7;
  eps_common.attach(eps);
  eps->add_option("--t", eps_t, "Deviation threshold")->required();
  eps->add_option("--m", eps_m, "Class-0 size")->required();
  eps->add_option("--n", eps_n, "Class-1 size")->required();
  eps->add_option("--d", eps_d, "Dimension (>= 2)")->capture_default_str();
  eps->add_option("--part", eps_h, "Partition parameter h")->capture_default_str();
  eps->add_option("--c-delta", eps_c_delta, "Cell-count constant")
      ->capture_default_str();

  // table2
  auto* tab = app.add_subcommand(
      "table2",
      "Optimized bound over the built-in (d, N, t) rows, with reference "
      "values and relative errors");
  Common tab_common;
  tab_common.attach(tab);

  // heatmap
  auto* heat = app.add_subcommand(
      "heatmap", "Rate surface over an (N, d) grid, tidy CSV");
  Common heat_common;
  std::string heat_grid = "100,200,400,800,1600,3200,6400,12800";
  std::string heat_dims = "2,3,4,5,6,7,8";
  double heat_eta = 1.0;
  heat_common.attach(heat);
  heat->add_option("--n-grid", heat_grid, "Total sample sizes")
      ->capture_default_str();
  heat->add_option("--dims", heat_dims, "Dimensions")->capture_default_str();
  heat->add_option("--eta", heat_eta, "Smoothness in (0,1]")
      ->capture_default_str();

  // feature-sweep
  auto* sweep = app.add_subcommand(
      "feature-sweep", "Re-estimate on the first k features, k = 1..dims");
  Common sweep_common;
  DatasetFlags sweep_data;
  std::size_t sweep_dims = 0;
  sweep_common.attach(sweep);
  sweep_data.attach(sweep);
  sweep->add_option("--dims", sweep_dims,
                    "Top feature count (0 = all features)")
      ->capture_default_str();

  // verify-structure
  auto* ver = app.add_subcommand(
      "verify-structure",
      "Check the deterministic MST structural inequalities on seeded "
      "instances; exit 3 on any violation");
  Common ver_common;
  std::size_t ver_trials = 500;
  std::string ver_dims = "2", ver_sizes = "20,60,100,140,200";
  ver_common.attach(ver);
  ver->add_option("--trials", ver_trials, "Instance count")
      ->capture_default_str();
  ver->add_option("--dims", ver_dims, "Dimensions, cycled by instance")
      ->capture_default_str();
  ver->add_option("--sizes", ver_sizes, "Total sizes, cycled by instance")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (est->parsed())
      return cmd_estimate(est_common, est_data, est_bootstrap, est_level);
    if (sim->parsed()) {
      if (!sim_config.empty()) {
        auto file = read_config_file(sim_config);
        for (const auto& [key, value] : file) {
          auto it = kConfigKeys.find(key);
          if (it == kConfigKeys.end())
            throw std::invalid_argument("config: unknown key '" + key + "'");
          // Explicit command-line flags win over the config file.
          if (sim->count(it->second) > 0) continue;
          if (key == "dist") sim_dist = value;
          else if (key == "dim") sim_family.dim = parse_size_list(value, "dim")[0];
          else if (key == "shift") sim_shift = parse_double_list(value, "shift")[0];
          else if (key == "n_grid") sim_grid = value;
          else if (key == "trials") sim_trials = parse_size_list(value, "trials")[0];
          else if (key == "seed") sim_common.seed = parse_size_list(value, "seed")[0];
          else if (key == "eta") sim_eta = parse_double_list(value, "eta")[0];
          else if (key == "p") sim_p = parse_double_list(value, "p")[0];
          else if (key == "oracle_samples")
            sim_oracle_samples = parse_size_list(value, "oracle_samples")[0];
          else if (key == "alpha") sim_family.alpha = parse_double_list(value, "alpha")[0];
          else if (key == "beta") sim_family.beta = parse_double_list(value, "beta")[0];
          else if (key == "rho") sim_family.rho = parse_double_list(value, "rho")[0];
          else if (key == "nu") sim_family.nu = parse_double_list(value, "nu")[0];
        }
        if (sim_dist != "gaussian" && sim_dist != "gamma-copula" &&
            sim_dist != "student-t")
          throw std::invalid_argument("config: unknown dist '" + sim_dist + "'");
      }
      return cmd_simulate(sim_common, sim_family, sim_dist, sim_shift,
                          sim_grid, sim_trials, sim_eta, sim_p,
                          sim_oracle_samples);
    }
    if (cmp->parsed())
      return cmd_compare_dists(cmp_common, cmp_family, cmp_grid, cmp_trials,
                               cmp_eta);
    if (bnd->parsed())
      return cmd_bounds(bnd_common, bnd_m, bnd_n, bnd_d, bnd_eta, bnd_h,
                        bnd_c_delta, bnd_c_d, bnd_t, bnd_eps, bnd_delta,
                        bnd_main_text);
    if (eps->parsed())
      return cmd_epsilon_star(eps_common, eps_t, eps_m, eps_n, eps_d, eps_h,
                              eps_c_delta);
    if (tab->parsed()) return cmd_table2(tab_common);
    if (heat->parsed())
      return cmd_heatmap(heat_common, heat_grid, heat_dims, heat_eta);
    if (sweep->parsed())
      return cmd_feature_sweep(sweep_common, sweep_data, sweep_dims);
    if (ver->parsed())
      return cmd_verify_structure(ver_common, ver_trials, ver_dims, ver_sizes);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
