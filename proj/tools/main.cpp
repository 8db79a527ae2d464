// cdiquant command line: batch sum-rate simulation, correlation-matrix
// decomposition and statistical validation suites.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "cdiquant/config.hpp"
#include "cdiquant/correlation.hpp"
#include "cdiquant/errors.hpp"
#include "cdiquant/matrix_io.hpp"
#include "cdiquant/mu_mimo.hpp"
#include "cdiquant/validation.hpp"
#include "cdiquant/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitNumericalError = 2;
constexpr int kExitValidationFail = 3;

int default_workers() {
  if (const char* env = std::getenv("CDIQUANT_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed_override, bool has_seed,
                 int workers, const std::string& out_path) {
  const cdiquant::ConfigMap cfg_map = cdiquant::ConfigMap::load(config_path);
  cdiquant::ExperimentConfig cfg = cdiquant::experiment_from_config(cfg_map);
  if (has_seed) cfg.master_seed = seed_override;

  const auto t0 = std::chrono::steady_clock::now();
  const cdiquant::SumRateReport report = cdiquant::run_experiment(cfg, workers);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    std::ofstream out(out_path);
    if (!out) throw cdiquant::config_error("cannot open '" + out_path + "' for writing");
    out << report.to_csv();
  }

  // Manifest: names the exact config that produced the CSV.
  const std::string manifest_path = out_path + ".manifest";
  {
    std::ofstream out(manifest_path);
    if (!out) throw cdiquant::config_error("cannot open '" + manifest_path + "' for writing");
    out << "manifest.version = " << cdiquant::kVersion << "\n";
    out << "manifest.generated_utc = " << utc_timestamp() << "\n";
    out << "manifest.master_seed = " << cfg.master_seed << "\n";
    out << "manifest.workers = " << workers << "\n";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", elapsed);
    out << "manifest.elapsed_seconds = " << buf << "\n";
    out << "manifest.output_csv = " << out_path << "\n";
    out << "manifest.snr_convention = receive SNR; channel gains scaled by 1/sqrt(N_t)\n";
    const cdiquant::ConfigMap echo = cdiquant::experiment_to_config(cfg);
    for (const std::string& key : echo.keys())
      out << "config." << key << " = " << echo.get(key) << "\n";
  }

  std::cout << "wrote " << report.rows.size() << " rows to " << out_path << " ("
            << manifest_path << ")\n";
  return kExitOk;
}

int cmd_decompose(const std::string& matrix_path, int n_h, int n_v) {
  const cdiquant::MatC r = cdiquant::read_complex_matrix_file(matrix_path);
  if (r.rows() != r.cols())
    throw cdiquant::config_error("decompose requires a square matrix, got " +
                                 std::to_string(r.rows()) + "x" + std::to_string(r.cols()));
  if (static_cast<Eigen::Index>(n_h) * n_v != r.rows())
    throw cdiquant::config_error("n_h * n_v must equal the matrix size " +
                                 std::to_string(r.rows()));
  const double herm_gap = (r - r.adjoint()).norm();
  if (herm_gap > 1e-8 * std::max(1.0, r.norm()))
    throw cdiquant::numerical_error("matrix is not Hermitian within tolerance (gap " +
                                    std::to_string(herm_gap) + ")");

  const cdiquant::KroneckerFactors kf = cdiquant::nearest_kronecker(r, n_h, n_v);
  const cdiquant::Eigensystem eig_h = cdiquant::eigh_descending(kf.c);
  const cdiquant::Eigensystem eig_v = cdiquant::eigh_descending(kf.b);
  const cdiquant::MatR coupling = cdiquant::power_coupling(r, eig_h.vectors, eig_v.vectors);

  std::cout << "# B\n";
  cdiquant::write_complex_matrix(std::cout, kf.b);
  std::cout << "# C\n";
  cdiquant::write_complex_matrix(std::cout, kf.c);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", kf.residual);
  std::cout << "# residual\n" << buf << "\n";
  std::cout << "# U_h\n";
  cdiquant::write_complex_matrix(std::cout, eig_h.vectors);
  std::cout << "# U_v\n";
  cdiquant::write_complex_matrix(std::cout, eig_v.vectors);
  std::cout << "# Lambda\n";
  cdiquant::write_complex_matrix(std::cout, coupling.cast<cdiquant::cdouble>());
  return kExitOk;
}

void print_outcome(const cdiquant::ValidationOutcome& o) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", o.statistic);
  std::cout << o.name << ": statistic = " << buf;
  if (o.report_only) {
    std::cout << " (report only) -- " << o.detail << "\n";
  } else {
    std::snprintf(buf, sizeof(buf), "%.6g", o.threshold);
    std::cout << ", threshold = " << buf << (o.pass ? " PASS" : " FAIL") << " -- " << o.detail
              << "\n";
  }
}

int cmd_validate(const std::string& suite, const std::string& config_path, long samples,
                 std::uint64_t seed, int trials, int max_dim, double sigma_deg) {
  cdiquant::ArrayGeometry geom = cdiquant::ArrayGeometry::ura(4, 4);
  cdiquant::ScenarioConfig scenario = cdiquant::ScenarioConfig::simplified(sigma_deg);
  if (!config_path.empty()) {
    const cdiquant::ConfigMap cfg = cdiquant::ConfigMap::load(config_path);
    geom = cdiquant::array_from_config(cfg);
    scenario = cdiquant::scenario_from_config(cfg);
  }

  std::vector<cdiquant::ValidationOutcome> outcomes;
  if (suite == "lemma1") {
    outcomes.push_back(cdiquant::validate_lemma1(geom, scenario, samples, seed));
  } else if (suite == "lemma3") {
    outcomes.push_back(cdiquant::validate_lemma3(geom, scenario, samples, seed));
  } else if (suite == "theorem1") {
    outcomes.push_back(cdiquant::validate_theorem1(geom, scenario, samples, seed));
  } else if (suite == "kronecker") {
    outcomes = cdiquant::validate_kronecker(trials, max_dim, seed);
  } else {
    throw cdiquant::config_error("unknown validation suite '" + suite +
                                 "' (expected lemma1, lemma3, theorem1 or kronecker)");
  }

  bool all_pass = true;
  for (const cdiquant::ValidationOutcome& o : outcomes) {
    print_outcome(o);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? kExitOk : kExitValidationFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint CDI quantization toolkit for spatially correlated 3D MIMO channels"};
  app.set_version_flag("--version", std::string(cdiquant::kVersion));
  app.require_subcommand(1);

  std::string config_path, out_path = "report.csv", matrix_path, suite;
  std::uint64_t seed = 1;
  bool seed_given = false;
  int workers = default_workers();
  int n_h = 0, n_v = 0;
  long samples = 100000;
  int trials = 100, max_dim = 8;
  double sigma_deg = 5.0;

  CLI::App* simulate = app.add_subcommand("simulate", "Run an averaged sum-rate experiment");
  simulate->add_option("--config", config_path, "experiment config file")
      ->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "override the config master seed")
      ->each([&](const std::string&) { seed_given = true; });
  simulate->add_option("--workers", workers, "worker thread count")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_path, "output CSV path");

  CLI::App* decompose =
      app.add_subcommand("decompose", "Nearest-Kronecker decomposition of a correlation matrix");
  decompose->add_option("--matrix", matrix_path, "matrix file ('rows cols' then re/im pairs)")
      ->required()->check(CLI::ExistingFile);
  decompose->add_option("--n-h", n_h, "horizontal dimension")->required();
  decompose->add_option("--n-v", n_v, "vertical dimension")->required();

  CLI::App* validate = app.add_subcommand("validate", "Statistical validation suites");
  validate->add_option("--suite", suite, "lemma1 | lemma3 | theorem1 | kronecker")->required();
  validate->add_option("--config", config_path, "array/scenario config file")
      ->check(CLI::ExistingFile);
  validate->add_option("--samples", samples, "Monte-Carlo sample count");
  validate->add_option("--seed", seed, "suite seed");
  validate->add_option("--trials", trials, "trial count (kronecker suite)");
  validate->add_option("--max-dim", max_dim, "max factor dimension (kronecker suite)");
  validate->add_option("--sigma-deg", sigma_deg, "angular spread for the default scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, seed, seed_given, workers, out_path);
    if (decompose->parsed()) return cmd_decompose(matrix_path, n_h, n_v);
    if (validate->parsed())
      return cmd_validate(suite, config_path, samples, seed, trials, max_dim, sigma_deg);
  } catch (const cdiquant::config_error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  } catch (const cdiquant::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalError;
  }
  return kExitConfigError;
}
