// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cdiquant/codebooks.hpp"
#include "cdiquant/correlation.hpp"
#include "cdiquant/mu_mimo.hpp"
#include "cdiquant/rng.hpp"
#include "cdiquant/validation.hpp"

#ifndef CDIQUANT_CLI_PATH
#error "CDIQUANT_CLI_PATH must point at the cdiquant binary"
#endif

using namespace cdiquant;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void run_criterion(int number, const std::string& name,
                   const std::function<CriterionResult()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult res;
  try {
    res = body();
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%d/9] %-24s %s  (%.1f s)  %s\n", number, name.c_str(),
              res.pass ? "PASS" : "FAIL", elapsed, res.detail.c_str());
  std::fflush(stdout);
  if (!res.pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

MatC random_psd(int n, Rng& rng) {
  MatC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return hermitize(a * a.adjoint() / n);
}

double pooled_se(const ReportRow& a, const ReportRow& b) {
  return std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
}

// Shared harness config for the URA sum-rate criteria.
ExperimentConfig ura_harness(double sigma_deg, std::vector<Strategy> strategies) {
  ExperimentConfig cfg;
  cfg.geometry = ArrayGeometry::ura(4, 4);
  cfg.scenario = ScenarioConfig::simplified(sigma_deg);
  cfg.n_users = 4;
  cfg.bits_b = 4;
  cfg.snr_grid_db = {0.0, 10.0, 20.0};
  cfg.n_realizations = 500;
  cfg.stats_samples = 100000;
  cfg.strategies = std::move(strategies);
  cfg.master_seed = 20240901;
  return cfg;
}

int workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 2;
}

// Criterion 1: nearest-Kronecker exactness and the residual oracle.
CriterionResult criterion_kronecker() {
  const std::vector<ValidationOutcome> out = validate_kronecker(100, 8, 4242);
  CriterionResult res;
  res.pass = out[0].pass && out[1].pass;
  res.detail = fmt("max rel residual %.3g (< 1e-10); max oracle gap %.3g (<= 1e-9)",
                   out[0].statistic, out[1].statistic);
  return res;
}

// Criterion 2: Lemma 3 decorrelation of the core matrix entries.
CriterionResult criterion_lemma3() {
  const ArrayGeometry geom = ArrayGeometry::ura(4, 4);
  CriterionResult res;
  res.pass = true;
  for (double sigma : {5.0, 20.0}) {
    const ValidationOutcome out =
        validate_lemma3(geom, ScenarioConfig::simplified(sigma), 100000, 555);
    res.pass = res.pass && out.pass;
    res.detail += fmt("sigma=%g: max |rho| %.4f (< 0.05); ", sigma, out.statistic);
  }
  return res;
}

// Criterion 3: Theorem 1 rotation-factor factorization of R.
CriterionResult criterion_theorem1_factor() {
  const ArrayGeometry geom = ArrayGeometry::ura(4, 4);
  CriterionResult res;
  res.pass = true;
  for (double sigma : {5.0, 20.0}) {
    const ValidationOutcome out =
        validate_theorem1(geom, ScenarioConfig::simplified(sigma), 100000, 556);
    res.pass = res.pass && out.pass;
    res.detail += fmt("sigma=%g: ||R-FF^H||/||R|| %.4f (< 0.05); ", sigma, out.statistic);
  }
  return res;
}

SumRateReport g_report_sigma20;  // shared by criteria 4 and 5
SumRateReport g_report_sigma5;

// Criterion 4: joint-full and globally rotated sum rates coincide.
CriterionResult criterion_theorem1_end_to_end() {
  const ExperimentConfig cfg = ura_harness(
      20.0, {Strategy::JointFull, Strategy::GlobalRotated, Strategy::Independent});
  g_report_sigma20 = run_experiment(cfg, workers());
  CriterionResult res;
  res.pass = true;
  for (double snr : cfg.snr_grid_db) {
    const ReportRow& jf = g_report_sigma20.row(Strategy::JointFull, snr);
    const ReportRow& gr = g_report_sigma20.row(Strategy::GlobalRotated, snr);
    const double gap = std::abs(jf.mean_sum_rate - gr.mean_sum_rate);
    const double bound = 2.0 * pooled_se(jf, gr);
    res.pass = res.pass && gap < bound;
    res.detail += fmt("%gdB: |JF-GR| %.4f < %.4f; ", snr, gap, bound);
  }
  return res;
}

// Criterion 5: joint beats independent, more so at larger angular spread.
CriterionResult criterion_ordering() {
  const ExperimentConfig cfg5 =
      ura_harness(5.0, {Strategy::JointFull, Strategy::Independent});
  g_report_sigma5 = run_experiment(cfg5, workers());

  CriterionResult res;
  res.pass = true;
  for (double snr : {10.0, 20.0}) {
    const ReportRow& jf = g_report_sigma20.row(Strategy::JointFull, snr);
    const ReportRow& ind = g_report_sigma20.row(Strategy::Independent, snr);
    const double gap = jf.mean_sum_rate - ind.mean_sum_rate;
    const double bound = 2.0 * pooled_se(jf, ind);
    res.pass = res.pass && gap > bound;
    res.detail += fmt("%gdB: JF-Ind %.3f > %.3f; ", snr, gap, bound);
  }
  const double gap20 =
      g_report_sigma20.row(Strategy::JointFull, 10.0).mean_sum_rate -
      g_report_sigma20.row(Strategy::Independent, 10.0).mean_sum_rate;
  const double gap5 = g_report_sigma5.row(Strategy::JointFull, 10.0).mean_sum_rate -
                      g_report_sigma5.row(Strategy::Independent, 10.0).mean_sum_rate;
  res.pass = res.pass && gap20 > gap5;
  res.detail += fmt("gap(sigma=20) %.3f > gap(sigma=5) %.3f", gap20, gap5);
  return res;
}

// Criterion 6: the power coupling from the rotated covariance diagonal
// matches the direct bilinear Monte-Carlo estimate.
CriterionResult criterion_coupling_equivalence() {
  const ArrayGeometry geom = ArrayGeometry::ura(4, 4);
  const ScenarioConfig sc = ScenarioConfig::simplified(20.0);
  const long samples = 100000;
  const std::uint64_t seed = 808;

  CorrelationAccumulator acc(4, 4);
  for (long s = 0; s < samples; ++s)
    acc.add(realize_channel_vector(draw_rayset(sc, derive_seed(seed, 0, s)), geom));
  const CorrelationSet cs = acc.finalize(CorrelationAccumulator::FactorRoute::SubCorrelation);

  MatR direct = MatR::Zero(4, 4);
  for (long s = 0; s < samples; ++s) {
    const VecC h = realize_channel_vector(draw_rayset(sc, derive_seed(seed, 0, s)), geom);
    direct += transform_to_core(unvec_cm(h, 4, 4), cs.u_h, cs.u_v).cwiseAbs2();
  }
  direct = (direct / static_cast<double>(samples)).cwiseSqrt();

  const double floor = 0.01 * cs.coupling.maxCoeff();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (cs.coupling(i, j) > floor)
        worst = std::max(worst, std::abs(direct(i, j) - cs.coupling(i, j)) / cs.coupling(i, j));

  CriterionResult res;
  res.pass = worst < 0.03;
  res.detail = fmt("max relative gap on significant entries %.3g (< 0.03)", worst);
  return res;
}

// Criterion 7: rank structure of the two codeword families.
CriterionResult criterion_ranks() {
  Rng rng(909);
  bool ok = true;
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const int nh = 3 + static_cast<int>(rng.uniform01() * 3);
    const int nv = 3 + static_cast<int>(rng.uniform01() * 3);
    // Independent codeword: always rank one.
    VecC c_h(nh), c_v(nv);
    for (int i = 0; i < nh; ++i) c_h(i) = rng.cnormal();
    for (int i = 0; i < nv; ++i) c_v(i) = rng.cnormal();
    c_h.normalize();
    c_v.normalize();
    const MatC ci =
        independent_codeword(random_psd(nh, rng), random_psd(nv, rng), c_h, c_v);
    ok = ok && numerical_rank(ci) == 1;

    // Joint codeword: rank bounded by the truncation ranks.
    const int rh = 1 + static_cast<int>(rng.uniform01() * (nh - 1));
    const int rv = 1 + static_cast<int>(rng.uniform01() * (nv - 1));
    const MatC u_h = eigh_descending(random_psd(nh, rng)).vectors.leftCols(rh);
    const MatC u_v = eigh_descending(random_psd(nv, rng)).vectors.leftCols(rv);
    MatR coupling(rh, rv);
    for (int i = 0; i < rh; ++i)
      for (int j = 0; j < rv; ++j) coupling(i, j) = std::abs(rng.normal()) + 1e-3;
    MatC g(rh, rv);
    for (int i = 0; i < rh; ++i)
      for (int j = 0; j < rv; ++j) g(i, j) = rng.cnormal();
    const MatC cj = joint_codeword_matrix({u_h, u_v, coupling}, g);
    ok = ok && numerical_rank(cj) <= std::min(rh, rv);
    ++checked;
  }
  CriterionResult res;
  res.pass = ok && checked == 1000;
  res.detail = fmt("%d random inputs: rank(C_I)=1 and rank(C_J)<=min(r_h,r_v)", checked);
  return res;
}

// Criterion 8: the CLI produces byte-identical CSV bodies across reruns and
// worker counts.
CriterionResult criterion_determinism() {
  const char* cfg =
      "array.kind = ura\n"
      "array.n_h = 4\n"
      "array.n_v = 4\n"
      "scenario.model = simplified\n"
      "scenario.sigma_deg = 20\n"
      "sim.users = 2\n"
      "sim.bits = 3\n"
      "sim.snr_db = 0,10\n"
      "sim.realizations = 100\n"
      "sim.stats_samples = 2000\n"
      "sim.strategies = perfect,joint_full\n"
      "seed = 31337\n";
  {
    std::ofstream out("/tmp/cdiq_acc_det.cfg");
    out << cfg;
  }
  auto run_cli = [&](int workers, const std::string& out_path) {
    const std::string cmd = std::string(CDIQUANT_CLI_PATH) + " simulate --config " +
                            "/tmp/cdiq_acc_det.cfg --workers " + std::to_string(workers) +
                            " --out " + out_path + " > /dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CriterionResult res;
  if (run_cli(1, "/tmp/cdiq_acc_w1.csv") != 0 || run_cli(8, "/tmp/cdiq_acc_w8.csv") != 0) {
    res.detail = "CLI run failed";
    return res;
  }
  const std::string a = slurp("/tmp/cdiq_acc_w1.csv");
  const std::string b = slurp("/tmp/cdiq_acc_w8.csv");
  res.pass = !a.empty() && a == b;
  res.detail = fmt("workers 1 vs 8: %zu-byte CSV bodies %s", a.size(),
                   res.pass ? "identical" : "differ");
  return res;
}

// Criterion 9: the UCCA pipeline (factor search + joint codebook) works and
// joint quantization outperforms independent quantization.
CriterionResult criterion_ucca() {
  const ArrayGeometry geom = ArrayGeometry::ucca(4, 4, {0.5, 1.0, 1.5, 2.0});
  const ScenarioConfig sc = ScenarioConfig::simplified(5.0);

  // Factor scan over an ensemble covariance.
  CorrelationAccumulator acc(16);
  for (long s = 0; s < 20000; ++s)
    acc.add(realize_channel_vector(draw_rayset(sc, derive_seed(616, 0, s)), geom));
  const CorrelationSet cs = acc.finalize(CorrelationAccumulator::FactorRoute::NearestKronecker);
  const FactorChoice best = choose_factorization(cs.r);
  const bool scan_ok = std::isfinite(best.residual) && best.n_h >= 2 && best.n_v >= 2 &&
                       best.n_h * best.n_v == 16;

  ExperimentConfig cfg;
  cfg.geometry = geom;
  cfg.scenario = sc;
  cfg.n_users = 4;
  cfg.bits_b = 4;
  cfg.snr_grid_db = {10.0};
  cfg.n_realizations = 500;
  cfg.stats_samples = 20000;
  cfg.strategies = {Strategy::JointFull, Strategy::Independent};
  cfg.master_seed = 717;
  const SumRateReport report = run_experiment(cfg, workers());
  const ReportRow& jf = report.row(Strategy::JointFull, 10.0);
  const ReportRow& ind = report.row(Strategy::Independent, 10.0);
  const double gap = jf.mean_sum_rate - ind.mean_sum_rate;
  const double bound = pooled_se(jf, ind);

  CriterionResult res;
  res.pass = scan_ok && gap > bound;
  res.detail = fmt("factorization %dx%d residual %.3g; JF-Ind %.3f > %.3f at 10 dB",
                   best.n_h, best.n_v, best.residual, gap, bound);
  return res;
}

}  // namespace

int main() {
  std::printf("acceptance suite (%d hardware threads)\n", workers());
  run_criterion(1, "kronecker-decomposition", criterion_kronecker);
  run_criterion(2, "lemma3-decorrelation", criterion_lemma3);
  run_criterion(3, "theorem1-factorization", criterion_theorem1_factor);
  run_criterion(4, "theorem1-end-to-end", criterion_theorem1_end_to_end);
  run_criterion(5, "ordering-reproduction", criterion_ordering);
  run_criterion(6, "coupling-equivalence", criterion_coupling_equivalence);
  run_criterion(7, "rank-properties", criterion_ranks);
  run_criterion(8, "simulate-determinism", criterion_determinism);
  run_criterion(9, "ucca-applicability", criterion_ucca);
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
