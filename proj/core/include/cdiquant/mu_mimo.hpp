#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdiquant/array_geometry.hpp"
#include "cdiquant/channel_model.hpp"
#include "cdiquant/linalg.hpp"

namespace cdiquant {

enum class Strategy {
  PerfectCdi,
  GlobalRotated,
  JointFull,
  JointLowDim,
  JointDftStats,
  Independent,
};

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);  // throws std::invalid_argument

struct ExperimentConfig {
  ArrayGeometry geometry;
  ScenarioConfig scenario;
  int n_users = 1;
  int bits_b = 4;                    // B; joint/global codebooks use 2B bits
  std::vector<double> snr_grid_db;   // receive SNR points
  int n_realizations = 1000;
  std::vector<Strategy> strategies;
  int stats_samples = 10000;         // realizations used to form correlation matrices
  std::uint64_t master_seed = 1;

  int joint_rank_h = 2;              // JointLowDim ranks
  int joint_rank_v = 2;
  double energy_threshold = 0.9;     // dominant-energy rank rule (JointDftStats)
  int dft_bits = 8;                  // statistical sub-direction quantization
  int coupling_bits = 8;             // power-coupling quantization

  void validate() const;  // throws std::invalid_argument
};

struct ReportRow {
  Strategy strategy;
  double snr_db = 0.0;
  double mean_sum_rate = 0.0;  // bits/s/Hz
  double std_err = 0.0;
  long n_ok = 0;
  long n_redrawn = 0;
};

struct SumRateReport {
  std::vector<ReportRow> rows;  // strategy-major, then SNR grid order

  // Header `strategy,snr_db,mean_sum_rate,std_err,n_ok,n_redrawn`, '.'
  // decimal separator, no locale dependence.
  std::string to_csv() const;

  const ReportRow& row(Strategy s, double snr_db) const;
};

// Zero-forcing beamformers from quantized CDIs: W = H^H (H H^H)^{-1} with the
// CDIs stacked as rows of H, columns normalized. Throws
// singular_precoder_error when the CDI matrix is rank deficient.
MatC zf_precoder(const std::vector<VecC>& quantized_cdi);

// Sum of log2(1 + SINR_k) with equal power split rho/K and channels scaled by
// 1/sqrt(N_t), so a matched-filter link with ||h||^2 = N_t attains SINR = rho
// (receive-SNR convention).
double sum_rate(const std::vector<VecC>& true_channels, const MatC& w,
                double snr_rx_linear);

// Two-phase averaged experiment: per user, long-term state and correlation
// matrices from stats_samples independent draws; then per realization, fresh
// channels with the same user states, quantization per strategy, ZF and
// sum-rate accumulation. Deterministic for a given config regardless of the
// worker count.
SumRateReport run_experiment(const ExperimentConfig& cfg, int workers = 1);

}  // namespace cdiquant
