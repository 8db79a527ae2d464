#include "cdiquant/mu_mimo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "cdiquant/codebooks.hpp"
#include "cdiquant/correlation.hpp"
#include "cdiquant/errors.hpp"
#include "cdiquant/rng.hpp"

namespace cdiquant {

namespace {

// Seed streams of the experiment tree.
constexpr std::uint64_t kStreamUserState = 1;
constexpr std::uint64_t kStreamStats = 2;
constexpr std::uint64_t kStreamEval = 3;
constexpr std::uint64_t kStreamCodebook = 4;
constexpr std::uint64_t kStreamCoupling = 5;

// Sub-ids within kStreamCodebook, per user.
constexpr std::uint64_t kCbFull = 0;
constexpr std::uint64_t kCbLow = 1;
constexpr std::uint64_t kCbDft = 2;
constexpr std::uint64_t kCbIndH = 3;
constexpr std::uint64_t kCbIndV = 4;

constexpr int kMaxRedrawAttempts = 32;

void parallel_for(long count, int workers, const std::function<void(long)>& body) {
  workers = std::max(1, workers);
  if (workers == 1 || count <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<long>(workers, count));
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(run);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::PerfectCdi: return "perfect";
    case Strategy::GlobalRotated: return "global_rotated";
    case Strategy::JointFull: return "joint_full";
    case Strategy::JointLowDim: return "joint_lowdim";
    case Strategy::JointDftStats: return "joint_dft_stats";
    case Strategy::Independent: return "independent";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  for (Strategy s : {Strategy::PerfectCdi, Strategy::GlobalRotated, Strategy::JointFull,
                     Strategy::JointLowDim, Strategy::JointDftStats, Strategy::Independent}) {
    if (name == strategy_name(s)) return s;
  }
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

void ExperimentConfig::validate() const {
  geometry.validate();
  scenario.validate();
  if (n_users < 1) throw std::invalid_argument("sim.users must be >= 1");
  if (n_users > geometry.element_count())
    throw std::invalid_argument("sim.users must not exceed the antenna count (ZF)");
  if (bits_b < 0 || 2 * bits_b > 24)
    throw std::invalid_argument("sim.bits out of range (0..12)");
  if (snr_grid_db.empty()) throw std::invalid_argument("sim.snr_db must be nonempty");
  if (n_realizations < 1) throw std::invalid_argument("sim.realizations must be >= 1");
  if (strategies.empty()) throw std::invalid_argument("sim.strategies must be nonempty");
  if (stats_samples < 1) throw std::invalid_argument("sim.stats_samples must be >= 1");
  if (joint_rank_h < 1 || joint_rank_v < 1)
    throw std::invalid_argument("joint ranks must be >= 1");
  if (!(energy_threshold > 0.0) || energy_threshold > 1.0)
    throw std::invalid_argument("sim.energy_threshold must be in (0, 1]");
  if (dft_bits < 0 || dft_bits > 24 || coupling_bits < 0 || coupling_bits > 24)
    throw std::invalid_argument("quantizer bit budgets out of range");
}

MatC zf_precoder(const std::vector<VecC>& quantized_cdi) {
  const int k = static_cast<int>(quantized_cdi.size());
  if (k < 1) throw std::invalid_argument("zf_precoder: at least one user required");
  const Eigen::Index nt = quantized_cdi.front().size();
  if (k > nt) throw std::invalid_argument("zf_precoder: more users than antennas");
  MatC hq(k, nt);
  for (int i = 0; i < k; ++i) {
    if (quantized_cdi[i].size() != nt)
      throw std::invalid_argument("zf_precoder: inconsistent CDI lengths");
    hq.row(i) = quantized_cdi[i].adjoint();
  }
  Eigen::JacobiSVD<MatC> svd(hq);
  const VecR& s = svd.singularValues();
  if (s(0) <= 0.0 || s(s.size() - 1) <= 1e-10 * s(0))
    throw singular_precoder_error("zf_precoder: quantized CDI matrix is rank deficient");
  const MatC gram = hq * hq.adjoint();
  MatC w = hq.adjoint() * gram.inverse();
  for (int j = 0; j < k; ++j) w.col(j).normalize();
  return w;
}

double sum_rate(const std::vector<VecC>& true_channels, const MatC& w,
                double snr_rx_linear) {
  const int k = static_cast<int>(true_channels.size());
  if (k < 1 || w.cols() != k) throw std::invalid_argument("sum_rate: user count mismatch");
  const Eigen::Index nt = w.rows();
  if (snr_rx_linear < 0.0) throw std::invalid_argument("sum_rate: negative SNR");
  // Receive-SNR convention: channel gains are scaled by 1/N_t so a
  // matched-filter link with ||h||^2 = N_t attains SINR = rho.
  const double per_user = snr_rx_linear / k / static_cast<double>(nt);
  double rate = 0.0;
  for (int i = 0; i < k; ++i) {
    if (true_channels[i].size() != nt)
      throw std::invalid_argument("sum_rate: channel dimension mismatch");
    const VecC gains = w.adjoint() * true_channels[i];
    double signal = 0.0, interference = 0.0;
    for (int m = 0; m < k; ++m) {
      const double p = per_user * std::norm(gains(m));
      if (m == i)
        signal = p;
      else
        interference += p;
    }
    rate += std::log2(1.0 + signal / (1.0 + interference));
  }
  return rate;
}

namespace {

struct UserAssets {
  UserState state;
  int fold_h = 0;
  int fold_v = 0;
  // Rotated codeword columns per strategy index (empty when unused).
  std::vector<MatC> strategy_cols;
  // Independent quantization: per-direction rotated codebooks.
  MatC ind_cols_h;
  MatC ind_cols_v;
};

UserAssets build_user_assets(const ExperimentConfig& cfg, int user) {
  UserAssets ua;
  ua.state = draw_user_state(cfg.scenario,
                             derive_seed(cfg.master_seed, kStreamUserState, user));

  bool needs_stats = false;
  for (Strategy s : cfg.strategies)
    if (s != Strategy::PerfectCdi) needs_stats = true;
  ua.strategy_cols.resize(cfg.strategies.size());
  if (!needs_stats) {
    if (cfg.geometry.kind == ArrayKind::Ura) {
      ua.fold_h = cfg.geometry.n_h;
      ua.fold_v = cfg.geometry.n_v;
    }
    return ua;
  }

  const bool is_ura = cfg.geometry.kind == ArrayKind::Ura;
  CorrelationAccumulator acc =
      is_ura ? CorrelationAccumulator(cfg.geometry.n_h, cfg.geometry.n_v)
             : CorrelationAccumulator(cfg.geometry.element_count());
  for (int s = 0; s < cfg.stats_samples; ++s) {
    const RaySet rays = draw_rayset(cfg.scenario, ua.state,
                                    derive_seed(cfg.master_seed, kStreamStats, user, s));
    acc.add(realize_channel_vector(rays, cfg.geometry));
  }
  const CorrelationSet stats =
      acc.finalize(is_ura ? CorrelationAccumulator::FactorRoute::SubCorrelation
                          : CorrelationAccumulator::FactorRoute::NearestKronecker,
                   cfg.energy_threshold);
  ua.fold_h = stats.n_h();
  ua.fold_v = stats.n_v();

  const int nt = cfg.geometry.element_count();
  const int full_bits = 2 * cfg.bits_b;
  MatC base_full;  // shared by GlobalRotated and JointFull

  auto base_full_cols = [&]() -> const MatC& {
    if (base_full.size() == 0)
      base_full = rvq_codebook(nt, full_bits,
                               derive_seed(cfg.master_seed, kStreamCodebook, user, kCbFull))
                      .as_columns();
    return base_full;
  };

  for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
    switch (cfg.strategies[si]) {
      case Strategy::PerfectCdi:
        break;
      case Strategy::GlobalRotated: {
        ua.strategy_cols[si] =
            rotated_codebook_columns(hermitian_sqrt_psd(stats.r), base_full_cols());
        break;
      }
      case Strategy::JointFull: {
        const JointStatistics js = stats.full_statistics();
        const MatC rot = kron(js.u_v, js.u_h) *
                         VecR(vec_cm(js.coupling)).cast<cdouble>().asDiagonal();
        ua.strategy_cols[si] = rotated_codebook_columns(rot, base_full_cols());
        break;
      }
      case Strategy::JointLowDim: {
        const int rh = std::min(cfg.joint_rank_h, stats.n_h());
        const int rv = std::min(cfg.joint_rank_v, stats.n_v());
        const JointStatistics js = stats.truncated_statistics(rh, rv);
        const MatC rot = kron(js.u_v, js.u_h) *
                         VecR(vec_cm(js.coupling)).cast<cdouble>().asDiagonal();
        const MatC base =
            rvq_codebook(rh * rv, full_bits,
                         derive_seed(cfg.master_seed, kStreamCodebook, user, kCbLow))
                .as_columns();
        ua.strategy_cols[si] = rotated_codebook_columns(rot, base);
        break;
      }
      case Strategy::JointDftStats: {
        const JointStatistics js = stats.truncated_statistics();
        const MatC uh_q = quantize_statistics_dft(js.u_h, cfg.dft_bits);
        const MatC uv_q = quantize_statistics_dft(js.u_v, cfg.dft_bits);
        const MatR lam_q =
            quantize_coupling_rvq(js.coupling, cfg.coupling_bits,
                                  derive_seed(cfg.master_seed, kStreamCoupling, user));
        const MatC rot =
            kron(uv_q, uh_q) * VecR(vec_cm(lam_q)).cast<cdouble>().asDiagonal();
        const MatC base =
            rvq_codebook(js.rank_h() * js.rank_v(), full_bits,
                         derive_seed(cfg.master_seed, kStreamCodebook, user, kCbDft))
                .as_columns();
        ua.strategy_cols[si] = rotated_codebook_columns(rot, base);
        break;
      }
      case Strategy::Independent: {
        const MatC base_h =
            rvq_codebook(stats.n_h(), cfg.bits_b,
                         derive_seed(cfg.master_seed, kStreamCodebook, user, kCbIndH))
                .as_columns();
        const MatC base_v =
            rvq_codebook(stats.n_v(), cfg.bits_b,
                         derive_seed(cfg.master_seed, kStreamCodebook, user, kCbIndV))
                .as_columns();
        ua.ind_cols_h = rotated_codebook_columns(hermitian_sqrt_psd(stats.r_h), base_h);
        ua.ind_cols_v = rotated_codebook_columns(hermitian_sqrt_psd(stats.r_v), base_v);
        break;
      }
    }
  }
  return ua;
}

struct RealizationResult {
  std::vector<std::vector<double>> rates;  // [strategy][snr]
  std::vector<long> redraws;               // per strategy
  std::vector<bool> ok;                    // per strategy
};

std::vector<VecC> draw_eval_channels(const ExperimentConfig& cfg,
                                     const std::vector<UserAssets>& users,
                                     long realization, int attempt) {
  std::vector<VecC> chans(users.size());
  for (std::size_t k = 0; k < users.size(); ++k) {
    const RaySet rays = draw_rayset(
        cfg.scenario, users[k].state,
        derive_seed(cfg.master_seed, kStreamEval, static_cast<std::uint64_t>(realization),
                    static_cast<std::uint64_t>(attempt) * users.size() + k));
    chans[k] = realize_channel_vector(rays, cfg.geometry);
  }
  return chans;
}

std::vector<VecC> quantize_cdis(const ExperimentConfig& cfg, Strategy strategy,
                                std::size_t strategy_index,
                                const std::vector<UserAssets>& users,
                                const std::vector<VecC>& chans) {
  std::vector<VecC> cdis(chans.size());
  for (std::size_t k = 0; k < chans.size(); ++k) {
    const UserAssets& ua = users[k];
    switch (strategy) {
      case Strategy::PerfectCdi:
        cdis[k] = cdi(chans[k]);
        break;
      case Strategy::Independent: {
        const MatC H = unvec_cm(chans[k], ua.fold_h, ua.fold_v);
        Eigen::JacobiSVD<MatC> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const VecC u1 = svd.matrixU().col(0);
        const VecC v1c = svd.matrixV().col(0).conjugate();  // dominant direction of H^T
        const QuantizerResult qh = quantize_columns(u1, ua.ind_cols_h);
        const QuantizerResult qv = quantize_columns(v1c, ua.ind_cols_v);
        const MatC c_i = ua.ind_cols_h.col(qh.index) * ua.ind_cols_v.col(qv.index).transpose();
        cdis[k] = vec_cm(c_i);
        break;
      }
      default: {
        const VecC h_bar = cdi(chans[k]);
        const MatC& cols = ua.strategy_cols[strategy_index];
        const QuantizerResult q = quantize_columns(h_bar, cols);
        cdis[k] = cols.col(q.index);
        break;
      }
    }
  }
  return cdis;
}

RealizationResult eval_realization(const ExperimentConfig& cfg,
                                   const std::vector<UserAssets>& users,
                                   const std::vector<double>& rho_grid,
                                   long realization) {
  RealizationResult res;
  res.rates.assign(cfg.strategies.size(),
                   std::vector<double>(rho_grid.size(), 0.0));
  res.redraws.assign(cfg.strategies.size(), 0);
  res.ok.assign(cfg.strategies.size(), true);

  const std::vector<VecC> shared = draw_eval_channels(cfg, users, realization, 0);
  for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
    const Strategy strategy = cfg.strategies[si];
    int attempt = 0;
    std::vector<VecC> chans = shared;
    for (;;) {
      try {
        const std::vector<VecC> cdis = quantize_cdis(cfg, strategy, si, users, chans);
        const MatC w = zf_precoder(cdis);
        for (std::size_t m = 0; m < rho_grid.size(); ++m)
          res.rates[si][m] = sum_rate(chans, w, rho_grid[m]);
        break;
      } catch (const numerical_error&) {
      } catch (const degenerate_error&) {
      }
      // Rank-deficient precoder or a degenerate draw: redraw this
      // strategy's realization from a derived seed and count it.
      ++res.redraws[si];
      ++attempt;
      if (attempt > kMaxRedrawAttempts) {
        res.ok[si] = false;
        break;
      }
      chans = draw_eval_channels(cfg, users, realization, attempt);
    }
  }
  return res;
}

}  // namespace

std::string SumRateReport::to_csv() const {
  std::string out = "strategy,snr_db,mean_sum_rate,std_err,n_ok,n_redrawn\n";
  char buf[160];
  for (const ReportRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g,%ld,%ld\n",
                  strategy_name(r.strategy), r.snr_db, r.mean_sum_rate, r.std_err,
                  r.n_ok, r.n_redrawn);
    out += buf;
  }
  return out;
}

const ReportRow& SumRateReport::row(Strategy s, double snr_db) const {
  for (const ReportRow& r : rows)
    if (r.strategy == s && r.snr_db == snr_db) return r;
  throw std::invalid_argument("report row not found");
}

SumRateReport run_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  const int k = cfg.n_users;

  std::vector<UserAssets> users(k);
  parallel_for(k, workers, [&](long u) {
    users[static_cast<std::size_t>(u)] = build_user_assets(cfg, static_cast<int>(u));
  });

  std::vector<double> rho_grid(cfg.snr_grid_db.size());
  for (std::size_t m = 0; m < rho_grid.size(); ++m)
    rho_grid[m] = std::pow(10.0, cfg.snr_grid_db[m] / 10.0);

  std::vector<RealizationResult> results(cfg.n_realizations);
  parallel_for(cfg.n_realizations, workers, [&](long r) {
    results[static_cast<std::size_t>(r)] = eval_realization(cfg, users, rho_grid, r);
  });

  // Fixed-order reduction: the report is identical for any worker count.
  SumRateReport report;
  for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
    long n_ok = 0, n_redrawn = 0;
    for (const RealizationResult& res : results) {
      if (res.ok[si]) ++n_ok;
      n_redrawn += res.redraws[si];
    }
    for (std::size_t m = 0; m < rho_grid.size(); ++m) {
      double sum = 0.0;
      for (const RealizationResult& res : results)
        if (res.ok[si]) sum += res.rates[si][m];
      const double mean = n_ok > 0 ? sum / static_cast<double>(n_ok) : 0.0;
      double ss = 0.0;
      for (const RealizationResult& res : results)
        if (res.ok[si]) ss += (res.rates[si][m] - mean) * (res.rates[si][m] - mean);
      const double std_err =
          n_ok > 1 ? std::sqrt(ss / static_cast<double>(n_ok - 1) / static_cast<double>(n_ok))
                   : 0.0;
      report.rows.push_back({cfg.strategies[si], cfg.snr_grid_db[m], mean, std_err,
                             n_ok, n_redrawn});
    }
  }
  return report;
}

}  // namespace cdiquant
