#include "cdiquant/validation.hpp"

#include <cmath>
#include <cstdio>

#include "cdiquant/correlation.hpp"
#include "cdiquant/rng.hpp"

namespace cdiquant {

namespace {

constexpr std::uint64_t kStreamValidate = 11;

std::string format_stat(double statistic, double threshold) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "statistic %.4g vs threshold %.4g", statistic, threshold);
  return buf;
}

// First and second moments of a complex vector stream.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(Eigen::Index dim)
      : sum_(VecC::Zero(dim)), sum_outer_(MatC::Zero(dim, dim)) {}

  void add(const VecC& x) {
    sum_ += x;
    sum_outer_ += x * x.adjoint();
    ++n_;
  }

  MatC covariance() const {
    const VecC mean = sum_ / static_cast<double>(n_);
    return sum_outer_ / static_cast<double>(n_) - mean * mean.adjoint();
  }

 private:
  VecC sum_;
  MatC sum_outer_;
  long n_ = 0;
};

// Largest |rho_pq| over index pairs accepted by the mask.
template <typename Mask>
double max_correlation(const MatC& cov, Mask&& accept) {
  double best = 0.0;
  for (Eigen::Index p = 0; p < cov.rows(); ++p) {
    for (Eigen::Index q = p + 1; q < cov.cols(); ++q) {
      if (!accept(p, q)) continue;
      const double denom = std::sqrt(cov(p, p).real() * cov(q, q).real());
      if (!(denom > 0.0)) continue;
      best = std::max(best, std::abs(cov(p, q)) / denom);
    }
  }
  return best;
}

struct SuiteStats {
  CorrelationSet cs;
  int fold_h = 0;
  int fold_v = 0;
};

// Pass 1 of a suite: accumulate the correlation structure over one-shot
// ensemble draws. The same derived seeds reproduce the samples in pass 2.
SuiteStats collect_statistics(const ArrayGeometry& geom, const ScenarioConfig& scenario,
                              long samples, std::uint64_t seed) {
  const bool is_ura = geom.kind == ArrayKind::Ura;
  CorrelationAccumulator acc = is_ura
                                   ? CorrelationAccumulator(geom.n_h, geom.n_v)
                                   : CorrelationAccumulator(geom.element_count());
  for (long s = 0; s < samples; ++s) {
    const RaySet rays = draw_rayset(scenario, derive_seed(seed, kStreamValidate, s));
    acc.add(realize_channel_vector(rays, geom));
  }
  SuiteStats out;
  out.cs = acc.finalize(is_ura ? CorrelationAccumulator::FactorRoute::SubCorrelation
                               : CorrelationAccumulator::FactorRoute::NearestKronecker);
  out.fold_h = out.cs.n_h();
  out.fold_v = out.cs.n_v();
  return out;
}

template <typename Body>
void replay_samples(const ArrayGeometry& geom, const ScenarioConfig& scenario,
                    long samples, std::uint64_t seed, int fold_h, int fold_v, Body&& body) {
  for (long s = 0; s < samples; ++s) {
    const RaySet rays = draw_rayset(scenario, derive_seed(seed, kStreamValidate, s));
    body(unvec_cm(realize_channel_vector(rays, geom), fold_h, fold_v));
  }
}

}  // namespace

ValidationOutcome validate_lemma1(const ArrayGeometry& geom, const ScenarioConfig& scenario,
                                  long samples, std::uint64_t seed, double threshold) {
  const SuiteStats st = collect_statistics(geom, scenario, samples, seed);
  const int nh = st.fold_h, nv = st.fold_v;

  MomentAccumulator col_acc(nh * nv);  // vec(H U_v^*): columns must decorrelate
  MomentAccumulator row_acc(nh * nv);  // vec(U_h^H H): rows must decorrelate
  replay_samples(geom, scenario, samples, seed, nh, nv, [&](const MatC& h) {
    col_acc.add(vec_cm(MatC(h * st.cs.u_v.conjugate())));
    row_acc.add(vec_cm(MatC(st.cs.u_h.adjoint() * h)));
  });

  const double col_stat = max_correlation(
      col_acc.covariance(), [nh](Eigen::Index p, Eigen::Index q) { return p / nh != q / nh; });
  const double row_stat = max_correlation(
      row_acc.covariance(), [nh](Eigen::Index p, Eigen::Index q) { return p % nh != q % nh; });

  ValidationOutcome out;
  out.name = "lemma1";
  out.statistic = std::max(col_stat, row_stat);
  out.threshold = threshold;
  out.report_only = geom.kind == ArrayKind::Ucca;
  out.pass = out.report_only || out.statistic < threshold;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max cross-column |rho| %.4g, max cross-row |rho| %.4g, threshold %.4g",
                col_stat, row_stat, threshold);
  out.detail = buf;
  return out;
}

ValidationOutcome validate_lemma3(const ArrayGeometry& geom, const ScenarioConfig& scenario,
                                  long samples, std::uint64_t seed, double threshold) {
  const SuiteStats st = collect_statistics(geom, scenario, samples, seed);
  const int nh = st.fold_h, nv = st.fold_v;

  MomentAccumulator acc(nh * nv);
  replay_samples(geom, scenario, samples, seed, nh, nv, [&](const MatC& h) {
    acc.add(vec_cm(transform_to_core(h, st.cs.u_h, st.cs.u_v)));
  });
  const double stat =
      max_correlation(acc.covariance(), [](Eigen::Index, Eigen::Index) { return true; });

  ValidationOutcome out;
  out.name = "lemma3";
  out.statistic = stat;
  out.threshold = threshold;
  // The decorrelation of the core matrix is only guaranteed for the URA;
  // for other arrays the statistic is reported without a verdict.
  out.report_only = geom.kind == ArrayKind::Ucca;
  out.pass = out.report_only || stat < threshold;
  out.detail = "max off-diagonal |rho| among vec(H_t) entries: " + format_stat(stat, threshold);
  return out;
}

ValidationOutcome validate_theorem1(const ArrayGeometry& geom, const ScenarioConfig& scenario,
                                    long samples, std::uint64_t seed, double threshold) {
  const SuiteStats st = collect_statistics(geom, scenario, samples, seed);
  const MatC f = kron(st.cs.u_v, st.cs.u_h) *
                 VecR(vec_cm(st.cs.coupling)).cast<cdouble>().asDiagonal();
  const double stat = (st.cs.r - f * f.adjoint()).norm() / st.cs.r.norm();

  ValidationOutcome out;
  out.name = "theorem1";
  out.statistic = stat;
  out.threshold = threshold;
  out.pass = stat < threshold;
  out.detail = "||R - F F^H||_F / ||R||_F: " + format_stat(stat, threshold);
  return out;
}

namespace {

MatC random_psd(int n, Rng& rng) {
  MatC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return hermitize(a * a.adjoint() / static_cast<double>(n));
}

int random_dim(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform01() * (hi - lo + 1));
}

// The stated rearrangement, rebuilt here as the oracle's own code path.
MatC rearrange_blocks(const MatC& r, int n_h, int n_v) {
  MatC rt(n_v * n_v, n_h * n_h);
  for (int j = 0; j < n_v; ++j)
    for (int i = 0; i < n_v; ++i)
      rt.row(j * n_v + i) =
          vec_cm(MatC(r.block(i * n_h, j * n_h, n_h, n_h))).transpose();
  return rt;
}

}  // namespace

std::vector<ValidationOutcome> validate_kronecker(int trials, int max_dim, std::uint64_t seed,
                                                  double exact_threshold,
                                                  double oracle_threshold) {
  Rng rng(seed);
  double worst_exact = 0.0;
  double worst_gap = 0.0;
  for (int t = 0; t < trials; ++t) {
    // Exact-recovery trial: R = B0 (x) C0 must decompose with ~zero residual.
    const int nv = random_dim(rng, 2, max_dim);
    const int nh = random_dim(rng, 2, max_dim);
    const MatC b0 = random_psd(nv, rng);
    const MatC c0 = random_psd(nh, rng);
    const MatC r = kron(b0, c0);
    const KroneckerFactors kf = nearest_kronecker(r, nh, nv);
    worst_exact = std::max(worst_exact, kf.residual / r.norm());

    // Oracle trial: residual^2 equals the trailing singular-value energy of
    // the rearranged matrix.
    const int gnv = random_dim(rng, 2, std::min(max_dim, 8));
    const int gnh = random_dim(rng, 2, std::min(max_dim, 8));
    const MatC g = random_psd(gnh * gnv, rng);
    const KroneckerFactors gk = nearest_kronecker(g, gnh, gnv);
    Eigen::JacobiSVD<MatC> svd(rearrange_blocks(g, gnh, gnv));
    double tail = 0.0;
    for (Eigen::Index i = 1; i < svd.singularValues().size(); ++i)
      tail += svd.singularValues()(i) * svd.singularValues()(i);
    worst_gap = std::max(worst_gap, std::abs(gk.residual * gk.residual - tail));
  }

  std::vector<ValidationOutcome> out(2);
  out[0].name = "kronecker-exact";
  out[0].statistic = worst_exact;
  out[0].threshold = exact_threshold;
  out[0].pass = worst_exact < exact_threshold;
  out[0].detail = "max relative residual on Kronecker-structured PSD inputs: " +
                  format_stat(worst_exact, exact_threshold);
  out[1].name = "kronecker-residual-oracle";
  out[1].statistic = worst_gap;
  out[1].threshold = oracle_threshold;
  out[1].pass = worst_gap <= oracle_threshold;
  out[1].detail = "max |residual^2 - trailing SVD energy| on generic PSD inputs: " +
                  format_stat(worst_gap, oracle_threshold);
  return out;
}

}  // namespace cdiquant
