#include "cdiquant/correlation.hpp"

#include <stdexcept>

#include "cdiquant/errors.hpp"

namespace cdiquant {

JointStatistics CorrelationSet::full_statistics() const {
  return {u_h, u_v, coupling};
}

JointStatistics CorrelationSet::truncated_statistics() const {
  return truncated_statistics(rank_h, rank_v);
}

JointStatistics CorrelationSet::truncated_statistics(int r_h_, int r_v_) const {
  if (r_h_ < 1 || r_h_ > n_h() || r_v_ < 1 || r_v_ > n_v())
    throw std::invalid_argument("truncated_statistics: ranks out of range");
  return {u_h.leftCols(r_h_), u_v.leftCols(r_v_), coupling.topLeftCorner(r_h_, r_v_)};
}

MatC sample_covariance(const std::vector<VecC>& samples) {
  if (samples.empty()) throw std::invalid_argument("sample_covariance: empty sample set");
  const Eigen::Index n = samples.front().size();
  MatC sum = MatC::Zero(n, n);
  for (const VecC& h : samples) {
    if (h.size() != n)
      throw std::invalid_argument("sample_covariance: inconsistent sample lengths");
    sum += h * h.adjoint();
  }
  return hermitize(sum / static_cast<double>(samples.size()));
}

SubCorrelations sub_correlations(const std::vector<MatC>& samples) {
  if (samples.empty()) throw std::invalid_argument("sub_correlations: empty sample set");
  const Eigen::Index nh = samples.front().rows();
  const Eigen::Index nv = samples.front().cols();
  MatC sum_h = MatC::Zero(nh, nh);
  MatC sum_v = MatC::Zero(nv, nv);
  for (const MatC& H : samples) {
    if (H.rows() != nh || H.cols() != nv)
      throw std::invalid_argument("sub_correlations: inconsistent sample shapes");
    sum_h += H * H.adjoint();
    sum_v += H.transpose() * H.conjugate();
  }
  SubCorrelations out;
  out.r_h = hermitize(sum_h / static_cast<double>(samples.size()));
  out.r_v = hermitize(sum_v / static_cast<double>(samples.size()));
  out.eig_h = eigh_descending(out.r_h);
  out.eig_v = eigh_descending(out.r_v);
  return out;
}

MatR power_coupling(const MatC& r, const MatC& u_h, const MatC& u_v) {
  const Eigen::Index nh = u_h.rows();
  const Eigen::Index nv = u_v.rows();
  if (u_h.cols() != nh || u_v.cols() != nv)
    throw std::invalid_argument("power_coupling: square unitary factors required");
  if (r.rows() != nh * nv || r.cols() != nh * nv)
    throw std::invalid_argument("power_coupling: dimension mismatch");
  const MatC q = kron(u_v, u_h);
  const VecC d = (q.adjoint() * r * q).diagonal();
  const double tol = 1e-10 * std::max(1.0, std::abs(r.trace().real()));
  VecR lambda_t(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double v = d(i).real();
    if (v < -tol)
      throw numerical_error("power_coupling: correlation matrix indefinite beyond tolerance");
    lambda_t(i) = std::max(v, 0.0);
  }
  return unvec_cm(VecR(lambda_t.cwiseSqrt()), nh, nv);
}

KroneckerFactors nearest_kronecker(const MatC& r, int n_h, int n_v) {
  if (n_h < 1 || n_v < 1) throw std::invalid_argument("nearest_kronecker: factors must be >= 1");
  if (r.rows() != r.cols() || r.rows() != static_cast<Eigen::Index>(n_h) * n_v)
    throw std::invalid_argument("nearest_kronecker: dimension mismatch");

  // Rearranged matrix: row (j*n_v + i) holds vec of the (i,j) block, blocks
  // taken in column-major order, so R = B (x) C maps to vec(B) vec(C)^T.
  MatC rt(static_cast<Eigen::Index>(n_v) * n_v, static_cast<Eigen::Index>(n_h) * n_h);
  for (int j = 0; j < n_v; ++j)
    for (int i = 0; i < n_v; ++i)
      rt.row(static_cast<Eigen::Index>(j) * n_v + i) =
          vec_cm(MatC(r.block(static_cast<Eigen::Index>(i) * n_h,
                              static_cast<Eigen::Index>(j) * n_h, n_h, n_h)))
              .transpose();

  Eigen::JacobiSVD<MatC> svd(rt, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double s1 = svd.singularValues()(0);
  const double root = std::sqrt(s1);
  MatC b = unvec_cm(VecC(root * svd.matrixU().col(0)), n_v, n_v);
  MatC c = unvec_cm(VecC(root * svd.matrixV().col(0).conjugate()), n_h, n_h);

  // The singular pair is defined up to a shared phase; pin it so trace(C)
  // is real positive.
  const cdouble tc = c.trace();
  if (std::abs(tc) > 0.0) {
    const cdouble phase = tc / std::abs(tc);
    c *= std::conj(phase);
    b *= phase;
  }
  b = clip_to_psd(hermitize(b));
  c = clip_to_psd(hermitize(c));

  KroneckerFactors out;
  out.b = b;
  out.c = c;
  out.residual = (r - kron(b, c)).norm();
  return out;
}

MatC transform_to_core(const MatC& h_matrix, const MatC& u_h, const MatC& u_v) {
  if (u_h.rows() != h_matrix.rows() || u_v.rows() != h_matrix.cols())
    throw std::invalid_argument("transform_to_core: dimension mismatch");
  return u_h.adjoint() * h_matrix * u_v.conjugate();
}

namespace {

Reconstruction reconstruct_impl(const MatC& u_h, const MatC& u_v, const MatR& coupling,
                                const MatC* r) {
  if (coupling.rows() != u_h.cols() || coupling.cols() != u_v.cols())
    throw std::invalid_argument("reconstruct_r: coupling shape mismatch");
  const MatC q = kron(u_v, u_h);
  const VecR lambda_t = vec_cm(MatR(coupling.array().square()));
  Reconstruction out;
  out.r_hat = hermitize(q * lambda_t.asDiagonal() * q.adjoint());
  if (r != nullptr) {
    if (r->rows() != q.rows() || r->cols() != q.rows())
      throw std::invalid_argument("reconstruct_r: reference dimension mismatch");
    out.objective = (*r - out.r_hat).norm();
    MatC t = q.adjoint() * (*r) * q;
    t.diagonal().setZero();
    out.offdiag_energy = t.norm();
  }
  return out;
}

}  // namespace

Reconstruction reconstruct_r(const MatC& u_h, const MatC& u_v, const MatR& coupling) {
  return reconstruct_impl(u_h, u_v, coupling, nullptr);
}

Reconstruction reconstruct_r(const MatC& u_h, const MatC& u_v, const MatR& coupling,
                             const MatC& r) {
  return reconstruct_impl(u_h, u_v, coupling, &r);
}

int truncation_rank(const VecR& values_descending, double energy_threshold) {
  if (!(energy_threshold > 0.0) || energy_threshold > 1.0)
    throw std::invalid_argument("truncation_rank: threshold must be in (0, 1]");
  const Eigen::Index n = values_descending.size();
  if (n == 0) throw std::invalid_argument("truncation_rank: empty spectrum");
  const double total = values_descending.sum();
  if (!(total > 0.0)) return 1;
  double cum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cum += values_descending(i);
    if (cum / total > energy_threshold) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(n);
}

JointStatistics truncate(const CorrelationSet& corr, double energy_threshold) {
  const int rh = truncation_rank(corr.lambda_h, energy_threshold);
  const int rv = truncation_rank(corr.lambda_v, energy_threshold);
  return corr.truncated_statistics(rh, rv);
}

CorrelationAccumulator::CorrelationAccumulator(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("CorrelationAccumulator: dim must be >= 1");
  sum_r_ = MatC::Zero(dim, dim);
}

CorrelationAccumulator::CorrelationAccumulator(int n_h, int n_v)
    : CorrelationAccumulator(n_h * n_v) {
  if (n_h < 1 || n_v < 1)
    throw std::invalid_argument("CorrelationAccumulator: fold must be positive");
  n_h_ = n_h;
  n_v_ = n_v;
  sum_rh_ = MatC::Zero(n_h, n_h);
  sum_rv_ = MatC::Zero(n_v, n_v);
}

void CorrelationAccumulator::add(const VecC& h) {
  if (h.size() != dim_) throw std::invalid_argument("CorrelationAccumulator: size mismatch");
  sum_r_ += h * h.adjoint();
  if (n_h_ > 0) {
    const MatC H = unvec_cm(h, n_h_, n_v_);
    sum_rh_ += H * H.adjoint();
    sum_rv_ += H.transpose() * H.conjugate();
  }
  ++count_;
}

CorrelationSet CorrelationAccumulator::finalize(FactorRoute route,
                                                double energy_threshold) const {
  if (count_ == 0) throw std::invalid_argument("CorrelationAccumulator: no samples");
  CorrelationSet cs;
  cs.r = hermitize(sum_r_ / static_cast<double>(count_));

  if (route == FactorRoute::SubCorrelation) {
    if (n_h_ == 0)
      throw std::invalid_argument("sub-correlation route requires a fold shape");
    cs.r_h = hermitize(sum_rh_ / static_cast<double>(count_));
    cs.r_v = hermitize(sum_rv_ / static_cast<double>(count_));
  } else {
    int nh = n_h_, nv = n_v_;
    if (nh == 0) {
      const FactorChoice best = choose_factorization(cs.r);
      nh = best.n_h;
      nv = best.n_v;
    }
    const KroneckerFactors kf = nearest_kronecker(cs.r, nh, nv);
    cs.r_h = kf.c;
    cs.r_v = kf.b;
  }

  const Eigensystem eh = eigh_descending(cs.r_h);
  const Eigensystem ev = eigh_descending(cs.r_v);
  cs.u_h = eh.vectors;
  cs.u_v = ev.vectors;
  cs.lambda_h = eh.values;
  cs.lambda_v = ev.values;
  cs.coupling = power_coupling(cs.r, cs.u_h, cs.u_v);
  cs.rank_h = truncation_rank(cs.lambda_h, energy_threshold);
  cs.rank_v = truncation_rank(cs.lambda_v, energy_threshold);
  return cs;
}

std::vector<FactorChoice> kronecker_factor_scan(const MatC& r) {
  if (r.rows() != r.cols() || r.rows() < 1)
    throw std::invalid_argument("kronecker_factor_scan: square matrix required");
  const int nt = static_cast<int>(r.rows());
  std::vector<FactorChoice> out;
  for (int nh = 1; nh <= nt; ++nh) {
    if (nt % nh != 0) continue;
    const int nv = nt / nh;
    out.push_back({nh, nv, nearest_kronecker(r, nh, nv).residual});
  }
  return out;
}

FactorChoice choose_factorization(const MatC& r) {
  const std::vector<FactorChoice> scan = kronecker_factor_scan(r);
  const FactorChoice* best = nullptr;
  for (const FactorChoice& fc : scan) {
    if (fc.n_h < 2 || fc.n_v < 2) continue;  // trivial pairs are always exact
    if (best == nullptr || fc.residual < best->residual) best = &fc;
  }
  if (best == nullptr)
    throw std::invalid_argument("choose_factorization: dimension has no nontrivial factor pair");
  return *best;
}

}  // namespace cdiquant
