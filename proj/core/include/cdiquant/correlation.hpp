#pragma once

#include <vector>

#include "cdiquant/linalg.hpp"

namespace cdiquant {

// Statistical information consumed by the joint codeword structure:
// column-orthonormal sub-direction bases and the nonnegative power-coupling
// amplitudes between them. Sizes carry the truncation ranks.
struct JointStatistics {
  MatC u_h;       // N_h x r_h
  MatC u_v;       // N_v x r_v
  MatR coupling;  // r_h x r_v

  int rank_h() const { return static_cast<int>(u_h.cols()); }
  int rank_v() const { return static_cast<int>(u_v.cols()); }
};

// Full statistical description of one user's channel: the global correlation
// matrix, the two sub-correlations with their eigenstructure, the power
// coupling and the energy-rule truncation ranks.
struct CorrelationSet {
  MatC r;           // N_t x N_t
  MatC r_h;         // N_h x N_h
  MatC r_v;         // N_v x N_v
  MatC u_h;         // unitary, descending eigenvalues
  MatC u_v;
  VecR lambda_h;    // descending
  VecR lambda_v;
  MatR coupling;    // N_h x N_v, nonnegative
  int rank_h = 0;
  int rank_v = 0;

  int n_h() const { return static_cast<int>(r_h.rows()); }
  int n_v() const { return static_cast<int>(r_v.rows()); }

  JointStatistics full_statistics() const;
  JointStatistics truncated_statistics() const;                  // energy-rule ranks
  JointStatistics truncated_statistics(int r_h_, int r_v_) const;
};

// (1/S) sum h_s h_s^H, symmetrized. Throws std::invalid_argument on empty input.
MatC sample_covariance(const std::vector<VecC>& samples);

struct SubCorrelations {
  MatC r_h;  // mean of H H^H
  MatC r_v;  // mean of H^T H^*
  Eigensystem eig_h;
  Eigensystem eig_v;
};
SubCorrelations sub_correlations(const std::vector<MatC>& samples);

// Power-coupling amplitudes: lambda_t = diag((U_v (x) U_h)^H R (U_v (x) U_h))
// clipped at zero; the returned matrix is the column-major fold of
// sqrt(lambda_t), i.e. coupling(i,j) = sqrt(E|u_i^H H v_j^*|^2).
// Throws numerical_error if R is indefinite beyond 1e-10 * trace.
MatR power_coupling(const MatC& r, const MatC& u_h, const MatC& u_v);

// Nearest Kronecker product min ||R - B (x) C||_F over Hermitian PSD factors:
// R is rearranged into an N_v^2 x N_h^2 matrix whose rows are vec(R_block)
// in column-major block order, the dominant singular triple gives
// vec(B) = sqrt(s1) u1 and vec(C) = sqrt(s1) conj(v1), the shared phase is
// fixed so trace(C) is real positive, and both factors are symmetrized and
// clipped to the PSD cone. residual = ||R - B (x) C||_F.
struct KroneckerFactors {
  MatC b;  // N_v x N_v
  MatC c;  // N_h x N_h
  double residual = 0.0;
};
KroneckerFactors nearest_kronecker(const MatC& r, int n_h, int n_v);

// H_t = U_h^H H U_v^*; Frobenius norm preserving for unitary factors.
MatC transform_to_core(const MatC& h_matrix, const MatC& u_h, const MatC& u_v);

// R_hat = (U_v (x) U_h) diag(vec(coupling o coupling)) (U_v (x) U_h)^H.
// When the reference R is supplied, objective = ||R - R_hat||_F and
// offdiag_energy = ||off((U_v (x) U_h)^H R (U_v (x) U_h))||_F, the part of
// the objective no diagonal core can remove.
struct Reconstruction {
  MatC r_hat;
  double objective = -1.0;
  double offdiag_energy = -1.0;
};
Reconstruction reconstruct_r(const MatC& u_h, const MatC& u_v, const MatR& coupling);
Reconstruction reconstruct_r(const MatC& u_h, const MatC& u_v, const MatR& coupling,
                             const MatC& r);

// Smallest r with sum_{i<=r} values[i] / sum(values) > threshold; falls back
// to the full length when no prefix exceeds it (e.g. threshold = 1).
int truncation_rank(const VecR& values_descending, double energy_threshold);

// Leading-direction truncation of a correlation set at the given energy
// threshold: ranks via truncation_rank, bases as leading columns, coupling
// as the leading block.
JointStatistics truncate(const CorrelationSet& corr, double energy_threshold);

// Streaming accumulation of R (and, when the fold is known, R_h and R_v)
// over channel realizations. Accumulation is an order-independent sum.
class CorrelationAccumulator {
 public:
  explicit CorrelationAccumulator(int dim);        // R only (fold chosen later)
  CorrelationAccumulator(int n_h, int n_v);        // R, R_h, R_v

  void add(const VecC& h);
  long count() const { return count_; }

  enum class FactorRoute {
    SubCorrelation,    // R_h = E{H H^H}, R_v = E{H^T H^*}; requires a fold
    NearestKronecker,  // factors from nearest_kronecker of R
  };

  // Builds the full correlation set. For NearestKronecker without a fixed
  // fold, the (n_h, n_v) factor pair is chosen by exhaustive search over
  // nontrivial factorizations of the dimension, minimizing the residual.
  CorrelationSet finalize(FactorRoute route, double energy_threshold = 0.9) const;

 private:
  int dim_;
  int n_h_ = 0, n_v_ = 0;  // 0 when the fold is unknown
  long count_ = 0;
  MatC sum_r_, sum_rh_, sum_rv_;
};

// Residuals of nearest_kronecker for factor pairs of r's dimension.
struct FactorChoice {
  int n_h = 0;
  int n_v = 0;
  double residual = 0.0;
};
// All factor pairs (including the trivial 1 x N_t ones, which are always
// exact), ordered by increasing n_h.
std::vector<FactorChoice> kronecker_factor_scan(const MatC& r);
// Minimal-residual pair among nontrivial factorizations (both factors >= 2).
// Throws std::invalid_argument when the dimension has none (prime).
FactorChoice choose_factorization(const MatC& r);

}  // namespace cdiquant
