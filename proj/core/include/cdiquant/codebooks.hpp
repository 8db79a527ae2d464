#pragma once

#include <cstdint>
#include <vector>

#include "cdiquant/correlation.hpp"
#include "cdiquant/linalg.hpp"

namespace cdiquant {

enum class CodebookKind { Rvq, Dft, Rotated, Joint, Independent };

// A finite set of codewords. Vector codewords are stored as n x 1 matrices;
// DFT subspace codewords are n x window column-orthonormal matrices.
struct Codebook {
  CodebookKind kind = CodebookKind::Rvq;
  int bits = 0;
  std::vector<MatC> entries;

  std::size_t size() const { return entries.size(); }
  int dim() const { return entries.empty() ? 0 : static_cast<int>(entries.front().rows()); }

  // Vector codewords stacked as columns of a dim x size matrix.
  MatC as_columns() const;
};

struct QuantizerResult {
  int index = -1;
  double alignment = 0.0;   // |c^H h_bar|^2
  double distortion = 1.0;  // 1 - alignment
};

// 2^bits i.i.d. isotropic unit vectors (normalized CN draws); deterministic
// per seed.
Codebook rvq_codebook(int dim, int bits, std::uint64_t seed);

// Codewords of `window` cyclically adjacent columns of the unitary n-point
// DFT matrix (entries of modulus 1/sqrt(n)). With bits < 0 the base set is
// produced: one codeword per starting offset (a single codeword when
// window == n, since all offsets then span the same full basis). With
// bits >= 0 the 2^bits budget is filled by progressive per-column phase
// rotations (oversampled DFT): entry index = q * n_offsets + offset, so the
// base set comes first.
Codebook dft_codebook(int n, int window, int bits = -1);

// c_g = normalize(R^{1/2} g0). Throws degenerate_error when g0 lies in the
// null space of R^{1/2}.
VecC global_rotated_codeword(const MatC& r, const VecC& g0);

// Joint codeword, vector form: normalize((U_v (x) U_h) diag(vec(coupling)) vec(G)).
VecC joint_codeword(const JointStatistics& stats, const MatC& g);

// Joint codeword, matrix form: U_h (coupling o G) U_v^T, unit Frobenius norm.
// vec of this equals joint_codeword.
MatC joint_codeword_matrix(const JointStatistics& stats, const MatC& g);

// Multi-antenna extension: the shared rotation applied to each per-antenna
// instantaneous codeword, each result normalized.
std::vector<VecC> joint_codeword_multi(const JointStatistics& stats,
                                       const std::vector<MatC>& g_list);

// C_I = normalize(R_h^{1/2} c_h) * normalize(R_v^{1/2} c_v)^T; always rank 1
// with unit Frobenius norm.
MatC independent_codeword(const MatC& r_h, const MatC& r_v,
                          const VecC& c_h, const VecC& c_v);

// argmax |c^H h_bar|^2 over vector codewords; ties break to the lowest index.
QuantizerResult quantize(const VecC& h_bar, const Codebook& codebook);

// Same selection rule over codewords stored as matrix columns.
QuantizerResult quantize_columns(const VecC& h_bar, const MatC& codeword_columns);

// Picks the dft_bits-budget DFT codebook entry (window = u.cols()) with the
// largest subspace alignment ||C^H U||_F^2.
MatC quantize_statistics_dft(const MatC& u, int dft_bits);

// Quantizes the power-coupling matrix against a 2^bits RVQ codebook drawn on
// the nonnegative orthant (elementwise modulus of CN draws, normalized);
// the selected codeword is rescaled to the input's Frobenius norm.
MatR quantize_coupling_rvq(const MatR& coupling, int bits, std::uint64_t seed);

// Applies a rotation to every base codeword (columns) and normalizes each
// result. Throws degenerate_error if any rotated codeword collapses to zero.
MatC rotated_codebook_columns(const MatC& rotation, const MatC& base_columns);

}  // namespace cdiquant
