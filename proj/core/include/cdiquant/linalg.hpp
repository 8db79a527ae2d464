#pragma once

#include <Eigen/Dense>
#include <complex>

namespace cdiquant {

using cdouble = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using VecR = Eigen::VectorXd;
using MatR = Eigen::MatrixXd;

// Kronecker product; out((i*b.rows+k), (j*b.cols+l)) = a(i,j)*b(k,l).
MatC kron(const MatC& a, const MatC& b);

// Column-major vectorization and its inverse. Every reshape in the library
// follows this convention, so vec(A*B*C^T) = (C (x) A) vec(B) holds as-is.
VecC vec_cm(const MatC& m);
VecR vec_cm(const MatR& m);
MatC unvec_cm(const VecC& v, Eigen::Index rows, Eigen::Index cols);
MatR unvec_cm(const VecR& v, Eigen::Index rows, Eigen::Index cols);

// (M + M^H)/2
MatC hermitize(const MatC& m);

struct Eigensystem {
  MatC vectors;  // unitary; columns ordered by descending eigenvalue
  VecR values;   // descending
};

// Hermitian eigendecomposition with eigenvalues in descending order. Each
// eigenvector is rotated so its largest-magnitude entry is real positive,
// which makes the decomposition deterministic across runs and platforms.
Eigensystem eigh_descending(const MatC& hermitian);

// PSD square root via eigendecomposition; eigenvalues below
// clip_rel * |trace| are treated as zero.
MatC hermitian_sqrt_psd(const MatC& hermitian, double clip_rel = 1e-10);

// Clips negative eigenvalues of a Hermitian matrix to zero.
MatC clip_to_psd(const MatC& hermitian);

// Number of singular values above rel_tol times the largest.
Eigen::Index numerical_rank(const MatC& m, double rel_tol = 1e-10);

}  // namespace cdiquant
