#include "cdiquant/linalg.hpp"

#include <stdexcept>

namespace cdiquant {

MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

VecC vec_cm(const MatC& m) {
  return Eigen::Map<const VecC>(m.data(), m.size());
}

VecR vec_cm(const MatR& m) {
  return Eigen::Map<const VecR>(m.data(), m.size());
}

MatC unvec_cm(const VecC& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw std::invalid_argument("unvec_cm: size mismatch");
  return Eigen::Map<const MatC>(v.data(), rows, cols);
}

MatR unvec_cm(const VecR& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw std::invalid_argument("unvec_cm: size mismatch");
  return Eigen::Map<const MatR>(v.data(), rows, cols);
}

MatC hermitize(const MatC& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitize: matrix must be square");
  return 0.5 * (m + m.adjoint());
}

namespace {

// Rotate each column so its largest-magnitude entry is real positive.
void fix_column_phases(MatC& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) m.col(j) *= std::conj(m(imax, j)) / best;
  }
}

}  // namespace

Eigensystem eigh_descending(const MatC& hermitian) {
  Eigen::SelfAdjointEigenSolver<MatC> solver(hermitian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh_descending: eigendecomposition failed");
  const Eigen::Index n = hermitian.rows();
  Eigensystem out;
  out.vectors.resize(n, n);
  out.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  fix_column_phases(out.vectors);
  return out;
}

MatC hermitian_sqrt_psd(const MatC& hermitian, double clip_rel) {
  const Eigensystem eig = eigh_descending(hermitian);
  const double floor = clip_rel * std::abs(hermitian.trace().real());
  VecR roots = eig.values;
  for (Eigen::Index i = 0; i < roots.size(); ++i)
    roots(i) = roots(i) > floor ? std::sqrt(roots(i)) : 0.0;
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

MatC clip_to_psd(const MatC& hermitian) {
  const Eigensystem eig = eigh_descending(hermitian);
  VecR clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
}

Eigen::Index numerical_rank(const MatC& m, double rel_tol) {
  Eigen::JacobiSVD<MatC> svd(m);
  const VecR& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

}  // namespace cdiquant
