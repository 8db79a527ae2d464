#include "cdiquant/codebooks.hpp"

#include <cmath>
#include <stdexcept>

#include "cdiquant/errors.hpp"
#include "cdiquant/rng.hpp"

namespace cdiquant {

namespace {

constexpr double kZeroNorm = 1e-12;

VecC normalized_or_throw(const VecC& v, const char* what) {
  const double n = v.norm();
  if (n < kZeroNorm) throw degenerate_error(what);
  return v / n;
}

}  // namespace

MatC Codebook::as_columns() const {
  if (entries.empty()) return {};
  const Eigen::Index d = entries.front().rows();
  MatC cols(d, static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].cols() != 1 || entries[i].rows() != d)
      throw std::invalid_argument("Codebook::as_columns: vector codewords required");
    cols.col(static_cast<Eigen::Index>(i)) = entries[i].col(0);
  }
  return cols;
}

Codebook rvq_codebook(int dim, int bits, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("rvq_codebook: dim must be >= 1");
  if (bits < 0 || bits > 24) throw std::invalid_argument("rvq_codebook: bits out of range");
  Rng rng(seed);
  Codebook cb;
  cb.kind = CodebookKind::Rvq;
  cb.bits = bits;
  const std::size_t count = std::size_t{1} << bits;
  cb.entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    VecC g(dim);
    double n = 0.0;
    do {
      for (int k = 0; k < dim; ++k) g(k) = rng.cnormal();
      n = g.norm();
    } while (n < kZeroNorm);
    cb.entries.push_back(g / n);
  }
  return cb;
}

Codebook dft_codebook(int n, int window, int bits) {
  if (n < 1) throw std::invalid_argument("dft_codebook: n must be >= 1");
  if (window < 1 || window > n)
    throw std::invalid_argument("dft_codebook: window must be in [1, n]");
  const int n_offsets = window == n ? 1 : n;
  std::size_t count;
  int q_count;
  if (bits < 0) {
    count = static_cast<std::size_t>(n_offsets);
    q_count = 1;
  } else {
    if (bits > 24) throw std::invalid_argument("dft_codebook: bits out of range");
    count = std::size_t{1} << bits;
    q_count = static_cast<int>((count + n_offsets - 1) / n_offsets);
  }

  Codebook cb;
  cb.kind = CodebookKind::Dft;
  cb.bits = bits < 0 ? 0 : bits;
  cb.entries.reserve(count);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t idx = 0; idx < count; ++idx) {
    const int q = static_cast<int>(idx) / n_offsets;
    const int m = static_cast<int>(idx) % n_offsets;
    MatC w(n, window);
    for (int col = 0; col < window; ++col) {
      // Fractional shift q/q_count is shared by all columns of a codeword,
      // so the columns stay orthonormal.
      const double freq = static_cast<double>((m + col) % n) +
                          static_cast<double>(q) / static_cast<double>(q_count);
      for (int k = 0; k < n; ++k)
        w(k, col) = scale * std::polar(1.0, -2.0 * M_PI * k * freq / n);
    }
    cb.entries.push_back(std::move(w));
  }
  return cb;
}

VecC global_rotated_codeword(const MatC& r, const VecC& g0) {
  if (r.rows() != r.cols() || r.rows() != g0.size())
    throw std::invalid_argument("global_rotated_codeword: dimension mismatch");
  return normalized_or_throw(hermitian_sqrt_psd(r) * g0,
                             "global_rotated_codeword: base codeword in null space");
}

VecC joint_codeword(const JointStatistics& stats, const MatC& g) {
  if (g.rows() != stats.coupling.rows() || g.cols() != stats.coupling.cols())
    throw std::invalid_argument("joint_codeword: instantaneous codeword shape mismatch");
  const MatC q = kron(stats.u_v, stats.u_h);
  const VecC masked = vec_cm(MatC(stats.coupling.cast<cdouble>().cwiseProduct(g)));
  return normalized_or_throw(q * masked, "joint_codeword: coupling-masked codeword is zero");
}

MatC joint_codeword_matrix(const JointStatistics& stats, const MatC& g) {
  if (g.rows() != stats.coupling.rows() || g.cols() != stats.coupling.cols())
    throw std::invalid_argument("joint_codeword_matrix: instantaneous codeword shape mismatch");
  const MatC masked = stats.coupling.cast<cdouble>().cwiseProduct(g);
  const MatC c = stats.u_h * masked * stats.u_v.transpose();
  const double n = c.norm();
  if (n < kZeroNorm)
    throw degenerate_error("joint_codeword_matrix: coupling-masked codeword is zero");
  return c / n;
}

std::vector<VecC> joint_codeword_multi(const JointStatistics& stats,
                                       const std::vector<MatC>& g_list) {
  if (g_list.empty()) throw std::invalid_argument("joint_codeword_multi: empty codeword list");
  const MatC q = kron(stats.u_v, stats.u_h);
  std::vector<VecC> out;
  out.reserve(g_list.size());
  for (const MatC& g : g_list) {
    if (g.rows() != stats.coupling.rows() || g.cols() != stats.coupling.cols())
      throw std::invalid_argument("joint_codeword_multi: codeword shape mismatch");
    const VecC masked = vec_cm(MatC(stats.coupling.cast<cdouble>().cwiseProduct(g)));
    out.push_back(normalized_or_throw(q * masked,
                                      "joint_codeword_multi: coupling-masked codeword is zero"));
  }
  return out;
}

MatC independent_codeword(const MatC& r_h, const MatC& r_v,
                          const VecC& c_h, const VecC& c_v) {
  if (r_h.rows() != c_h.size() || r_v.rows() != c_v.size())
    throw std::invalid_argument("independent_codeword: dimension mismatch");
  const VecC ch = normalized_or_throw(hermitian_sqrt_psd(r_h) * c_h,
                                      "independent_codeword: horizontal codeword degenerate");
  const VecC cv = normalized_or_throw(hermitian_sqrt_psd(r_v) * c_v,
                                      "independent_codeword: vertical codeword degenerate");
  return ch * cv.transpose();
}

QuantizerResult quantize(const VecC& h_bar, const Codebook& codebook) {
  if (codebook.entries.empty()) throw std::invalid_argument("quantize: empty codebook");
  QuantizerResult best;
  for (std::size_t i = 0; i < codebook.entries.size(); ++i) {
    const MatC& entry = codebook.entries[i];
    if (entry.cols() != 1 || entry.rows() != h_bar.size())
      throw std::invalid_argument("quantize: codeword dimension mismatch");
    const double a = std::norm(entry.col(0).dot(h_bar));
    if (a > best.alignment || best.index < 0) {
      best.index = static_cast<int>(i);
      best.alignment = a;
    }
  }
  best.distortion = 1.0 - best.alignment;
  return best;
}

QuantizerResult quantize_columns(const VecC& h_bar, const MatC& codeword_columns) {
  if (codeword_columns.cols() == 0) throw std::invalid_argument("quantize_columns: empty codebook");
  if (codeword_columns.rows() != h_bar.size())
    throw std::invalid_argument("quantize_columns: dimension mismatch");
  const VecC inner = codeword_columns.adjoint() * h_bar;
  QuantizerResult best;
  for (Eigen::Index i = 0; i < inner.size(); ++i) {
    const double a = std::norm(inner(i));
    if (a > best.alignment || best.index < 0) {
      best.index = static_cast<int>(i);
      best.alignment = a;
    }
  }
  best.distortion = 1.0 - best.alignment;
  return best;
}

MatC quantize_statistics_dft(const MatC& u, int dft_bits) {
  const int n = static_cast<int>(u.rows());
  const int r = static_cast<int>(u.cols());
  if (r < 1 || r > n) throw std::invalid_argument("quantize_statistics_dft: need 1 <= r <= n");
  const Codebook cb = dft_codebook(n, r, dft_bits);
  const MatC* best = nullptr;
  double best_align = -1.0;
  for (const MatC& entry : cb.entries) {
    const double a = (entry.adjoint() * u).squaredNorm();
    if (a > best_align) {
      best_align = a;
      best = &entry;
    }
  }
  return *best;
}

MatR quantize_coupling_rvq(const MatR& coupling, int bits, std::uint64_t seed) {
  if (coupling.size() == 0) throw std::invalid_argument("quantize_coupling_rvq: empty coupling");
  if (bits < 0 || bits > 24) throw std::invalid_argument("quantize_coupling_rvq: bits out of range");
  const VecR lambda = vec_cm(coupling);
  const double scale = lambda.norm();
  if (scale < kZeroNorm) throw degenerate_error("quantize_coupling_rvq: zero coupling matrix");
  const VecR target = lambda / scale;

  Rng rng(seed);
  const Eigen::Index d = lambda.size();
  VecR best(d);
  double best_score = -1.0;
  const std::size_t count = std::size_t{1} << bits;
  VecR cand(d);
  for (std::size_t i = 0; i < count; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) cand(k) = std::abs(rng.cnormal());
    const double n = cand.norm();
    if (n < kZeroNorm) continue;
    cand /= n;
    const double score = cand.dot(target);
    if (score > best_score) {
      best_score = score;
      best = cand;
    }
  }
  return unvec_cm(VecR(best * scale), coupling.rows(), coupling.cols());
}

MatC rotated_codebook_columns(const MatC& rotation, const MatC& base_columns) {
  if (rotation.cols() != base_columns.rows())
    throw std::invalid_argument("rotated_codebook_columns: dimension mismatch");
  MatC out = rotation * base_columns;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n < kZeroNorm)
      throw degenerate_error("rotated_codebook_columns: codeword rotated into null space");
    out.col(j) /= n;
  }
  return out;
}

}  // namespace cdiquant
