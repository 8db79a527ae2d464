#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cdiquant/channel_model.hpp"
#include "cdiquant/codebooks.hpp"
#include "cdiquant/errors.hpp"
#include "cdiquant/rng.hpp"

using namespace cdiquant;

namespace {

MatC random_psd(int n, Rng& rng) {
  MatC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return hermitize(a * a.adjoint() / n);
}

VecC random_unit(int n, Rng& rng) {
  VecC v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cnormal();
  return v / v.norm();
}

}  // namespace

TEST_CASE("RVQ codebook basics") {
  const Codebook one = rvq_codebook(4, 0, 1);
  CHECK(one.size() == 1);
  const Codebook cb = rvq_codebook(6, 5, 2);
  CHECK(cb.size() == 32);
  for (const MatC& c : cb.entries)
    CHECK(c.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));

  // Deterministic per seed, distinct across seeds.
  const Codebook again = rvq_codebook(6, 5, 2);
  CHECK((cb.entries[7] - again.entries[7]).norm() == 0.0);
  const Codebook other = rvq_codebook(6, 5, 3);
  CHECK((cb.entries[0] - other.entries[0]).norm() > 1e-8);
}

TEST_CASE("scalar codebooks are phase-only: alignment is always one") {
  Rng rng(4);
  const Codebook cb = rvq_codebook(1, 3, 9);
  for (int t = 0; t < 10; ++t) {
    const VecC h = random_unit(1, rng);
    CHECK(quantize(h, cb).alignment == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("2-point DFT base codebook") {
  const Codebook cb = dft_codebook(2, 1);
  REQUIRE(cb.size() == 2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(cb.entries[0](0, 0) - cdouble(s, 0)) < 1e-14);
  CHECK(std::abs(cb.entries[0](1, 0) - cdouble(s, 0)) < 1e-14);
  CHECK(std::abs(cb.entries[1](0, 0) - cdouble(s, 0)) < 1e-14);
  CHECK(std::abs(cb.entries[1](1, 0) - cdouble(-s, 0)) < 1e-14);
}

TEST_CASE("DFT codewords have modulus 1/sqrt(n) and orthonormal columns") {
  const Codebook cb = dft_codebook(8, 3, 8);
  CHECK(cb.size() == 256);
  const double expected = 1.0 / std::sqrt(8.0);
  for (std::size_t i : {std::size_t{0}, std::size_t{17}, std::size_t{255}}) {
    const MatC& w = cb.entries[i];
    CHECK((w.cwiseAbs().array() - expected).abs().maxCoeff() < 1e-12);
    CHECK((w.adjoint() * w - MatC::Identity(3, 3)).norm() < 1e-10);
  }
}

TEST_CASE("full-window DFT codebook is a single complete basis") {
  const Codebook cb = dft_codebook(4, 4);
  REQUIRE(cb.size() == 1);
  Rng rng(5);
  const MatC u = eigh_descending(random_psd(4, rng)).vectors;
  CHECK((cb.entries[0].adjoint() * u).squaredNorm() == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("globally rotated codeword") {
  VecC g0(2);
  g0 << 1, 1;
  g0 /= std::sqrt(2.0);
  CHECK((global_rotated_codeword(MatC::Identity(2, 2), g0) - g0).norm() < 1e-14);

  VecC d(2);
  d << 4, 0;
  const VecC c = global_rotated_codeword(MatC(d.asDiagonal()), g0);
  CHECK(std::abs(c(0) - cdouble(1, 0)) < 1e-14);
  CHECK(std::abs(c(1)) < 1e-14);

  // g0 entirely inside the null space.
  VecC g_null(2);
  g_null << 0, 1;
  CHECK_THROWS_AS(global_rotated_codeword(MatC(d.asDiagonal()), g_null), degenerate_error);
}

TEST_CASE("rotated codeword agrees with an independent eigen-route square root") {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const MatC r = random_psd(4, rng);
    const VecC g0 = random_unit(4, rng);
    const VecC c = global_rotated_codeword(r, g0);

    Eigen::SelfAdjointEigenSolver<MatC> es(r);
    const MatC root = es.eigenvectors() *
                      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                      es.eigenvectors().adjoint();
    VecC expected = root * g0;
    expected /= expected.norm();
    CHECK((c - expected).norm() < 1e-10);
  }
}

TEST_CASE("joint codeword: identity statistics reduce to the normalized G") {
  JointStatistics js{MatC::Identity(2, 2), MatC::Identity(2, 2), MatR::Ones(2, 2)};
  Rng rng(7);
  MatC g(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = rng.cnormal();
  const MatC c = joint_codeword_matrix(js, g);
  CHECK((c - g / g.norm()).norm() < 1e-12);
}

TEST_CASE("rank-one joint codeword is the outer product of leading directions") {
  Rng rng(8);
  const MatC u_h = eigh_descending(random_psd(3, rng)).vectors.leftCols(1);
  const MatC u_v = eigh_descending(random_psd(4, rng)).vectors.leftCols(1);
  JointStatistics js{u_h, u_v, MatR::Ones(1, 1)};
  MatC g(1, 1);
  g(0, 0) = cdouble(0.3, -0.2);
  const MatC c = joint_codeword_matrix(js, g);
  CHECK(numerical_rank(c) == 1);
  CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const MatC expected = u_h.col(0) * u_v.col(0).transpose();
  // Same direction up to the phase of g.
  CHECK(std::abs(std::abs((vec_cm(c).adjoint() * vec_cm(expected))(0, 0)) - 1.0) < 1e-10);
}

TEST_CASE("vec and matrix forms of the joint codeword agree") {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const MatC u_h = eigh_descending(random_psd(4, rng)).vectors.leftCols(2);
    const MatC u_v = eigh_descending(random_psd(3, rng)).vectors.leftCols(2);
    MatR coupling(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) coupling(i, j) = std::abs(rng.normal()) + 0.05;
    JointStatistics js{u_h, u_v, coupling};
    MatC g(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = rng.cnormal();
    CHECK((joint_codeword(js, g) - vec_cm(joint_codeword_matrix(js, g))).norm() < 1e-12);
  }
  JointStatistics js{MatC::Identity(2, 2), MatC::Identity(2, 2), MatR::Zero(2, 2)};
  MatC g = MatC::Ones(2, 2);
  CHECK_THROWS_AS(joint_codeword(js, g), degenerate_error);
}

TEST_CASE("independent codeword basics") {
  VecC e1(2);
  e1 << 1, 0;
  const MatC c = independent_codeword(MatC::Identity(2, 2), MatC::Identity(2, 2), e1, e1);
  CHECK((c - (MatC(2, 2) << 1, 0, 0, 0).finished()).norm() < 1e-14);

  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const MatC r_h = random_psd(3, rng);
    const MatC r_v = random_psd(4, rng);
    const MatC ci = independent_codeword(r_h, r_v, random_unit(3, rng), random_unit(4, rng));
    CHECK(numerical_rank(ci) == 1);
    CHECK(ci.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("independent codeword matches the rank-one joint construction") {
  Rng rng(11);
  const MatC r_h = random_psd(3, rng);
  const MatC r_v = random_psd(2, rng);
  const VecC c_h = random_unit(3, rng);
  const VecC c_v = random_unit(2, rng);
  const MatC ci = independent_codeword(r_h, r_v, c_h, c_v);

  VecC dir_h = hermitian_sqrt_psd(r_h) * c_h;
  dir_h /= dir_h.norm();
  VecC dir_v = hermitian_sqrt_psd(r_v) * c_v;
  dir_v /= dir_v.norm();
  JointStatistics js{dir_h, dir_v, MatR::Ones(1, 1)};
  MatC g = MatC::Ones(1, 1);
  CHECK((vec_cm(ci) - joint_codeword(js, g)).norm() < 1e-12);
}

TEST_CASE("multi-antenna joint codewords share the rotation") {
  Rng rng(12);
  const MatC u_h = eigh_descending(random_psd(3, rng)).vectors.leftCols(2);
  const MatC u_v = eigh_descending(random_psd(3, rng)).vectors.leftCols(2);
  MatR coupling = MatR::Ones(2, 2);
  JointStatistics js{u_h, u_v, coupling};
  MatC g1(2, 2), g2(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      g1(i, j) = rng.cnormal();
      g2(i, j) = rng.cnormal();
    }
  const std::vector<VecC> multi = joint_codeword_multi(js, {g1, g2, g1});
  REQUIRE(multi.size() == 3);
  CHECK((multi[0] - joint_codeword(js, g1)).norm() < 1e-14);
  CHECK((multi[1] - joint_codeword(js, g2)).norm() < 1e-14);
  CHECK((multi[2] - multi[0]).norm() == 0.0);
  for (const VecC& c : multi) CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quantizer selects exact matches and basis vectors") {
  Rng rng(13);
  Codebook cb = rvq_codebook(4, 3, 21);
  const VecC target = cb.entries[5].col(0);
  const QuantizerResult qr = quantize(target, cb);
  CHECK(qr.index == 5);
  CHECK(qr.distortion == doctest::Approx(0.0).epsilon(1e-12));

  Codebook basis;
  basis.kind = CodebookKind::Rvq;
  basis.bits = 2;
  for (int k = 0; k < 4; ++k) {
    MatC e = MatC::Zero(4, 1);
    e(k, 0) = 1.0;
    basis.entries.push_back(e);
  }
  VecC e2 = VecC::Zero(4);
  e2(2) = 1.0;
  const QuantizerResult qb = quantize(e2, basis);
  CHECK(qb.index == 2);
  CHECK(qb.alignment == doctest::Approx(1.0));
}

TEST_CASE("quantizer equals a brute-force oracle and breaks ties low") {
  Rng rng(14);
  const Codebook cb = rvq_codebook(3, 6, 22);
  for (int t = 0; t < 50; ++t) {
    const VecC h = random_unit(3, rng);
    const QuantizerResult qr = quantize(h, cb);
    int best = -1;
    double best_a = -1.0;
    for (std::size_t i = 0; i < cb.size(); ++i) {
      const double a = std::norm(cb.entries[i].col(0).dot(h));
      if (a > best_a) {
        best_a = a;
        best = static_cast<int>(i);
      }
    }
    CHECK(qr.index == best);
    CHECK(qr.alignment == doctest::Approx(best_a).epsilon(1e-12));
  }

  // A duplicated best codeword must resolve to the lower index.
  Codebook dup;
  dup.kind = CodebookKind::Rvq;
  dup.bits = 1;
  MatC c0 = MatC::Zero(2, 1);
  c0(0, 0) = 1.0;
  dup.entries = {c0, c0};
  VecC h0(2);
  h0 << 1, 0;
  CHECK(quantize(h0, dup).index == 0);
}

TEST_CASE("alignment is phase invariant") {
  Rng rng(15);
  const Codebook cb = rvq_codebook(4, 5, 23);
  for (int t = 0; t < 20; ++t) {
    const VecC h = random_unit(4, rng);
    const QuantizerResult base = quantize(h, cb);
    const double alpha = rng.uniform(-M_PI, M_PI);
    const QuantizerResult rotated = quantize(std::polar(1.0, alpha) * h, cb);
    CHECK(rotated.index == base.index);
    CHECK(rotated.alignment == doctest::Approx(base.alignment).epsilon(1e-12));
  }
}

TEST_CASE("identity correlation makes the rotated codebook act like plain RVQ") {
  Rng rng(16);
  const Codebook cb = rvq_codebook(4, 6, 24);
  const MatC base = cb.as_columns();
  const MatC rotated = rotated_codebook_columns(hermitian_sqrt_psd(MatC::Identity(4, 4)), base);
  CHECK((rotated - base).norm() < 1e-12);
  for (int t = 0; t < 30; ++t) {
    const VecC h = random_unit(4, rng);
    CHECK(quantize_columns(h, rotated).index == quantize(h, cb).index);
  }
}

TEST_CASE("rotation factor from sampled statistics matches R^(1/2) in average alignment") {
  // URA statistics from the one-shot ensemble; the joint rotation
  // F = (U_v (x) U_h) diag(vec coupling) and the matrix square root of the
  // same sampled R quantize equally well on average.
  const ScenarioConfig sc = ScenarioConfig::simplified(20.0, 6, 8);
  const ArrayGeometry geom = ArrayGeometry::ura(2, 2);
  CorrelationAccumulator acc(2, 2);
  for (long s = 0; s < 20000; ++s)
    acc.add(realize_channel_vector(draw_rayset(sc, derive_seed(91, 0, s)), geom));
  const CorrelationSet cs = acc.finalize(CorrelationAccumulator::FactorRoute::SubCorrelation);

  CHECK((cs.r - kron(cs.u_v, cs.u_h) *
                    VecR(vec_cm(cs.coupling)).cast<cdouble>().asDiagonal() *
                    VecR(vec_cm(cs.coupling)).cast<cdouble>().asDiagonal() *
                    kron(cs.u_v, cs.u_h).adjoint())
            .norm() /
            cs.r.norm() <
        0.1);

  const MatC base = rvq_codebook(4, 6, 25).as_columns();
  const MatC cols_f = rotated_codebook_columns(
      kron(cs.u_v, cs.u_h) * VecR(vec_cm(cs.coupling)).cast<cdouble>().asDiagonal(), base);
  const MatC cols_r = rotated_codebook_columns(hermitian_sqrt_psd(cs.r), base);

  double mean_f = 0.0, mean_r = 0.0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    const VecC h = cdi(realize_channel_vector(
        draw_rayset(sc, derive_seed(92, 0, t)), geom));
    mean_f += quantize_columns(h, cols_f).alignment;
    mean_r += quantize_columns(h, cols_r).alignment;
  }
  mean_f /= trials;
  mean_r /= trials;
  CHECK(std::abs(mean_f - mean_r) < 0.05);
}

TEST_CASE("DFT statistics quantizer returns exact members and matches brute force") {
  const Codebook cb = dft_codebook(4, 2, 6);
  const MatC member = cb.entries[0];
  const MatC picked = quantize_statistics_dft(member, 6);
  CHECK((picked - member).norm() < 1e-12);
  CHECK((picked.adjoint() * member).squaredNorm() == doctest::Approx(2.0).epsilon(1e-10));

  // Full-rank input: any complete DFT basis achieves alignment n.
  Rng rng(17);
  const MatC u = eigh_descending(random_psd(4, rng)).vectors;
  const MatC full = quantize_statistics_dft(u, 4);
  CHECK((full.adjoint() * u).squaredNorm() == doctest::Approx(4.0).epsilon(1e-10));

  for (int t = 0; t < 10; ++t) {
    const MatC subspace = eigh_descending(random_psd(4, rng)).vectors.leftCols(2);
    const MatC choice = quantize_statistics_dft(subspace, 6);
    double best = -1.0;
    const Codebook all = dft_codebook(4, 2, 6);
    for (const MatC& entry : all.entries)
      best = std::max(best, (entry.adjoint() * subspace).squaredNorm());
    CHECK((choice.adjoint() * subspace).squaredNorm() == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("coupling quantizer is nonnegative, scale preserving and deterministic") {
  Rng rng(18);
  MatR coupling(2, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) coupling(i, j) = std::abs(rng.normal()) + 0.01;
  const MatR q1 = quantize_coupling_rvq(coupling, 8, 31);
  const MatR q2 = quantize_coupling_rvq(coupling, 8, 31);
  CHECK((q1 - q2).norm() == 0.0);
  CHECK(q1.minCoeff() >= 0.0);
  CHECK(q1.norm() == doctest::Approx(coupling.norm()).epsilon(1e-12));
  // 8 bits on a 6-dim nonnegative direction lands reasonably close.
  const double cosine = vec_cm(q1).dot(vec_cm(coupling)) / (q1.norm() * coupling.norm());
  CHECK(cosine > 0.9);
  CHECK_THROWS_AS(quantize_coupling_rvq(MatR::Zero(2, 2), 4, 1), degenerate_error);
}

TEST_CASE("joint codeword ranks are bounded by the truncation ranks") {
  Rng rng(19);
  for (int t = 0; t < 30; ++t) {
    const MatC u_h = eigh_descending(random_psd(4, rng)).vectors.leftCols(2);
    const MatC u_v = eigh_descending(random_psd(4, rng)).vectors.leftCols(3);
    MatR coupling(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) coupling(i, j) = std::abs(rng.normal()) + 0.05;
    JointStatistics js{u_h, u_v, coupling};
    MatC g(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = rng.cnormal();
    const MatC c = joint_codeword_matrix(js, g);
    CHECK(numerical_rank(c) <= 2);
  }
}
