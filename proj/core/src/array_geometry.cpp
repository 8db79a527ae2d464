#include "cdiquant/array_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace cdiquant {

ArrayGeometry ArrayGeometry::ura(int n_h, int n_v, double d_h, double d_v) {
  ArrayGeometry g;
  g.kind = ArrayKind::Ura;
  g.n_h = n_h;
  g.n_v = n_v;
  g.d_h = d_h;
  g.d_v = d_v;
  g.validate();
  return g;
}

ArrayGeometry ArrayGeometry::ucca(int n_rings, int n_per_ring, std::vector<double> radii) {
  ArrayGeometry g;
  g.kind = ArrayKind::Ucca;
  g.n_rings = n_rings;
  g.n_per_ring = n_per_ring;
  g.radii = std::move(radii);
  g.validate();
  return g;
}

int ArrayGeometry::element_count() const {
  return kind == ArrayKind::Ura ? n_h * n_v : n_rings * n_per_ring;
}

void ArrayGeometry::validate() const {
  if (kind == ArrayKind::Ura) {
    if (n_h < 1 || n_v < 1)
      throw std::invalid_argument("URA requires n_h >= 1 and n_v >= 1");
    if (!(d_h > 0.0) || !(d_v > 0.0))
      throw std::invalid_argument("URA spacings must be positive");
  } else {
    if (n_rings < 1 || n_per_ring < 1)
      throw std::invalid_argument("UCCA requires n_rings >= 1 and n_per_ring >= 1");
    if (static_cast<int>(radii.size()) != n_rings)
      throw std::invalid_argument("UCCA radii count must equal n_rings");
    double prev = 0.0;
    for (double r : radii) {
      if (!(r > prev))
        throw std::invalid_argument("UCCA radii must be positive and strictly increasing");
      prev = r;
    }
  }
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// a[k] = w^k with w = exp(j*2*pi*spacing*cosine); incremental products keep
// every entry within a few ulp of unit modulus.
VecC phase_ramp(int n, double spacing, double cosine) {
  VecC a(n);
  a(0) = 1.0;
  const cdouble w = std::polar(1.0, kTwoPi * spacing * cosine);
  for (int k = 1; k < n; ++k) a(k) = a(k - 1) * w;
  return a;
}

}  // namespace

std::pair<VecC, VecC> ura_subarray_responses(const RayAngles& angles,
                                             const ArrayGeometry& geom) {
  if (geom.kind != ArrayKind::Ura)
    throw std::invalid_argument("ura_subarray_responses: URA geometry required");
  return {phase_ramp(geom.n_h, geom.d_h, std::cos(angles.theta)),
          phase_ramp(geom.n_v, geom.d_v, std::cos(angles.phi))};
}

VecC array_response(const RayAngles& angles, const ArrayGeometry& geom) {
  geom.validate();
  if (geom.kind == ArrayKind::Ura) {
    const auto [a_h, a_v] = ura_subarray_responses(angles, geom);
    VecC out(geom.n_h * geom.n_v);
    for (int kv = 0; kv < geom.n_v; ++kv)
      out.segment(static_cast<Eigen::Index>(kv) * geom.n_h, geom.n_h) = a_v(kv) * a_h;
    return out;
  }
  // UCCA: outer loop over radial directions, inner over rings.
  const int J = geom.n_rings;
  const int L = geom.n_per_ring;
  const double cos_theta = std::cos(angles.theta);
  VecC out(J * L);
  for (int l = 1; l <= L; ++l) {
    const double phi_l = kTwoPi * l / L;
    const double c = std::cos(angles.phi - phi_l) * cos_theta;
    for (int j = 0; j < J; ++j)
      out((l - 1) * J + j) = std::polar(1.0, kTwoPi * geom.radii[j] * c);
  }
  return out;
}

MatC ray_response_matrix(const RayAngles& angles, const ArrayGeometry& geom) {
  if (geom.kind != ArrayKind::Ura)
    throw std::invalid_argument("ray_response_matrix: URA geometry required");
  const auto [a_h, a_v] = ura_subarray_responses(angles, geom);
  return a_h * a_v.transpose();
}

}  // namespace cdiquant
