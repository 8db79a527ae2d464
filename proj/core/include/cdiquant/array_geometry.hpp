#pragma once

#include <utility>
#include <vector>

#include "cdiquant/linalg.hpp"

namespace cdiquant {

enum class ArrayKind { Ura, Ucca };

// A ray's direction: theta is the azimuth-type angle, phi the elevation-type
// angle, both in radians. No range restriction; the responses only use
// cosines, which wrap naturally.
struct RayAngles {
  double theta = 0.0;
  double phi = 0.0;
};

// BS array description. Spacings and radii are stored pre-normalized by the
// carrier wavelength, so the wavelength never appears at runtime.
struct ArrayGeometry {
  ArrayKind kind = ArrayKind::Ura;

  // URA
  int n_h = 1;
  int n_v = 1;
  double d_h = 0.5;
  double d_v = 0.5;

  // UCCA: n_rings rings of n_per_ring elements; radii strictly increasing.
  int n_rings = 0;
  int n_per_ring = 0;
  std::vector<double> radii;

  static ArrayGeometry ura(int n_h, int n_v, double d_h = 0.5, double d_v = 0.5);
  static ArrayGeometry ucca(int n_rings, int n_per_ring, std::vector<double> radii);

  int element_count() const;
  void validate() const;  // throws std::invalid_argument
};

// Horizontal and vertical subarray responses of a URA:
// a_h[k] = exp(j*2*pi*d_h*k*cos(theta)), a_v[k] = exp(j*2*pi*d_v*k*cos(phi)).
std::pair<VecC, VecC> ura_subarray_responses(const RayAngles& angles,
                                             const ArrayGeometry& geom);

// Full array response. URA: kron(a_v, a_h), which equals the column-major
// vectorization of a_h * a_v^T. UCCA: concatenation over the L radial
// directions phi_l = 2*pi*l/L of per-ring phases
// exp(j*2*pi*d_j*cos(phi - phi_l)*cos(theta)), rings innermost.
VecC array_response(const RayAngles& angles, const ArrayGeometry& geom);

// Rank-1 matrix form a_h * a_v^T of a single URA ray response.
MatC ray_response_matrix(const RayAngles& angles, const ArrayGeometry& geom);

}  // namespace cdiquant
