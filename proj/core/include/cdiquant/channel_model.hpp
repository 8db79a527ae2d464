#pragma once

#include <cstdint>
#include <vector>

#include "cdiquant/array_geometry.hpp"
#include "cdiquant/linalg.hpp"

namespace cdiquant {

enum class ScenarioModel { Simplified, UMi3D, UMa3D };

// Clustered-ray scenario parameters. Angles/spreads are in degrees here; the
// generators convert to radians when composing ray directions.
struct ScenarioConfig {
  ScenarioModel model = ScenarioModel::Simplified;
  int n_clusters = 12;
  int n_rays = 20;

  double sigma_deg = 5.0;        // cluster-deviation std-dev (Simplified)
  double offset_rms_deg = 1.0;   // per-ray Laplacian offset RMS
  double azimuth_mean_range_deg = 60.0;
  double elevation_mean_range_deg = 45.0;

  // Log-normal spread laws for UMi3D/UMa3D, in log10-degrees.
  double as_log10_mean = 0.0;
  double as_log10_var = 0.0;
  double es_log10_mean = 0.0;
  double es_log10_var = 0.0;
  // Delay-spread statistics: recorded in configs but unused by the
  // narrowband single-tap channel.
  double ds_log10_mean = 0.0;
  double ds_log10_var = 0.0;

  double distance_m = 100.0;     // BS-user distance
  double user_height_m = 1.5;

  static ScenarioConfig simplified(double sigma_deg, int n_clusters = 12, int n_rays = 20);
  static ScenarioConfig umi3d(double distance_m = 100.0);
  static ScenarioConfig uma3d(double distance_m = 250.0, double user_height_m = 1.5);

  // max[-0.5, -2.1(d/1000) - 0.01(h - 1.5) + 0.9]
  static double uma_es_log10_mean(double distance_m, double user_height_m);
  // max[-0.5, -2.1(d/1000) + 0.9]
  static double umi_es_log10_mean(double distance_m);

  void validate() const;  // throws std::invalid_argument
};

// Long-term per-user state: mean cluster directions and the user's angular
// spreads. For Simplified the spreads equal sigma_deg; for UMi3D/UMa3D they
// are one draw from the log-normal law.
struct UserState {
  double theta0_rad = 0.0;
  double phi0_rad = 0.0;
  double azimuth_spread_deg = 0.0;
  double elevation_spread_deg = 0.0;
};

// Per-ray gains and directions, aligned by (cluster, ray): index n*M + m.
struct RaySet {
  std::vector<cdouble> gains;     // i.i.d. CN(0, 1/(N*M))
  std::vector<RayAngles> angles;  // N*M entries
};

struct ChannelRealization {
  VecC h;  // length N_t
  MatC H;  // column-major fold of h; vec(H) == h
};

UserState draw_user_state(const ScenarioConfig& scenario, std::uint64_t seed);

// Fast-fading draw conditioned on a user state: fresh cluster deviations,
// Laplacian per-ray offsets and CN gains.
RaySet draw_rayset(const ScenarioConfig& scenario, const UserState& state,
                   std::uint64_t seed);

// One-shot ensemble draw: user state and rays from a single seed.
RaySet draw_rayset(const ScenarioConfig& scenario, std::uint64_t seed);

VecC realize_channel_vector(const RaySet& rays, const ArrayGeometry& geom);

// As above plus the matrix form. fold_n_h/fold_n_v default to the URA
// dimensions; they must be given explicitly for UCCA geometries.
ChannelRealization realize_channel(const RaySet& rays, const ArrayGeometry& geom,
                                   int fold_n_h = 0, int fold_n_v = 0);

// Channel direction information h/||h|| (resp. H/||H||_F). Throws
// degenerate_error on an all-zero channel.
VecC cdi(const VecC& h);
MatC cdi(const MatC& H);

}  // namespace cdiquant
