#include "cdiquant/channel_model.hpp"

#include <cmath>
#include <stdexcept>

#include "cdiquant/errors.hpp"
#include "cdiquant/rng.hpp"

namespace cdiquant {

namespace {

constexpr double kDeg2Rad = M_PI / 180.0;

// Seed sub-streams of the one-shot rayset draw.
constexpr std::uint64_t kStateSub = 0;
constexpr std::uint64_t kRaysSub = 1;

}  // namespace

ScenarioConfig ScenarioConfig::simplified(double sigma_deg, int n_clusters, int n_rays) {
  ScenarioConfig c;
  c.model = ScenarioModel::Simplified;
  c.sigma_deg = sigma_deg;
  c.n_clusters = n_clusters;
  c.n_rays = n_rays;
  return c;
}

ScenarioConfig ScenarioConfig::umi3d(double distance_m) {
  ScenarioConfig c;
  c.model = ScenarioModel::UMi3D;
  c.n_clusters = 19;
  c.n_rays = 20;
  c.as_log10_mean = 1.41;
  c.as_log10_var = 0.17;
  c.es_log10_mean = umi_es_log10_mean(distance_m);
  c.es_log10_var = 0.6;
  c.ds_log10_mean = -6.89;
  c.ds_log10_var = 0.54;
  c.distance_m = distance_m;
  return c;
}

ScenarioConfig ScenarioConfig::uma3d(double distance_m, double user_height_m) {
  ScenarioConfig c;
  c.model = ScenarioModel::UMa3D;
  c.n_clusters = 12;
  c.n_rays = 20;
  c.as_log10_mean = 1.25;
  c.as_log10_var = 0.42;
  c.es_log10_mean = uma_es_log10_mean(distance_m, user_height_m);
  c.es_log10_var = 0.49;
  c.ds_log10_mean = -6.62;
  c.ds_log10_var = 0.32;
  c.distance_m = distance_m;
  c.user_height_m = user_height_m;
  return c;
}

double ScenarioConfig::uma_es_log10_mean(double distance_m, double user_height_m) {
  return std::max(-0.5, -2.1 * (distance_m / 1000.0) - 0.01 * (user_height_m - 1.5) + 0.9);
}

double ScenarioConfig::umi_es_log10_mean(double distance_m) {
  return std::max(-0.5, -2.1 * (distance_m / 1000.0) + 0.9);
}

void ScenarioConfig::validate() const {
  if (n_clusters < 1 || n_rays < 1)
    throw std::invalid_argument("scenario requires n_clusters >= 1 and n_rays >= 1");
  if (sigma_deg < 0.0) throw std::invalid_argument("sigma_deg must be >= 0");
  if (offset_rms_deg < 0.0) throw std::invalid_argument("offset_rms_deg must be >= 0");
  if (azimuth_mean_range_deg < 0.0 || elevation_mean_range_deg < 0.0)
    throw std::invalid_argument("mean angle ranges must be >= 0");
  if (model != ScenarioModel::Simplified) {
    if (as_log10_var < 0.0 || es_log10_var < 0.0)
      throw std::invalid_argument("log-spread variances must be >= 0");
  }
}

UserState draw_user_state(const ScenarioConfig& scenario, std::uint64_t seed) {
  scenario.validate();
  Rng rng(seed);
  UserState s;
  s.theta0_rad = rng.uniform(-scenario.azimuth_mean_range_deg,
                             scenario.azimuth_mean_range_deg) * kDeg2Rad;
  s.phi0_rad = rng.uniform(-scenario.elevation_mean_range_deg,
                           scenario.elevation_mean_range_deg) * kDeg2Rad;
  if (scenario.model == ScenarioModel::Simplified) {
    s.azimuth_spread_deg = scenario.sigma_deg;
    s.elevation_spread_deg = scenario.sigma_deg;
  } else {
    s.azimuth_spread_deg =
        std::pow(10.0, scenario.as_log10_mean + std::sqrt(scenario.as_log10_var) * rng.normal());
    s.elevation_spread_deg =
        std::pow(10.0, scenario.es_log10_mean + std::sqrt(scenario.es_log10_var) * rng.normal());
  }
  return s;
}

namespace {

// Cluster deviations. Simplified: i.i.d. N(0, sigma^2). Log-normal scenarios:
// i.i.d. N(0,1) rescaled so the realized RMS equals the user's drawn spread.
std::vector<double> draw_cluster_deviations(Rng& rng, int n, double spread_deg,
                                            bool rescale_to_spread) {
  std::vector<double> dev(n);
  for (int i = 0; i < n; ++i) dev[i] = rng.normal();
  if (rescale_to_spread) {
    double ms = 0.0;
    for (double d : dev) ms += d * d;
    const double rms = std::sqrt(ms / n);
    const double scale = rms > 1e-12 ? spread_deg / rms : 0.0;
    for (double& d : dev) d *= scale;
  } else {
    for (double& d : dev) d *= spread_deg;
  }
  return dev;
}

}  // namespace

RaySet draw_rayset(const ScenarioConfig& scenario, const UserState& state,
                   std::uint64_t seed) {
  scenario.validate();
  const int n = scenario.n_clusters;
  const int m = scenario.n_rays;
  const bool rescale = scenario.model != ScenarioModel::Simplified;

  Rng rng(seed);
  const std::vector<double> dev_az =
      draw_cluster_deviations(rng, n, state.azimuth_spread_deg, rescale);
  const std::vector<double> dev_el =
      draw_cluster_deviations(rng, n, state.elevation_spread_deg, rescale);

  RaySet rays;
  rays.gains.resize(static_cast<std::size_t>(n) * m);
  rays.angles.resize(static_cast<std::size_t>(n) * m);
  const double gain_scale = 1.0 / std::sqrt(static_cast<double>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double off_az = rng.laplacian_rms(scenario.offset_rms_deg);
      const double off_el = rng.laplacian_rms(scenario.offset_rms_deg);
      const std::size_t idx = static_cast<std::size_t>(i) * m + j;
      rays.angles[idx].theta = state.theta0_rad + (dev_az[i] + off_az) * kDeg2Rad;
      rays.angles[idx].phi = state.phi0_rad + (dev_el[i] + off_el) * kDeg2Rad;
      rays.gains[idx] = rng.cnormal() * gain_scale;
    }
  }
  return rays;
}

RaySet draw_rayset(const ScenarioConfig& scenario, std::uint64_t seed) {
  const UserState state = draw_user_state(scenario, derive_seed(seed, kStateSub));
  return draw_rayset(scenario, state, derive_seed(seed, kRaysSub));
}

VecC realize_channel_vector(const RaySet& rays, const ArrayGeometry& geom) {
  if (rays.gains.size() != rays.angles.size())
    throw std::invalid_argument("rayset gains/angles must be aligned");
  const int nt = geom.element_count();
  VecC h = VecC::Zero(nt);
  if (geom.kind == ArrayKind::Ura) {
    for (std::size_t r = 0; r < rays.gains.size(); ++r) {
      const auto [a_h, a_v] = ura_subarray_responses(rays.angles[r], geom);
      const cdouble g = rays.gains[r];
      for (int kv = 0; kv < geom.n_v; ++kv)
        h.segment(static_cast<Eigen::Index>(kv) * geom.n_h, geom.n_h) += (g * a_v(kv)) * a_h;
    }
  } else {
    for (std::size_t r = 0; r < rays.gains.size(); ++r)
      h += rays.gains[r] * array_response(rays.angles[r], geom);
  }
  return h;
}

ChannelRealization realize_channel(const RaySet& rays, const ArrayGeometry& geom,
                                   int fold_n_h, int fold_n_v) {
  if (fold_n_h == 0 && fold_n_v == 0) {
    if (geom.kind != ArrayKind::Ura)
      throw std::invalid_argument("realize_channel: fold shape required for UCCA");
    fold_n_h = geom.n_h;
    fold_n_v = geom.n_v;
  }
  if (fold_n_h < 1 || fold_n_v < 1 || fold_n_h * fold_n_v != geom.element_count())
    throw std::invalid_argument("realize_channel: fold shape must factor the element count");
  ChannelRealization ch;
  ch.h = realize_channel_vector(rays, geom);
  ch.H = unvec_cm(ch.h, fold_n_h, fold_n_v);
  return ch;
}

VecC cdi(const VecC& h) {
  const double n = h.norm();
  if (!(n > 0.0)) throw degenerate_error("cdi: zero channel vector");
  return h / n;
}

MatC cdi(const MatC& H) {
  const double n = H.norm();
  if (!(n > 0.0)) throw degenerate_error("cdi: zero channel matrix");
  return H / n;
}

}  // namespace cdiquant
