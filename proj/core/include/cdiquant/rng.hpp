#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cdiquant {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Splittable seed tree. Children are addressed by (stream, a, b); all
// Monte-Carlo streams in the library derive from the master seed this way,
// so serial and parallel runs consume identical random numbers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = mix64(master ^ 0x9E3779B97F4A7C15ull);
  s = mix64(s ^ mix64(stream));
  s = mix64(s ^ mix64(a));
  s = mix64(s ^ mix64(b));
  return s;
}

// Seeded generator. The engine is mt19937_64 (output sequence mandated by
// the standard) and every transform below is implemented here, so sample
// streams are bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
  }

  // Circularly symmetric complex normal CN(0, 1).
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  // Zero-mean Laplacian with the given root-mean-square (scale b = rms/sqrt(2)),
  // sampled by inverse CDF.
  double laplacian_rms(double rms) {
    const double b = rms * M_SQRT1_2;
    const double u = uniform01() - 0.5;
    return u >= 0.0 ? -b * std::log1p(-2.0 * u) : b * std::log1p(2.0 * u);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace cdiquant
