#ifndef SUPERLENS_MEASUREMENT_HPP
#define SUPERLENS_MEASUREMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "superlens/scene.hpp"
#include "superlens/spectral.hpp"

namespace superlens {

/// Total-field samples on the measurement line at x_m = m*period/M for
/// m = 0..M (the endpoint is stored twice; analysis drops the duplicate).
/// Multiplicative uniform noise u*(1 + r_m) with real r_m in [-level, level],
/// drawn per-sample from a counter-based generator, so the seed alone fixes
/// the realization.
struct MeasurementSet {
  std::vector<cplx> samples;  // length M + 1
  int count_m = 0;            // M
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  bool noiseless = true;
  std::string rng_name = "splitmix64";
  SceneParameters scene;

  double x(int m) const { return m * scene.period / count_m; }
};

/// Counter-based uniform draw on [-1, 1]: splitmix64 of (seed, counter).
double uniform_symmetric_draw(std::uint64_t seed, std::uint64_t counter);

/// Noiseless sampling of a trace interpolant at the M + 1 measurement
/// points. M defaults to 100.
MeasurementSet sample_measurements(const TraceInterpolant& trace,
                                   const SceneParameters& p, int m_count = 100);

/// Returns a copy with every sample multiplied by (1 + r_m). level = 0 is
/// the identity; the same seed always reproduces the same samples.
MeasurementSet apply_noise(const MeasurementSet& ms, double level,
                           std::uint64_t seed);

/// CSV interchange between forward simulation and reconstruction. Header
/// comments record M, level, seed, rng and the scene.
void write_measurement_csv(const MeasurementSet& ms, std::ostream& os);
MeasurementSet read_measurement_csv(std::istream& is);

}  // namespace superlens

#endif  // SUPERLENS_MEASUREMENT_HPP
