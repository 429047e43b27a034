#ifndef SUPERLENS_RECONSTRUCTION_HPP
#define SUPERLENS_RECONSTRUCTION_HPP

#include <iosfwd>
#include <vector>

#include "superlens/measurement.hpp"
#include "superlens/profile.hpp"
#include "superlens/scene.hpp"
#include "superlens/spectral.hpp"

namespace superlens {

/// Result of the direct inversion: profile coefficients f^(n) for |n| <= N,
/// their synthesis on a grid, and the list of modes skipped because their
/// scaling factor is degenerate. The synthesized profile keeps its imaginary
/// part as a diagnostic (the true profile is real; a large imaginary residual
/// flags noise or model error).
struct ReconstructedProfile {
  ModeCoefficients coefficients;
  int cutoff = 0;
  std::vector<int> skipped_modes;
  std::vector<double> grid_x;
  std::vector<cplx> values;

  double max_imag() const;
};

/// Mode-by-mode inversion of the measured trace: DFT the samples (duplicate
/// endpoint dropped), subtract the flat-surface reference from mode zero,
/// scale each mode by Upsilon_n, and synthesize the truncated sum.
/// Throws std::invalid_argument when M < 2N + 1.
ReconstructedProfile reconstruct_profile(const MeasurementSet& ms,
                                         const SceneParameters& p, int cutoff,
                                         int grid_points = 0);

struct ModeError {
  int n;
  double rel_err;  // |f^(n) - delta*g^(n)| / |delta*g^(n)|
};

struct ErrorMetrics {
  double l2_rel = 0.0;
  double linf_rel = 0.0;
  double max_imag = 0.0;
  std::vector<ModeError> mode_errors;
};

/// Relative l2/linf errors of Re(reconstruction) against delta*g on a
/// uniform grid, plus per-mode coefficient errors for |n| <= cutoff.
ErrorMetrics profile_error(const ReconstructedProfile& recon,
                           const Profile& truth, int grid_points);

/// Reconstruction CSV: x, f_true, f_recon_re, f_recon_im (f_true is nan when
/// no truth profile is supplied).
void write_reconstruction_csv(const ReconstructedProfile& recon,
                              const Profile* truth, std::ostream& os);

/// Mode table CSV: n, re_f, im_f, abs_upsilon, skipped.
void write_mode_table_csv(const ReconstructedProfile& recon,
                          const SceneParameters& p, std::ostream& os);

}  // namespace superlens

#endif  // SUPERLENS_RECONSTRUCTION_HPP
