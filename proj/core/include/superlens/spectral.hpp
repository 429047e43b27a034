#ifndef SUPERLENS_SPECTRAL_HPP
#define SUPERLENS_SPECTRAL_HPP

#include <span>
#include <vector>

#include "superlens/scene.hpp"

namespace superlens {

/// Complex square root with the branch cut along the positive real axis:
/// arg(z) is taken in [0, 2*pi), so arg(branch_sqrt(z)) lies in [0, pi).
/// Positive reals map to positive reals; negative reals to +i*sqrt(|z|).
/// Values on the cut (imag == +-0) are treated as the limit from above, so
/// branch_sqrt(1) == 1 even when the argument carries a negative zero.
cplx branch_sqrt(cplx z);

struct ModeWavenumbers {
  double alpha;  // transverse wavenumber 2*pi*n/period
  cplx beta;     // vertical wavenumber sqrt(kappa^2 - alpha^2), branch above
};

/// Vacuum-side wavenumbers of mode n. Evanescent modes (|alpha| > kappa)
/// get a purely imaginary beta with positive imaginary part.
ModeWavenumbers mode_wavenumbers(int n, const SceneParameters& p);

struct SlabWavenumbers {
  cplx eta;    // slab wavenumber kappa*sqrt(eps*mu)
  cplx gamma;  // vertical slab wavenumber sqrt(eta^2 - alpha^2)
};

SlabWavenumbers slab_wavenumbers(int n, const SceneParameters& p);

/// Band-limited Fourier coefficients c_n, |n| <= band, stored densely.
class ModeCoefficients {
 public:
  ModeCoefficients() = default;
  explicit ModeCoefficients(int band) : band_(band), c_(2 * band + 1) {}

  int band() const { return band_; }
  cplx& operator[](int n) { return c_[static_cast<std::size_t>(n + band_)]; }
  cplx operator[](int n) const { return c_[static_cast<std::size_t>(n + band_)]; }

 private:
  int band_ = 0;
  std::vector<cplx> c_;
};

/// Discrete Fourier analysis of one period of uniformly spaced samples
/// (x_m = m*period/M, no duplicated endpoint). The forward transform carries
/// the 1/M factor, so coefficients approximate the continuous ones directly.
/// Exact for band-limited inputs; throws std::invalid_argument when
/// M < 2*band + 1 (the requested modes would alias).
ModeCoefficients fourier_coefficients(std::span<const cplx> samples, int band);

/// Pointwise evaluation of the truncated sum over |n| <= band at each grid
/// point. Direct O(len * band) evaluation.
std::vector<cplx> fourier_synthesis(const ModeCoefficients& coeffs,
                                    std::span<const double> grid,
                                    double period);

/// Trigonometric interpolant through periodic nodal data u(x_i),
/// x_i = i*period/N. For even N the unmatched Nyquist bin is split evenly
/// between +-N/2 so the interpolant reproduces the nodes exactly.
class TraceInterpolant {
 public:
  TraceInterpolant(std::span<const cplx> nodal, double period);

  cplx operator()(double x) const;
  double period() const { return period_; }

 private:
  double period_;
  int half_;                  // largest interior mode
  cplx nyquist_{0.0, 0.0};    // split cosine amplitude, even N only
  ModeCoefficients coeffs_;
};

}  // namespace superlens

#endif  // SUPERLENS_SPECTRAL_HPP
