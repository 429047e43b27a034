#include "superlens/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace superlens {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

cplx branch_sqrt(cplx z) {
  // Pull the cut onto its limit from above so that exact positive reals
  // (including eps*mu == 1 with a negative-zero imaginary part) stay real.
  if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
  double theta = std::arg(z);  // (-pi, pi], with arg(x + 0i) = 0 for x > 0
  if (theta < 0.0) theta += kTwoPi;
  return std::polar(std::sqrt(std::abs(z)), 0.5 * theta);
}

ModeWavenumbers mode_wavenumbers(int n, const SceneParameters& p) {
  const double kappa = p.wavenumber();
  const double alpha = kTwoPi * n / p.period;
  return {alpha, branch_sqrt(cplx(kappa * kappa - alpha * alpha, 0.0))};
}

SlabWavenumbers slab_wavenumbers(int n, const SceneParameters& p) {
  const double kappa = p.wavenumber();
  const double alpha = kTwoPi * n / p.period;
  const cplx eta = kappa * branch_sqrt(p.eps * p.mu);
  return {eta, branch_sqrt(eta * eta - alpha * alpha)};
}

ModeCoefficients fourier_coefficients(std::span<const cplx> samples, int band) {
  const int m_count = static_cast<int>(samples.size());
  if (band < 0) throw std::invalid_argument("fourier_coefficients: negative band");
  if (m_count < 2 * band + 1) {
    throw std::invalid_argument(
        "fourier_coefficients: need at least 2*band+1 samples, got " +
        std::to_string(m_count));
  }
  ModeCoefficients out(band);
  for (int n = -band; n <= band; ++n) {
    cplx acc(0.0, 0.0);
    for (int m = 0; m < m_count; ++m) {
      const double phase = -kTwoPi * n * m / m_count;
      acc += samples[static_cast<std::size_t>(m)] * std::polar(1.0, phase);
    }
    out[n] = acc / static_cast<double>(m_count);
  }
  return out;
}

std::vector<cplx> fourier_synthesis(const ModeCoefficients& coeffs,
                                    std::span<const double> grid,
                                    double period) {
  std::vector<cplx> out(grid.size());
  const int band = coeffs.band();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx acc(0.0, 0.0);
    for (int n = -band; n <= band; ++n) {
      acc += coeffs[n] * std::polar(1.0, kTwoPi * n * grid[i] / period);
    }
    out[i] = acc;
  }
  return out;
}

TraceInterpolant::TraceInterpolant(std::span<const cplx> nodal, double period)
    : period_(period) {
  const int n_pts = static_cast<int>(nodal.size());
  if (n_pts < 2) throw std::invalid_argument("TraceInterpolant: need >= 2 nodes");
  const bool even = (n_pts % 2 == 0);
  half_ = even ? n_pts / 2 - 1 : (n_pts - 1) / 2;
  coeffs_ = fourier_coefficients(nodal, half_);
  if (even) {
    // bin N/2 of the DFT, shared between the +N/2 and -N/2 exponentials
    cplx acc(0.0, 0.0);
    for (int m = 0; m < n_pts; ++m) {
      acc += nodal[static_cast<std::size_t>(m)] *
             std::polar(1.0, -std::numbers::pi * m);  // e^{-i pi m}
    }
    nyquist_ = acc / static_cast<double>(n_pts);
  }
}

cplx TraceInterpolant::operator()(double x) const {
  cplx acc(0.0, 0.0);
  for (int n = -half_; n <= half_; ++n) {
    acc += coeffs_[n] * std::polar(1.0, kTwoPi * n * x / period_);
  }
  if (nyquist_ != cplx(0.0, 0.0)) {
    acc += nyquist_ * std::cos(kTwoPi * (half_ + 1) * x / period_);
  }
  return acc;
}

}  // namespace superlens
