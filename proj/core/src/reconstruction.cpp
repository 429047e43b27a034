#include "superlens/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "superlens/analytic.hpp"
#include "superlens/errors.hpp"
#include "superlens/format.hpp"

namespace superlens {

double ReconstructedProfile::max_imag() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

ReconstructedProfile reconstruct_profile(const MeasurementSet& ms,
                                         const SceneParameters& p, int cutoff,
                                         int grid_points) {
  p.validate();
  if (cutoff < 0) throw std::invalid_argument("reconstruct_profile: cutoff < 0");
  const int m_count = ms.count_m;
  if (m_count < 2 * cutoff + 1) {
    throw std::invalid_argument(
        "reconstruct_profile: M = " + std::to_string(m_count) +
        " is too small for cutoff N = " + std::to_string(cutoff) +
        " (need M >= 2N + 1)");
  }

  // one exact period: drop the duplicated endpoint sample
  std::span<const cplx> one_period(ms.samples.data(),
                                   static_cast<std::size_t>(m_count));
  const ModeCoefficients u_modes = fourier_coefficients(one_period, cutoff);
  const cplx u0_top = zeroth_order_field(p).value_at_top();

  ReconstructedProfile recon;
  recon.cutoff = cutoff;
  recon.coefficients = ModeCoefficients(cutoff);
  for (int n = -cutoff; n <= cutoff; ++n) {
    const cplx data = u_modes[n] - (n == 0 ? u0_top : cplx(0.0, 0.0));
    try {
      recon.coefficients[n] = scaling_factor_upsilon(n, p) * data;
    } catch (const DegenerateModeError&) {
      recon.coefficients[n] = cplx(0.0, 0.0);
      recon.skipped_modes.push_back(n);
    }
  }
  std::sort(recon.skipped_modes.begin(), recon.skipped_modes.end());

  const int pts = (grid_points > 0) ? grid_points : m_count;
  recon.grid_x.resize(static_cast<std::size_t>(pts));
  for (int i = 0; i < pts; ++i) recon.grid_x[static_cast<std::size_t>(i)] = i * p.period / pts;
  recon.values = fourier_synthesis(recon.coefficients, recon.grid_x, p.period);
  return recon;
}

ErrorMetrics profile_error(const ReconstructedProfile& recon,
                           const Profile& truth, int grid_points) {
  ErrorMetrics metrics;
  metrics.max_imag = recon.max_imag();

  const double period = truth.period();
  double num2 = 0.0, den2 = 0.0, numi = 0.0, deni = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = i * period / grid_points;
    const double t = truth.delta() * truth.g(x);
    // synthesize the reconstruction at x
    cplx r(0.0, 0.0);
    for (int n = -recon.coefficients.band(); n <= recon.coefficients.band(); ++n) {
      r += recon.coefficients[n] *
           std::polar(1.0, 2.0 * std::numbers::pi * n * x / period);
    }
    const double d = r.real() - t;
    num2 += d * d;
    den2 += t * t;
    numi = std::max(numi, std::abs(d));
    deni = std::max(deni, std::abs(t));
  }
  metrics.l2_rel = (den2 > 0.0) ? std::sqrt(num2 / den2) : std::sqrt(num2);
  metrics.linf_rel = (deni > 0.0) ? numi / deni : numi;

  for (int n = -recon.coefficients.band(); n <= recon.coefficients.band(); ++n) {
    const cplx truth_c = truth.delta() * truth.g_coefficient(n);
    if (std::abs(truth_c) > 0.0) {
      metrics.mode_errors.push_back(
          {n, std::abs(recon.coefficients[n] - truth_c) / std::abs(truth_c)});
    }
  }
  return metrics;
}

void write_reconstruction_csv(const ReconstructedProfile& recon,
                              const Profile* truth, std::ostream& os) {
  os << "x,f_true,f_recon_re,f_recon_im\n";
  for (std::size_t i = 0; i < recon.grid_x.size(); ++i) {
    const double x = recon.grid_x[i];
    const double t = truth ? truth->delta() * truth->g(x)
                           : std::numeric_limits<double>::quiet_NaN();
    os << fmt_g17(x) << "," << fmt_g17(t) << "," << fmt_g17(recon.values[i].real())
       << "," << fmt_g17(recon.values[i].imag()) << "\n";
  }
}

void write_mode_table_csv(const ReconstructedProfile& recon,
                          const SceneParameters& p, std::ostream& os) {
  os << "n,re_f,im_f,abs_upsilon,skipped\n";
  for (int n = -recon.cutoff; n <= recon.cutoff; ++n) {
    const bool skipped =
        std::binary_search(recon.skipped_modes.begin(), recon.skipped_modes.end(), n);
    double abs_upsilon = std::numeric_limits<double>::quiet_NaN();
    if (!skipped) abs_upsilon = std::abs(scaling_factor_upsilon(n, p));
    os << n << "," << fmt_g17(recon.coefficients[n].real()) << ","
       << fmt_g17(recon.coefficients[n].imag()) << "," << fmt_g17(abs_upsilon)
       << "," << (skipped ? 1 : 0) << "\n";
  }
}

}  // namespace superlens
