#include "selfcheck.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "superlens/analytic.hpp"
#include "superlens/experiment.hpp"
#include "superlens/forward.hpp"
#include "superlens/measurement.hpp"
#include "superlens/spectral.hpp"

namespace superlens::tools {

namespace {

double rel_err(cplx got, cplx want) {
  const double scale = std::abs(want);
  return (scale > 0.0) ? std::abs(got - want) / scale : std::abs(got - want);
}

}  // namespace

int run_selfcheck(std::ostream& os) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    os << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  };

  std::mt19937_64 rng(0xC0FFEEull);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // branch cut: square law, half-plane range, fixed points
  {
    bool ok = branch_sqrt(cplx(1, 0)) == cplx(1, 0) &&
              rel_err(branch_sqrt(cplx(-4, 0)), cplx(0, 2)) < 1e-15 &&
              rel_err(branch_sqrt(cplx(0, 2)), cplx(1, 1)) < 1e-15;
    for (int k = 0; k < 10000 && ok; ++k) {
      const double r = std::pow(10.0, -6.0 + 12.0 * uni(rng));
      const double th = 2.0 * std::numbers::pi * uni(rng);
      const cplx z = std::polar(r, th);
      const cplx w = branch_sqrt(z);
      ok = rel_err(w * w, z) < 1e-14 && std::arg(w) >= 0.0 &&
           std::arg(w) < std::numbers::pi + 1e-15;
    }
    check("branch square root: w^2 = z, arg in [0, pi)", ok);
  }

  const auto sets = reference_parameter_sets();

  // wavenumber laws over the reference parameter sets
  {
    bool ok = true;
    for (const auto& p : sets) {
      for (int n = 0; n <= 40 && ok; ++n) {
        const auto wp = mode_wavenumbers(n, p);
        const auto wm = mode_wavenumbers(-n, p);
        ok = (wp.beta == wm.beta);
      }
    }
    const SceneParameters perfect = sets[2];  // eps = mu = -1
    for (int n = 0; n <= 40 && ok; ++n) {
      ok = rel_err(slab_wavenumbers(n, perfect).gamma,
                   mode_wavenumbers(n, perfect).beta) < 1e-14;
    }
    check("wavenumbers: beta evenness, gamma == beta at eps = mu = -1", ok);
  }

  // interface determinant against the dense 4x4 oracle
  {
    bool ok = true;
    for (int k = 0; k < 200 && ok; ++k) {
      SceneParameters p;
      p.period = 0.5 + 1.5 * uni(rng);
      p.wavelength = 0.5 + 1.5 * uni(rng);
      p.slab_bottom = 0.05 + 0.15 * uni(rng);
      p.slab_top = p.slab_bottom + 0.05 + 0.2 * uni(rng);
      p.eps = cplx(-2.0 + 4.0 * uni(rng), 2.0 * uni(rng));
      p.mu = cplx(-2.0 + 4.0 * uni(rng), 2.0 * uni(rng));
      if (std::abs(p.mu) < 0.2) continue;
      const int n = static_cast<int>(4.0 * uni(rng));
      const cplx det = InterfaceSystem::build(n, p).determinant();
      const cplx phi = interface_determinant_phi(n, p);
      if (std::abs(phi) < 1e-6) continue;
      ok = rel_err(det, phi) < 1e-12;
    }
    check("interface determinant matches dense 4x4 determinant", ok);
  }

  // zeroth order: PEC mirror without a slab, continuity in general
  {
    const SceneParameters noslab = sets[0];
    const auto u0 = zeroth_order_field(noslab);
    const double kappa = noslab.wavenumber();
    bool ok = true;
    for (int k = 0; k <= 20; ++k) {
      const double y = k * noslab.slab_top / 20.0;
      ok = ok && std::abs(u0.value(y) - cplx(0.0, -2.0) * std::sin(kappa * y)) < 1e-12;
    }
    for (const auto& p : sets) {
      const auto f = zeroth_order_field(p);
      ok = ok && std::abs(f.value(0.0)) < 1e-13;
      const double a = p.slab_bottom;
      ok = ok && rel_err(f.value(a - 1e-13), f.value(a)) < 1e-9;
    }
    check("flat-surface field: mirror solution, Dirichlet zero, continuity", ok);
  }

  // psi: closed form against quadrature
  {
    bool ok = true;
    for (const auto& p : sets) {
      for (int n = 0; n <= 12 && ok; ++n) {
        ok = rel_err(psi_quadrature(n, p), psi_closed_form(n, p)) < 1e-8;
      }
    }
    check("first-order scalar psi: closed form vs quadrature", ok);
  }

  // fundamental identity
  {
    bool ok = true;
    for (const auto& p : sets) {
      for (int n = 0; n <= 12 && ok; ++n) {
        ok = std::abs(scaling_factor_upsilon(n, p) * first_order_trace(n, p) -
                      1.0) < 1e-12;
      }
    }
    check("scaling factor times first-order trace equals one", ok);
  }

  // special-case scaling factors
  {
    const double kappa = sets[0].wavenumber();
    bool ok = true;
    // no slab: flat value then exponential growth
    for (int n = 1; n <= 20 && ok; ++n) {
      const cplx beta = mode_wavenumbers(n, sets[0]).beta;
      const double want = std::exp(std::abs(beta) * sets[0].slab_top) / (2.0 * kappa);
      ok = std::abs(std::abs(scaling_factor_upsilon(n, sets[0])) - want) <
           1e-12 * want;
    }
    // perfect parameters with b = 2a: constant magnitude
    for (int n = 0; n <= 40 && ok; ++n) {
      ok = std::abs(std::abs(scaling_factor_upsilon(n, sets[2])) -
                    1.0 / (2.0 * kappa)) < 1e-12 / kappa;
    }
    check("special-case scaling factors (no slab / perfect parameters)", ok);
  }

  // coarse forward solve against the analytic flat-surface field
  {
    bool ok = true;
    const Grid grid{64, 32, 32};
    for (const auto& p : {sets[0], sets[2]}) {
      const auto field = solve_total_field(Profile::flat(p.period), p, grid);
      const auto u0 = zeroth_order_field(p);
      double err = 0.0;
      const double hw = p.slab_bottom / (grid.ny_omega - 1);
      const double hs = (p.slab_top - p.slab_bottom) / (grid.ny_slab - 1);
      for (int j = 0; j < grid.levels(); ++j) {
        const double y = (j < grid.ny_omega) ? j * hw
                                             : p.slab_bottom + (j - grid.ny_omega + 1) * hs;
        for (int i = 0; i < grid.nx; ++i) {
          err = std::max(err, std::abs(field.at(i, j) - u0.value(y)));
        }
      }
      ok = ok && err < 5e-3 && field.report.residual < 1e-10;
    }
    check("forward solver: coarse flat solve tracks the analytic field", ok);
  }

  // measurement noise: determinism, bounds, phase preservation
  {
    std::vector<cplx> nodal(64);
    for (int i = 0; i < 64; ++i) nodal[static_cast<std::size_t>(i)] = cplx(1.0, 0.5);
    const TraceInterpolant interp(nodal, 1.0);
    SceneParameters p = sets[0];
    const auto clean = sample_measurements(interp, p, 100);
    const auto noisy1 = apply_noise(clean, 0.05, 7);
    const auto noisy2 = apply_noise(clean, 0.05, 7);
    bool ok = noisy1.samples == noisy2.samples;
    for (std::size_t m = 0; m < noisy1.samples.size(); ++m) {
      const double ratio = std::abs(noisy1.samples[m]) / std::abs(clean.samples[m]);
      ok = ok && ratio >= 0.95 - 1e-12 && ratio <= 1.05 + 1e-12;
      ok = ok && std::abs(std::arg(noisy1.samples[m]) - std::arg(clean.samples[m])) < 1e-12;
    }
    check("measurement noise: deterministic, bounded, phase preserving", ok);
  }

  return failures;
}

}  // namespace superlens::tools
