#include "superlens/analytic.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "superlens/errors.hpp"
#include "superlens/format.hpp"
#include "superlens/quadrature.hpp"

namespace superlens {

namespace {

const cplx kI(0.0, 1.0);

cplx cexp(cplx z) { return std::exp(z); }

/// Shared resonance guard: the determinant scales like 4*beta_n^2 ~ 4*kappa^2
/// for the modes of interest.
void check_resonance(int n, cplx phi, double kappa) {
  if (std::abs(phi) < kResonanceTol * 4.0 * kappa * kappa) {
    throw ResonanceError(n, "interface determinant numerically zero for mode " +
                                std::to_string(n));
  }
}

}  // namespace

cplx boundary_source_rho(const SceneParameters& p) {
  const double kappa = p.wavenumber();
  return -2.0 * kI * kappa * cexp(-kI * kappa * p.slab_top);
}

cplx interface_determinant_phi(int n, const SceneParameters& p) {
  const auto [alpha, beta] = mode_wavenumbers(n, p);
  const auto [eta, gamma] = slab_wavenumbers(n, p);
  const double a = p.slab_bottom, b = p.slab_top;
  const cplx mu = p.mu;
  const cplx gm = gamma - mu * beta;
  const cplx gp = gamma + mu * beta;
  return gm * cexp(kI * gamma * (b - a)) *
             (gp * cexp(kI * beta * a) - gm * cexp(-kI * beta * a)) +
         gp * cexp(kI * gamma * (a - b)) *
             (gp * cexp(-kI * beta * a) - gm * cexp(kI * beta * a));
}

InterfaceSystem InterfaceSystem::build(int n, const SceneParameters& p) {
  const auto [alpha, beta] = mode_wavenumbers(n, p);
  const auto [eta, gamma] = slab_wavenumbers(n, p);
  const double a = p.slab_bottom, b = p.slab_top;
  const cplx mu = p.mu;

  InterfaceSystem sys;
  auto& m = sys.matrix;
  // Robin condition on the measurement line
  m(0, 0) = kI * (gamma - mu * beta) * cexp(kI * gamma * b);
  m(0, 1) = -kI * (gamma + mu * beta) * cexp(-kI * gamma * b);
  m(0, 2) = 0.0;
  m(0, 3) = 0.0;
  // continuity across the slab's lower face
  m(1, 0) = cexp(kI * gamma * a);
  m(1, 1) = cexp(-kI * gamma * a);
  m(1, 2) = -cexp(kI * beta * a);
  m(1, 3) = -cexp(-kI * beta * a);
  // flux jump across the slab's lower face
  m(2, 0) = kI * gamma * cexp(kI * gamma * a);
  m(2, 1) = -kI * gamma * cexp(-kI * gamma * a);
  m(2, 2) = -kI * mu * beta * cexp(kI * beta * a);
  m(2, 3) = kI * mu * beta * cexp(-kI * beta * a);
  // Dirichlet condition on the flattened surface
  m(3, 0) = 0.0;
  m(3, 1) = 0.0;
  m(3, 2) = 1.0;
  m(3, 3) = 1.0;
  return sys;
}

InterfaceCoefficients solve_interface_system(int n, const SceneParameters& p,
                                             const std::array<cplx, 3>& rhs) {
  p.validate();
  const double kappa = p.wavenumber();
  check_resonance(n, interface_determinant_phi(n, p), kappa);

  Eigen::Matrix4cd m = InterfaceSystem::build(n, p).matrix;
  Eigen::Vector4cd y;
  y << rhs[0], rhs[1], rhs[2], cplx(0.0, 0.0);

  // Column equilibration keeps evanescent modes well scaled (the up/down
  // exponentials can differ by many orders of magnitude).
  Eigen::Vector4d scale;
  for (int j = 0; j < 4; ++j) {
    const double s = m.col(j).cwiseAbs().maxCoeff();
    scale(j) = (s > 0.0) ? s : 1.0;
    m.col(j) /= scale(j);
  }
  Eigen::PartialPivLU<Eigen::Matrix4cd> lu(m);
  Eigen::Vector4cd x = lu.solve(y);
  // one step of iterative refinement
  x += lu.solve(y - m * x);
  const double res = (m * x - y).norm();
  const double ynorm = y.norm();
  if (ynorm > 0.0 && res > 1e-12 * ynorm) {
    throw ResonanceError(n, "interface system solve lost precision for mode " +
                                std::to_string(n));
  }
  x.array() /= scale.array();
  return {x(0), x(1), x(2), x(3)};
}

ZerothOrderField zeroth_order_field(const SceneParameters& p) {
  p.validate();
  const double kappa = p.wavenumber();
  const double a = p.slab_bottom;
  const cplx mu = p.mu;
  const cplx eta = slab_wavenumbers(0, p).eta;
  const cplx rho = boundary_source_rho(p);
  const cplx phi0 = interface_determinant_phi(0, p);
  check_resonance(0, phi0, kappa);

  const cplx pref = 2.0 * mu * rho / (kI * phi0);
  const cplx cos_ka = std::cos(kappa * a);
  const cplx sin_ka = std::sin(kappa * a);
  ZerothOrderField f{
      pref * cexp(-kI * eta * a) * (mu * kappa * cos_ka + kI * eta * sin_ka),
      -pref * cexp(kI * eta * a) * (mu * kappa * cos_ka - kI * eta * sin_ka),
      2.0 * eta * mu * rho / (kI * phi0),
      -2.0 * eta * mu * rho / (kI * phi0),
      p};
  return f;
}

cplx ZerothOrderField::value(double y) const {
  const double a = scene.slab_bottom;
  if (y >= a) {
    const cplx eta = slab_wavenumbers(0, scene).eta;
    return a0 * std::exp(kI * eta * y) + b0 * std::exp(-kI * eta * y);
  }
  const double kappa = scene.wavenumber();
  const cplx eta = slab_wavenumbers(0, scene).eta;
  const cplx rho = boundary_source_rho(scene);
  const cplx phi0 = interface_determinant_phi(0, scene);
  return 4.0 * eta * scene.mu * rho / phi0 * std::sin(kappa * y);
}

cplx ZerothOrderField::value_at_top() const { return value(scene.slab_top); }

cplx ZerothOrderField::slab_derivative(double y) const {
  const cplx eta = slab_wavenumbers(0, scene).eta;
  return kI * eta * (a0 * std::exp(kI * eta * y) - b0 * std::exp(-kI * eta * y));
}

FirstOrderSource first_order_source(int n, const SceneParameters& p, double y) {
  const double kappa = p.wavenumber();
  const double a = p.slab_bottom;
  const cplx mu = p.mu;
  const cplx eta = slab_wavenumbers(0, p).eta;
  const cplx rho = boundary_source_rho(p);
  const cplx phi0 = interface_determinant_phi(0, p);
  check_resonance(0, phi0, kappa);

  const double alpha = mode_wavenumbers(n, p).alpha;
  const cplx pref = 4.0 * kappa * eta * mu * rho / (a * phi0);
  FirstOrderSource src;
  src.v1 = pref * (2.0 * kappa * std::sin(kappa * y) -
                   alpha * alpha * (a - y) * std::cos(kappa * y));
  src.tau1 = pref * mu * std::cos(kappa * a);
  return src;
}

cplx psi_closed_form(int n, const SceneParameters& p) {
  const double kappa = p.wavenumber();
  const cplx mu = p.mu;
  const cplx eta = slab_wavenumbers(0, p).eta;
  const cplx beta = mode_wavenumbers(n, p).beta;
  const cplx rho = boundary_source_rho(p);
  const cplx phi0 = interface_determinant_phi(0, p);
  check_resonance(0, phi0, kappa);
  return 4.0 * kappa * eta * mu * mu * rho * beta / phi0;
}

cplx psi_quadrature(int n, const SceneParameters& p, int panels,
                    int nodes_per_panel) {
  const double a = p.slab_bottom;
  const cplx beta = mode_wavenumbers(n, p).beta;
  const auto rule = composite_gauss_legendre(0.0, a, panels, nodes_per_panel);
  const cplx integral = integrate(rule, [&](double y) {
    return std::sin(beta * y) * first_order_source(n, p, y).v1;
  });
  const cplx tau1 = first_order_source(n, p, a).tau1;
  return p.mu * integral + std::sin(beta * a) * tau1;
}

std::pair<cplx, cplx> first_order_interface_rhs(int n, const SceneParameters& p,
                                                int panels,
                                                int nodes_per_panel) {
  const double a = p.slab_bottom;
  const cplx beta = mode_wavenumbers(n, p).beta;
  const auto rule = composite_gauss_legendre(0.0, a, panels, nodes_per_panel);
  // kernel sin(beta*(a-z))/beta and its y-derivative cos(beta*(a-z))
  const cplx s = integrate(rule, [&](double z) {
    return std::sin(beta * (a - z)) / beta * first_order_source(n, p, z).v1;
  });
  const cplx t_int = integrate(rule, [&](double z) {
    return std::cos(beta * (a - z)) * first_order_source(n, p, z).v1;
  });
  const cplx tau1 = first_order_source(n, p, a).tau1;
  return {s, p.mu * t_int + tau1};
}

InterfaceCoefficients first_order_coefficients(int n, const SceneParameters& p) {
  const double kappa = p.wavenumber();
  const cplx mu = p.mu;
  const auto [eta, gamma] = slab_wavenumbers(n, p);
  const cplx beta = mode_wavenumbers(n, p).beta;
  const cplx rho = boundary_source_rho(p);
  const cplx phi0 = interface_determinant_phi(0, p);
  const cplx phin = interface_determinant_phi(n, p);
  check_resonance(0, phi0, kappa);
  check_resonance(n, phin, kappa);

  const cplx pref = -8.0 * kappa * eta * mu * mu * rho * beta / (phi0 * phin);
  const double b = p.slab_top;
  InterfaceCoefficients c;
  c.a = pref * (gamma + mu * beta) * cexp(-kI * gamma * b);
  c.b = pref * (gamma - mu * beta) * cexp(kI * gamma * b);
  c.c = 0.0;
  c.d = 0.0;
  return c;
}

cplx first_order_trace(int n, const SceneParameters& p) {
  const double kappa = p.wavenumber();
  const cplx mu = p.mu;
  const auto [eta, gamma] = slab_wavenumbers(n, p);
  const cplx beta = mode_wavenumbers(n, p).beta;
  const cplx rho = boundary_source_rho(p);
  const cplx phi0 = interface_determinant_phi(0, p);
  const cplx phin = interface_determinant_phi(n, p);
  check_resonance(0, phi0, kappa);
  check_resonance(n, phin, kappa);
  // bracket evaluated at the measurement line, where both exponentials are 1
  return -8.0 * kappa * eta * mu * mu * rho * beta / (phi0 * phin) * 2.0 * gamma;
}

cplx scaling_factor_upsilon(int n, const SceneParameters& p) {
  p.validate();
  const double kappa = p.wavenumber();
  const cplx beta = mode_wavenumbers(n, p).beta;
  const auto [eta, gamma] = slab_wavenumbers(n, p);
  if (std::abs(beta) < kDegenerateModeTol * kappa) {
    throw DegenerateModeError(n, "beta_" + std::to_string(n) +
                                     " numerically zero (grazing mode)");
  }
  if (std::abs(gamma) < kDegenerateModeTol * kappa) {
    throw DegenerateModeError(n, "gamma_" + std::to_string(n) +
                                     " numerically zero (grazing slab mode)");
  }
  const cplx rho = boundary_source_rho(p);
  const cplx phi0 = interface_determinant_phi(0, p);
  const cplx phin = interface_determinant_phi(n, p);
  check_resonance(0, phi0, kappa);
  check_resonance(n, phin, kappa);
  return -phi0 * phin /
         (16.0 * kappa * eta * p.mu * p.mu * rho * beta * gamma);
}

UpsilonScan upsilon_scan(int n_max, std::span<const SceneParameters> sets) {
  UpsilonScan scan;
  scan.n_max = n_max;
  scan.sets.assign(sets.begin(), sets.end());
  for (const auto& p : sets) {
    p.validate();
    std::vector<double> mags(static_cast<std::size_t>(n_max) + 1);
    std::vector<bool> skip(static_cast<std::size_t>(n_max) + 1, false);
    for (int n = 0; n <= n_max; ++n) {
      try {
        mags[static_cast<std::size_t>(n)] =
            std::abs(scaling_factor_upsilon(n, p));
      } catch (const DegenerateModeError&) {
        mags[static_cast<std::size_t>(n)] =
            std::numeric_limits<double>::quiet_NaN();
        skip[static_cast<std::size_t>(n)] = true;
      }
    }
    scan.magnitude.push_back(std::move(mags));
    scan.skipped.push_back(std::move(skip));
  }
  return scan;
}

void write_upsilon_csv(const UpsilonScan& scan, std::ostream& os) {
  os << "n";
  for (const auto& p : scan.sets) {
    os << ",abs_upsilon[eps=" << fmt_cplx(p.eps) << " mu=" << fmt_cplx(p.mu)
       << "]";
  }
  os << "\n";
  for (int n = 0; n <= scan.n_max; ++n) {
    os << n;
    for (std::size_t s = 0; s < scan.sets.size(); ++s) {
      const auto idx = static_cast<std::size_t>(n);
      if (scan.skipped[s][idx]) {
        os << ",skipped";
      } else {
        os << "," << fmt_g17(scan.magnitude[s][idx]);
      }
    }
    os << "\n";
  }
}

}  // namespace superlens
