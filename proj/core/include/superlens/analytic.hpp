#ifndef SUPERLENS_ANALYTIC_HPP
#define SUPERLENS_ANALYTIC_HPP

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "superlens/scene.hpp"
#include "superlens/spectral.hpp"

namespace superlens {

// Closed-form quantities of the transformed-field expansion at orders zero
// and one, plus a dense 4x4 interface-system solver used as an internal
// oracle for all of them. First-order quantities are computed per unit
// profile coefficient g^(n); callers multiply by their own g^(n).

/// Degenerate-mode threshold: |beta_n| or |gamma_n| below tol*kappa means
/// the mode has no usable scaling factor.
inline constexpr double kDegenerateModeTol = 1e-10;

/// Resonance threshold on the interface determinant, relative to its
/// natural 4*kappa^2 scale.
inline constexpr double kResonanceTol = 1e-12;

/// Boundary forcing of the transparent boundary condition on the
/// measurement line: rho = -2i*kappa*exp(-i*kappa*b).
cplx boundary_source_rho(const SceneParameters& p);

/// Two-term closed form of the 4x4 interface-system determinant for mode n.
cplx interface_determinant_phi(int n, const SceneParameters& p);

/// The 4x4 linear system coupling the four field coefficients of one mode:
/// rows are the Robin condition on the measurement line, continuity and the
/// flux jump on the slab's lower face, and the Dirichlet condition on the
/// flattened surface.
struct InterfaceSystem {
  Eigen::Matrix4cd matrix;

  static InterfaceSystem build(int n, const SceneParameters& p);

  /// Dense determinant, kept as an independent oracle for
  /// interface_determinant_phi.
  cplx determinant() const { return matrix.determinant(); }
};

/// Field coefficients (slab up/down, vacuum up/down amplitudes) of one mode.
struct InterfaceCoefficients {
  cplx a, b, c, d;
};

/// Solves the interface system for rhs = (r, s, t, 0) by partially pivoted
/// elimination. Throws ResonanceError when the determinant is below the
/// resonance threshold.
InterfaceCoefficients solve_interface_system(int n, const SceneParameters& p,
                                             const std::array<cplx, 3>& rhs);

/// The x-independent total field over a flat surface: two plane waves in the
/// slab, a pure sine below it.
struct ZerothOrderField {
  cplx a0, b0, c0, d0;   // mode-0 coefficients
  SceneParameters scene;

  /// Evaluates on 0 <= y <= slab_top with the two-branch rule.
  cplx value(double y) const;
  /// Field value on the measurement line, the reference subtracted by the
  /// reconstruction formula.
  cplx value_at_top() const;
  /// d/dy of the slab branch (used when forming the first-order interface
  /// jump).
  cplx slab_derivative(double y) const;
};

ZerothOrderField zeroth_order_field(const SceneParameters& p);

/// First-order volume and interface sources per unit g^(n): v1 is the
/// bracketed factor of the volume term at height y, tau1 the constant
/// interface jump factor.
struct FirstOrderSource {
  cplx v1;
  cplx tau1;
};

FirstOrderSource first_order_source(int n, const SceneParameters& p, double y);

/// psi_n = 4*kappa*eta*mu^2*rho*beta_n / phi_0 (per unit g^(n)), the single
/// scalar through which the first-order sources enter the field.
cplx psi_closed_form(int n, const SceneParameters& p);

/// Independent evaluation of psi_n by composite Gauss-Legendre quadrature of
/// the first-order sources; the oracle for psi_closed_form.
cplx psi_quadrature(int n, const SceneParameters& p, int panels = 8,
                    int nodes_per_panel = 16);

/// Quadrature evaluation of the (s, t) interface data generated by the
/// first-order volume source (per unit g^(n)); feeds the 4x4 oracle.
std::pair<cplx, cplx> first_order_interface_rhs(int n, const SceneParameters& p,
                                                int panels = 8,
                                                int nodes_per_panel = 16);

/// Closed-form slab amplitudes (a, b) of the first-order field per unit
/// g^(n); c and d are not needed above the slab and are left zero.
InterfaceCoefficients first_order_coefficients(int n, const SceneParameters& p);

/// u1^(n) evaluated on the measurement line, per unit g^(n). Satisfies
/// scaling_factor_upsilon(n) * first_order_trace(n) == 1.
cplx first_order_trace(int n, const SceneParameters& p);

/// The mode-wise multiplier turning measured field coefficients into profile
/// coefficients. Invariant under a global sign flip of the determinant
/// convention (it contains the product phi_0*phi_n). Throws
/// DegenerateModeError when beta_n or gamma_n is numerically zero.
cplx scaling_factor_upsilon(int n, const SceneParameters& p);

/// |Upsilon_n| table for n = 0..n_max over several parameter sets.
/// Degenerate modes are marked, never dropped silently.
struct UpsilonScan {
  int n_max = 0;
  std::vector<SceneParameters> sets;
  // magnitude[s][n]; NaN where skipped[s][n] is true
  std::vector<std::vector<double>> magnitude;
  std::vector<std::vector<bool>> skipped;
};

UpsilonScan upsilon_scan(int n_max, std::span<const SceneParameters> sets);

/// CSV emission: column n, then one |Upsilon_n| column per parameter set;
/// the header labels each column with its (eps, mu).
void write_upsilon_csv(const UpsilonScan& scan, std::ostream& os);

}  // namespace superlens

#endif  // SUPERLENS_ANALYTIC_HPP
