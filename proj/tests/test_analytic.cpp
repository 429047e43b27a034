#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "superlens/analytic.hpp"
#include "superlens/errors.hpp"
#include "superlens/experiment.hpp"
#include "superlens/quadrature.hpp"

using namespace superlens;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double rel(cplx got, cplx want) {
  const double s = std::abs(want);
  return s > 0.0 ? std::abs(got - want) / s : std::abs(got - want);
}

SceneParameters scene(cplx eps, cplx mu) {
  SceneParameters p;
  p.period = 1.0;
  p.wavelength = 1.1;
  p.slab_bottom = 0.1;
  p.slab_top = 0.2;
  p.eps = eps;
  p.mu = mu;
  return p;
}

SceneParameters random_scene(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  SceneParameters p;
  p.period = 0.5 + 1.5 * uni(rng);
  p.wavelength = 0.6 + 1.2 * uni(rng);
  p.slab_bottom = 0.05 + 0.1 * uni(rng);
  p.slab_top = p.slab_bottom + 0.05 + 0.15 * uni(rng);
  p.eps = cplx(-2.0 + 4.0 * uni(rng), 1.5 * uni(rng));
  p.mu = cplx(-2.0 + 4.0 * uni(rng), 1.5 * uni(rng));
  return p;
}

}  // namespace

TEST_CASE("boundary source magnitude and phase") {
  auto p = scene({1, 0}, {1, 0});
  const double kappa = p.wavenumber();
  CHECK(std::abs(std::abs(boundary_source_rho(p)) - 2.0 * kappa) < 1e-13);

  auto p0 = p;
  p0.slab_top = 1e-30;  // b -> 0 limit of the forcing
  p0.slab_bottom = 1e-31;
  CHECK(rel(boundary_source_rho(p0), -2.0 * kI * kappa) < 1e-12);

  for (double b : {0.15, 0.4, 0.9}) {
    auto pb = p;
    pb.slab_top = b;
    CHECK(std::abs(std::abs(boundary_source_rho(pb)) - 2.0 * kappa) < 1e-13);
  }
}

TEST_CASE("interface determinant special cases") {
  SUBCASE("vacuum slab magnitude") {
    const auto p = scene({1, 0}, {1, 0});
    for (int n = 0; n <= 12; ++n) {
      const cplx beta = mode_wavenumbers(n, p).beta;
      const double want =
          4.0 * std::norm(beta) * std::abs(std::exp(-kI * beta * p.slab_top));
      CHECK(std::abs(std::abs(interface_determinant_phi(n, p)) - want) <=
            1e-12 * want);
    }
  }
  SUBCASE("perfectly matched parameters magnitude") {
    const auto p = scene({-1, 0}, {-1, 0});
    for (int n = 0; n <= 12; ++n) {
      const cplx beta = mode_wavenumbers(n, p).beta;
      const double want =
          4.0 * std::norm(beta) *
          std::abs(std::exp(kI * beta * (p.slab_top - 2.0 * p.slab_bottom)));
      CHECK(std::abs(std::abs(interface_determinant_phi(n, p)) - want) <=
            1e-12 * want);
    }
  }
}

TEST_CASE("closed-form determinant equals the dense 4x4 determinant") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int tested = 0;
  while (tested < 1000) {
    const auto p = random_scene(rng);
    if (std::abs(p.mu) < 0.2) continue;
    const int n = static_cast<int>(5.0 * uni(rng));
    const cplx phi = interface_determinant_phi(n, p);
    if (std::abs(phi) < 1e-6) continue;  // keep away from resonances
    const cplx det = InterfaceSystem::build(n, p).determinant();
    CAPTURE(p.eps);
    CAPTURE(p.mu);
    CAPTURE(n);
    REQUIRE(rel(det, phi) < 1e-12);
    ++tested;
  }
}

TEST_CASE("interface system solve against the zeroth-order closed forms") {
  std::mt19937_64 rng(202);
  int tested = 0;
  while (tested < 300) {
    const auto p = random_scene(rng);
    if (std::abs(p.mu) < 0.3) continue;
    if (std::abs(interface_determinant_phi(0, p)) < 1e-4) continue;
    const cplx rho = boundary_source_rho(p);
    const auto got = solve_interface_system(0, p, {p.mu * rho, 0.0, 0.0});
    const auto want = zeroth_order_field(p);
    CAPTURE(p.eps);
    CAPTURE(p.mu);
    REQUIRE(rel(got.a, want.a0) < 1e-10);
    REQUIRE(rel(got.b, want.b0) < 1e-10);
    REQUIRE(rel(got.c, want.c0) < 1e-10);
    REQUIRE(rel(got.d, want.d0) < 1e-10);
    ++tested;
  }
}

TEST_CASE("interface system solve: zero data and first-order data") {
  const auto p = scene({-1.0, 0.05}, {-0.97, 0.0});

  SUBCASE("zero right-hand side") {
    const auto c = solve_interface_system(3, p, {0.0, 0.0, 0.0});
    CHECK(std::abs(c.a) == 0.0);
    CHECK(std::abs(c.b) == 0.0);
    CHECK(std::abs(c.c) == 0.0);
    CHECK(std::abs(c.d) == 0.0);
  }
  SUBCASE("first-order interface data reproduces the closed-form amplitudes") {
    for (int n : {0, 1, 2, 5, 8}) {
      const auto [s, t] = first_order_interface_rhs(n, p);
      const auto got = solve_interface_system(n, p, {0.0, s, t});
      const auto want = first_order_coefficients(n, p);
      CAPTURE(n);
      CHECK(rel(got.a, want.a) < 1e-9);
      CHECK(rel(got.b, want.b) < 1e-9);
    }
  }
}

TEST_CASE("zeroth order field is the mirror solution without a slab") {
  const auto p = scene({1, 0}, {1, 0});
  const auto u0 = zeroth_order_field(p);
  const double kappa = p.wavenumber();
  for (int k = 0; k <= 40; ++k) {
    const double y = k * p.slab_top / 40.0;
    const cplx mirror = std::exp(-kI * kappa * y) - std::exp(kI * kappa * y);
    REQUIRE(std::abs(u0.value(y) - mirror) < 1e-12);
  }
}

TEST_CASE("zeroth order field: Dirichlet zero and interface continuity") {
  for (const auto& p : reference_parameter_sets()) {
    const auto u0 = zeroth_order_field(p);
    CAPTURE(p.eps);
    CHECK(std::abs(u0.value(0.0)) < 1e-13);
    const double a = p.slab_bottom;
    CHECK(rel(u0.value(std::nextafter(a, 0.0)), u0.value(a)) < 1e-12);
  }
}

TEST_CASE("first-order sources") {
  const auto p = scene({-1, 0}, {-1, 0});
  const double kappa = p.wavenumber();
  const double a = p.slab_bottom;
  const cplx eta = slab_wavenumbers(0, p).eta;
  const cplx rho = boundary_source_rho(p);
  const cplx phi0 = interface_determinant_phi(0, p);
  const cplx pref = 4.0 * kappa * eta * p.mu * rho / (a * phi0);

  SUBCASE("the (a - y) term vanishes at the interface") {
    const auto src = first_order_source(4, p, a);
    CHECK(rel(src.v1, pref * 2.0 * kappa * std::sin(kappa * a)) < 1e-13);
  }
  SUBCASE("mode zero has no cosine contribution at any height") {
    for (double y : {0.0, 0.03, 0.07, a}) {
      const auto src = first_order_source(0, p, y);
      CHECK(rel(src.v1, pref * 2.0 * kappa * std::sin(kappa * y)) < 1e-13);
    }
  }
}

TEST_CASE("psi closed form against quadrature across all reference sets") {
  for (const auto& p : reference_parameter_sets()) {
    for (int n = 0; n <= 12; ++n) {
      CAPTURE(p.eps);
      CAPTURE(n);
      REQUIRE(rel(psi_quadrature(n, p), psi_closed_form(n, p)) < 1e-8);
    }
  }
}

TEST_CASE("psi evenness and quadrature self-convergence") {
  const auto p = scene({-1.0, 0.1}, {-1.06, 0.0});
  for (int n = 1; n <= 8; ++n) {
    CHECK(psi_closed_form(n, p) == psi_closed_form(-n, p));
  }
  // doubling the node count moves the smooth-integrand result below 1e-12
  for (int n : {0, 3, 7}) {
    const cplx coarse = psi_quadrature(n, p, 8, 16);
    const cplx fine = psi_quadrature(n, p, 16, 16);
    CHECK(rel(fine, coarse) < 1e-12);
  }
}

TEST_CASE("shrinking the lower region kills the volume contribution") {
  // The interface term carries the a -> 0 limit; the integral part of psi
  // vanishes with the domain, and closed form tracks quadrature throughout.
  auto p = scene({-1.0, 0.05}, {-0.97, 0.0});
  std::vector<double> integral_sizes;
  for (double a : {0.1, 0.01, 0.001}) {
    p.slab_bottom = a;
    const cplx tau_term =
        std::sin(mode_wavenumbers(2, p).beta * a) * first_order_source(2, p, a).tau1;
    integral_sizes.push_back(std::abs(psi_quadrature(2, p) - tau_term));
    CHECK(rel(psi_quadrature(2, p), psi_closed_form(2, p)) < 1e-8);
  }
  CHECK(integral_sizes[1] < integral_sizes[0]);
  CHECK(integral_sizes[2] < integral_sizes[1]);
  CHECK(integral_sizes[2] < 1e-2 * integral_sizes[0]);
}

TEST_CASE("fundamental identity: scaling factor times first-order trace") {
  for (const auto& p : reference_parameter_sets()) {
    for (int n = 0; n <= 12; ++n) {
      CAPTURE(p.eps);
      CAPTURE(n);
      REQUIRE(std::abs(scaling_factor_upsilon(n, p) * first_order_trace(n, p) - 1.0) <
              1e-12);
    }
  }
}

TEST_CASE("first-order trace evenness") {
  for (const auto& p : reference_parameter_sets()) {
    for (int n = 1; n <= 10; ++n) {
      CHECK(first_order_trace(n, p) == first_order_trace(-n, p));
      CHECK(scaling_factor_upsilon(n, p) == scaling_factor_upsilon(-n, p));
    }
  }
}

TEST_CASE("scaling factor special cases") {
  const double kappa = 2.0 * kPi / 1.1;

  SUBCASE("no slab: flat for propagating modes, exponential when evanescent") {
    const auto p = scene({1, 0}, {1, 0});
    // Lambda/lambda < 1, so only n = 0 propagates
    CHECK(std::abs(std::abs(scaling_factor_upsilon(0, p)) - 1.0 / (2.0 * kappa)) <
          1e-12 / kappa);
    CHECK(std::abs(scaling_factor_upsilon(0, p)) == doctest::Approx(0.087535).epsilon(1e-4));
    for (int n = 1; n <= 20; ++n) {
      const cplx beta = mode_wavenumbers(n, p).beta;
      const double want = std::exp(std::abs(beta) * p.slab_top) / (2.0 * kappa);
      CHECK(std::abs(std::abs(scaling_factor_upsilon(n, p)) - want) <= 1e-12 * want);
    }
  }
  SUBCASE("perfect parameters with b = 2a: constant magnitude for every mode") {
    const auto p = scene({-1, 0}, {-1, 0});
    REQUIRE(p.slab_top == doctest::Approx(2.0 * p.slab_bottom));
    for (int n = 0; n <= 40; ++n) {
      CHECK(std::abs(std::abs(scaling_factor_upsilon(n, p)) - 1.0 / (2.0 * kappa)) <=
            1e-12 / (2.0 * kappa));
    }
  }
  SUBCASE("invariant under a global determinant sign flip") {
    const auto p = scene({-1.0, 0.05}, {-0.97, 0.0});
    for (int n = 0; n <= 10; ++n) {
      const cplx phi0 = interface_determinant_phi(0, p);
      const cplx phin = interface_determinant_phi(n, p);
      // Upsilon contains the product phi_0 * phi_n, so (-phi_0)(-phi_n)
      // reproduces it exactly
      CHECK((-phi0) * (-phin) == phi0 * phin);
    }
  }
}

TEST_CASE("grazing modes raise degenerate-mode errors") {
  auto p = scene({1, 0}, {1, 0});
  p.wavelength = 1.0;  // alpha_1 == kappa exactly: beta_1 = 0
  CHECK_THROWS_AS((void)scaling_factor_upsilon(1, p), DegenerateModeError);
  CHECK_NOTHROW((void)scaling_factor_upsilon(0, p));

  // gamma-only anomaly: eps = 4 makes eta = 2*kappa = alpha_2 at wavelength 1,
  // so gamma_2 vanishes while beta_2 stays evanescent
  auto q = scene({4.0, 0.0}, {1.0, 0.0});
  q.wavelength = 1.0;
  CHECK(std::abs(mode_wavenumbers(2, q).beta) > 1.0);
  CHECK_THROWS_AS((void)scaling_factor_upsilon(2, q), DegenerateModeError);
}

TEST_CASE("upsilon scan across the reference sets") {
  const auto sets = reference_parameter_sets();
  const auto scan = upsilon_scan(20, sets);
  REQUIRE(scan.magnitude.size() == sets.size());
  const double kappa = sets[0].wavenumber();
  const double flat = 1.0 / (2.0 * kappa);

  // no slab: growth right from n = 0
  CHECK(scan.magnitude[0][1] > scan.magnitude[0][0]);
  CHECK(scan.magnitude[0][20] > 1e4 * flat);
  // high refractive index: small for a few modes, then exponential
  CHECK(scan.magnitude[1][1] < 10.0 * flat);
  CHECK(scan.magnitude[1][20] > 1e3 * flat);
  // perfect parameters: bounded for every mode
  for (int n = 0; n <= 20; ++n) {
    CHECK(scan.magnitude[2][static_cast<std::size_t>(n)] <= flat * (1.0 + 1e-12));
  }
  // imperfect parameters: flat for small n, exponential growth later
  CHECK(scan.magnitude[3][1] < 3.0 * flat);
  CHECK(scan.magnitude[3][20] / scan.magnitude[3][10] > 10.0);

  // no degenerate modes at these parameters
  for (const auto& skip_row : scan.skipped) {
    for (bool s : skip_row) CHECK_FALSE(s);
  }
}

TEST_CASE("upsilon scan CSV marks degenerate modes instead of dropping them") {
  auto p = scene({1, 0}, {1, 0});
  p.wavelength = 1.0;  // beta_1 degenerate
  const std::vector<SceneParameters> sets{p};
  const auto scan = upsilon_scan(2, sets);
  CHECK(scan.skipped[0][1]);
  CHECK_FALSE(scan.skipped[0][0]);
  CHECK_FALSE(scan.skipped[0][2]);

  std::ostringstream os;
  write_upsilon_csv(scan, os);
  const std::string csv = os.str();
  CHECK(csv.find("skipped") != std::string::npos);
  CHECK(csv.find("eps=1") != std::string::npos);
}
