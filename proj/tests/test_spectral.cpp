#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "superlens/spectral.hpp"

using namespace superlens;

namespace {
constexpr double kPi = std::numbers::pi;

SceneParameters reference_scene() {
  SceneParameters p;
  p.period = 1.0;
  p.wavelength = 1.1;
  p.slab_bottom = 0.1;
  p.slab_top = 0.2;
  p.eps = {1.0, 0.0};
  p.mu = {1.0, 0.0};
  return p;
}
}  // namespace

TEST_CASE("branch_sqrt fixed points") {
  CHECK(branch_sqrt({1.0, 0.0}) == cplx(1.0, 0.0));
  CHECK(std::abs(branch_sqrt({-4.0, 0.0}) - cplx(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(branch_sqrt({0.0, 2.0}) - cplx(1.0, 1.0)) < 1e-15);
  // the cut itself evaluates as the limit from above, so a negative-zero
  // imaginary part (the exact eps*mu == 1 product) stays on the real axis
  CHECK(branch_sqrt(cplx(-1.0, 0.0) * cplx(-1.0, 0.0)) == cplx(1.0, 0.0));
}

TEST_CASE("branch_sqrt square law and half-plane range") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < 100000; ++k) {
    const double r = std::pow(10.0, -6.0 + 12.0 * uni(rng));
    const cplx z = std::polar(r, 2.0 * kPi * uni(rng));
    const cplx w = branch_sqrt(z);
    CAPTURE(z);
    REQUIRE(std::abs(w * w - z) <= 1e-14 * std::abs(z));
    REQUIRE(std::arg(w) >= 0.0);
    REQUIRE(std::arg(w) < kPi + 1e-15);
  }
}

TEST_CASE("mode wavenumbers at the reference parameters") {
  const auto p = reference_scene();
  const double kappa = 2.0 * kPi / 1.1;

  const auto m0 = mode_wavenumbers(0, p);
  CHECK(m0.alpha == 0.0);
  CHECK(std::abs(m0.beta - cplx(kappa, 0.0)) < 1e-14);

  // evanescent first mode: beta = i*sqrt(alpha^2 - kappa^2)
  const auto m1 = mode_wavenumbers(1, p);
  CHECK(m1.alpha == doctest::Approx(2.0 * kPi));
  const double expect = std::sqrt(4.0 * kPi * kPi - kappa * kappa);
  CHECK(m1.beta.real() == 0.0);
  CHECK(m1.beta.imag() == doctest::Approx(expect).epsilon(1e-14));
  CHECK(m1.beta.imag() == doctest::Approx(2.6176).epsilon(1e-4));

  const auto mm1 = mode_wavenumbers(-1, p);
  CHECK(mm1.alpha == -m1.alpha);
  CHECK(mm1.beta == m1.beta);
}

TEST_CASE("evanescent decay rates grow monotonically") {
  const auto p = reference_scene();
  double prev = 0.0;
  for (int n = 1; n <= 60; ++n) {
    const auto m = mode_wavenumbers(n, p);
    REQUIRE(std::abs(m.alpha) > p.wavenumber());  // all evanescent here
    REQUIRE(m.beta.imag() > prev);
    prev = m.beta.imag();
  }
}

TEST_CASE("slab wavenumbers: special materials") {
  auto p = reference_scene();

  SUBCASE("vacuum slab reduces to beta") {
    for (int n = 0; n <= 20; ++n) {
      CHECK(slab_wavenumbers(n, p).gamma == mode_wavenumbers(n, p).beta);
    }
  }
  SUBCASE("perfectly matched parameters reduce to beta") {
    p.eps = {-1.0, 0.0};
    p.mu = {-1.0, 0.0};
    CHECK(slab_wavenumbers(0, p).eta == cplx(p.wavenumber(), 0.0));
    for (int n = 0; n <= 20; ++n) {
      CHECK(std::abs(slab_wavenumbers(n, p).gamma - mode_wavenumbers(n, p).beta) <=
            1e-14 * std::abs(mode_wavenumbers(n, p).beta));
    }
  }
  SUBCASE("refractive index 4") {
    p.eps = {16.0, 0.0};
    CHECK(std::abs(slab_wavenumbers(0, p).eta - cplx(4.0 * p.wavenumber(), 0.0)) <
          1e-12);
  }
}

TEST_CASE("fourier_coefficients on elementary signals") {
  SUBCASE("constant") {
    std::vector<cplx> samples(37, cplx(1.0, 0.0));
    const auto c = fourier_coefficients(samples, 5);
    CHECK(std::abs(c[0] - 1.0) < 1e-14);
    for (int n = 1; n <= 5; ++n) {
      CHECK(std::abs(c[n]) < 1e-14);
      CHECK(std::abs(c[-n]) < 1e-14);
    }
  }
  SUBCASE("cosine splits into half amplitudes") {
    const int m_count = 100;
    std::vector<cplx> samples(m_count);
    for (int m = 0; m < m_count; ++m) {
      samples[m] = 0.4 * std::cos(2.0 * kPi * m / m_count);
    }
    const auto c = fourier_coefficients(samples, 1);
    CHECK(std::abs(c[1] - 0.2) < 1e-14);
    CHECK(std::abs(c[-1] - 0.2) < 1e-14);
    CHECK(std::abs(c[0]) < 1e-14);
  }
  SUBCASE("pure exponential") {
    const int m_count = 64;
    std::vector<cplx> samples(m_count);
    for (int m = 0; m < m_count; ++m) {
      samples[m] = std::polar(1.0, 2.0 * kPi * 2.0 * m / m_count);
    }
    const auto c = fourier_coefficients(samples, 2);
    CHECK(std::abs(c[2] - 1.0) < 1e-13);
    CHECK(std::abs(c[0]) < 1e-14);
    CHECK(std::abs(c[1]) < 1e-14);
    CHECK(std::abs(c[-1]) < 1e-14);
    CHECK(std::abs(c[-2]) < 1e-14);
  }
  SUBCASE("aliasing guard") {
    std::vector<cplx> samples(8, cplx(1.0, 0.0));
    CHECK_THROWS_AS((void)fourier_coefficients(samples, 4), std::invalid_argument);
  }
}

TEST_CASE("fourier_synthesis and the analysis round trip") {
  SUBCASE("single constant mode") {
    ModeCoefficients c(0);
    c[0] = 1.0;
    const std::vector<double> grid{0.0, 0.3, 0.77};
    for (const auto& v : fourier_synthesis(c, grid, 1.0)) {
      CHECK(std::abs(v - 1.0) < 1e-15);
    }
  }
  SUBCASE("conjugate pair at the origin") {
    ModeCoefficients c(1);
    c[1] = 0.2;
    c[-1] = 0.2;
    const std::vector<double> grid{0.0};
    CHECK(std::abs(fourier_synthesis(c, grid, 1.0)[0] - 0.4) < 1e-15);
  }
  SUBCASE("band-limited round trip") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const int band = 6, m_count = 2 * band + 1;
    ModeCoefficients c(band);
    for (int n = -band; n <= band; ++n) c[n] = cplx(uni(rng), uni(rng));
    std::vector<double> nodes(m_count);
    for (int m = 0; m < m_count; ++m) nodes[m] = m * 1.0 / m_count;
    const auto samples = fourier_synthesis(c, nodes, 1.0);
    const auto back = fourier_coefficients(samples, band);
    for (int n = -band; n <= band; ++n) {
      CHECK(std::abs(back[n] - c[n]) < 1e-13);
    }
  }
}

TEST_CASE("Parseval identity for full-band analysis") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int m_count = 101;  // odd: the full band is symmetric
  std::vector<cplx> samples(m_count);
  double power = 0.0;
  for (auto& s : samples) {
    s = cplx(uni(rng), uni(rng));
    power += std::norm(s);
  }
  power /= m_count;
  const auto c = fourier_coefficients(samples, (m_count - 1) / 2);
  double coeff_power = 0.0;
  for (int n = -c.band(); n <= c.band(); ++n) coeff_power += std::norm(c[n]);
  CHECK(std::abs(coeff_power - power) <= 1e-12 * power);
}

TEST_CASE("trigonometric interpolation reproduces even-count nodes") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n_pts = 32;
  std::vector<cplx> nodal(n_pts);
  for (auto& v : nodal) v = cplx(uni(rng), uni(rng));
  const TraceInterpolant interp(nodal, 2.0);
  for (int i = 0; i < n_pts; ++i) {
    CHECK(std::abs(interp(i * 2.0 / n_pts) - nodal[i]) < 1e-12);
  }
}
