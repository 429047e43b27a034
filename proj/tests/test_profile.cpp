#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "superlens/profile.hpp"
#include "superlens/quadrature.hpp"

using namespace superlens;

namespace {

constexpr double kPi = std::numbers::pi;

Profile smooth_profile(double delta = 0.01) {
  return Profile::cosine_sum({{1, 0.4}, {3, 0.3}, {10, 0.2}}, delta, 1.0);
}

Profile tent_profile(double delta = 0.01) {
  return Profile::tent_sum({{0.3, 0.1, 1.0}, {0.7, 0.1, 1.0}}, delta, 1.0);
}

Profile boxcar_profile(double delta = 0.001) {
  return Profile::boxcar_sum({{0.2, 0.4}, {0.6, 0.8}}, delta, 1.0);
}

/// piecewise Gauss-Legendre Fourier analysis; exact for these shapes because
/// every piece is smooth between the given breakpoints
cplx coefficient_by_quadrature(const Profile& prof, int n,
                               const std::vector<double>& breaks) {
  cplx acc(0.0, 0.0);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const auto rule = composite_gauss_legendre(breaks[k], breaks[k + 1], 2, 16);
    acc += integrate(rule, [&](double x) {
      return prof.g(x) * std::polar(1.0, -2.0 * kPi * n * x);
    });
  }
  return acc;
}

}  // namespace

TEST_CASE("cosine sum: pointwise values and exact coefficients") {
  const auto prof = smooth_profile();
  CHECK(prof.g(0.0) == doctest::Approx(0.9));
  CHECK(prof.g(0.5) == doctest::Approx(0.4 * std::cos(kPi) + 0.3 * std::cos(3 * kPi) +
                                       0.2 * std::cos(10 * kPi)));
  CHECK(prof.smooth());

  CHECK(std::abs(prof.g_coefficient(1) - 0.2) < 1e-15);
  CHECK(std::abs(prof.g_coefficient(-1) - 0.2) < 1e-15);
  CHECK(std::abs(prof.g_coefficient(3) - 0.15) < 1e-15);
  CHECK(std::abs(prof.g_coefficient(10) - 0.1) < 1e-15);
  CHECK(std::abs(prof.g_coefficient(2)) == 0.0);
  CHECK(std::abs(prof.g_coefficient(0)) == 0.0);
}

TEST_CASE("cosine sum: derivatives against finite differences") {
  const auto prof = smooth_profile();
  const double h = 1e-6;
  for (double x : {0.05, 0.21, 0.4, 0.83}) {
    const double dg_fd = (prof.g(x + h) - prof.g(x - h)) / (2.0 * h);
    const double d2g_fd = (prof.g(x + h) - 2.0 * prof.g(x) + prof.g(x - h)) / (h * h);
    CHECK(prof.dg(x) == doctest::Approx(dg_fd).epsilon(1e-6));
    CHECK(prof.d2g(x) == doctest::Approx(d2g_fd).epsilon(1e-3));
  }
}

TEST_CASE("tent sum: geometry and closed-form coefficients") {
  const auto prof = tent_profile();
  CHECK(prof.g(0.3) == doctest::Approx(1.0));
  CHECK(prof.g(0.2) == doctest::Approx(0.0));
  CHECK(prof.g(0.25) == doctest::Approx(0.5));
  CHECK(prof.g(0.5) == doctest::Approx(0.0));
  CHECK(prof.g(0.7) == doctest::Approx(1.0));
  CHECK_FALSE(prof.smooth());
  CHECK(prof.dg(0.25) == doctest::Approx(10.0));
  CHECK(prof.dg(0.35) == doctest::Approx(-10.0));

  // two tents of area h*w = 0.1 each
  CHECK(std::abs(prof.g_coefficient(0) - 0.2) < 1e-14);
  const std::vector<double> breaks{0.0, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 1.0};
  for (int n = -8; n <= 8; ++n) {
    const cplx want = coefficient_by_quadrature(prof, n, breaks);
    CAPTURE(n);
    CHECK(std::abs(prof.g_coefficient(n) - want) < 1e-12);
  }
}

TEST_CASE("boxcar sum: geometry and closed-form coefficients") {
  const auto prof = boxcar_profile();
  CHECK(prof.g(0.3) == doctest::Approx(1.0));
  CHECK(prof.g(0.5) == doctest::Approx(0.0));
  CHECK(prof.g(0.7) == doctest::Approx(1.0));
  CHECK(prof.dg(0.3) == 0.0);
  CHECK(prof.d2g(0.3) == 0.0);

  CHECK(std::abs(prof.g_coefficient(0) - 0.4) < 1e-14);
  const std::vector<double> breaks{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  for (int n = -8; n <= 8; ++n) {
    const cplx want = coefficient_by_quadrature(prof, n, breaks);
    CAPTURE(n);
    CHECK(std::abs(prof.g_coefficient(n) - want) < 1e-12);
  }
}

TEST_CASE("profiles are periodic") {
  for (const auto& prof : {smooth_profile(), tent_profile(), boxcar_profile()}) {
    for (double x : {0.13, 0.35, 0.77}) {
      CHECK(prof.g(x) == doctest::Approx(prof.g(x + 1.0)).epsilon(1e-12));
      CHECK(prof.g(x) == doctest::Approx(prof.g(x - 3.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("spectral projection matches coefficients inside the band") {
  const auto prof = tent_profile();
  const auto proj = prof.projected(16);
  CHECK(proj.smooth());
  CHECK(proj.delta() == prof.delta());
  for (int n = -16; n <= 16; ++n) {
    CHECK(std::abs(proj.g_coefficient(n) - prof.g_coefficient(n)) < 1e-15);
  }
  CHECK(std::abs(proj.g_coefficient(17)) == 0.0);

  // the projection is a real band-limited function close to g in the mean
  double mse = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double x = i / 400.0;
    const double d = proj.g(x) - prof.g(x);
    mse += d * d / 400.0;
  }
  CHECK(mse < 1e-3);
}

TEST_CASE("mode-list profiles synthesize and differentiate consistently") {
  ModeCoefficients coeffs(2);
  coeffs[0] = 0.1;
  coeffs[1] = cplx(0.05, 0.02);
  coeffs[-1] = std::conj(coeffs[1]);
  coeffs[2] = cplx(0.0, -0.01);
  coeffs[-2] = std::conj(coeffs[2]);
  const auto prof = Profile::fourier_modes(coeffs, 0.01, 1.0);
  CHECK(prof.smooth());

  const double h = 1e-6;
  for (double x : {0.1, 0.42, 0.9}) {
    const double dg_fd = (prof.g(x + h) - prof.g(x - h)) / (2.0 * h);
    CHECK(prof.dg(x) == doctest::Approx(dg_fd).epsilon(1e-6));
  }
  CHECK(std::abs(prof.g_coefficient(2) - coeffs[2]) == 0.0);
  CHECK(std::abs(prof.g_coefficient(5)) == 0.0);
}

TEST_CASE("max_abs_g bounds the sampled shape") {
  CHECK(smooth_profile().max_abs_g() == doctest::Approx(0.9).epsilon(1e-3));
  CHECK(tent_profile().max_abs_g() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(boxcar_profile().max_abs_g() == doctest::Approx(1.0).epsilon(1e-6));
}
