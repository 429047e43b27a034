#include "superlens/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace superlens {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double z) { return (std::abs(z) < 1e-8) ? 1.0 - z * z / 6.0 : std::sin(z) / z; }

/// wrap into [-period/2, period/2)
double wrap_centered(double x, double period) {
  double r = std::fmod(x, period);
  if (r < -0.5 * period) r += period;
  if (r >= 0.5 * period) r -= period;
  return r;
}

/// wrap into [0, period)
double wrap_positive(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

}  // namespace

Profile Profile::cosine_sum(std::vector<CosineTerm> terms, double delta,
                            double period) {
  Profile p;
  p.shape_ = std::move(terms);
  p.delta_ = delta;
  p.period_ = period;
  return p;
}

Profile Profile::tent_sum(std::vector<Tent> tents, double delta, double period) {
  Profile p;
  p.shape_ = std::move(tents);
  p.delta_ = delta;
  p.period_ = period;
  return p;
}

Profile Profile::boxcar_sum(std::vector<Boxcar> boxes, double delta,
                            double period) {
  Profile p;
  p.shape_ = std::move(boxes);
  p.delta_ = delta;
  p.period_ = period;
  return p;
}

Profile Profile::fourier_modes(ModeCoefficients coeffs, double delta,
                               double period) {
  Profile p;
  p.shape_ = std::move(coeffs);
  p.delta_ = delta;
  p.period_ = period;
  return p;
}

Profile Profile::flat(double period) {
  return cosine_sum({}, 0.0, period);
}

double Profile::g(double x) const {
  const double w0 = kTwoPi / period_;
  return std::visit(
      [&](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, std::vector<CosineTerm>>) {
          double acc = 0.0;
          for (const auto& t : shape) acc += t.amplitude * std::cos(w0 * t.harmonic * x);
          return acc;
        } else if constexpr (std::is_same_v<T, std::vector<Tent>>) {
          double acc = 0.0;
          for (const auto& t : shape) {
            const double u = std::abs(wrap_centered(x - t.center, period_));
            if (u < t.half_width) acc += t.height * (1.0 - u / t.half_width);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, std::vector<Boxcar>>) {
          double acc = 0.0;
          const double xw = wrap_positive(x, period_);
          for (const auto& bx : shape) {
            if (xw >= bx.lo && xw <= bx.hi) acc += 1.0;
          }
          return acc;
        } else {
          const auto& c = shape;
          cplx acc(0.0, 0.0);
          for (int n = -c.band(); n <= c.band(); ++n) {
            acc += c[n] * std::polar(1.0, w0 * n * x);
          }
          return acc.real();
        }
      },
      shape_);
}

double Profile::dg(double x) const {
  const double w0 = kTwoPi / period_;
  return std::visit(
      [&](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, std::vector<CosineTerm>>) {
          double acc = 0.0;
          for (const auto& t : shape) {
            acc -= t.amplitude * w0 * t.harmonic * std::sin(w0 * t.harmonic * x);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, std::vector<Tent>>) {
          double acc = 0.0;
          for (const auto& t : shape) {
            const double u = wrap_centered(x - t.center, period_);
            if (std::abs(u) < t.half_width && u != 0.0) {
              acc += (u > 0.0 ? -1.0 : 1.0) * t.height / t.half_width;
            }
          }
          return acc;
        } else if constexpr (std::is_same_v<T, std::vector<Boxcar>>) {
          return 0.0;  // zero a.e.; jumps carry no classical derivative
        } else {
          const auto& c = shape;
          cplx acc(0.0, 0.0);
          for (int n = -c.band(); n <= c.band(); ++n) {
            acc += c[n] * cplx(0.0, w0 * n) * std::polar(1.0, w0 * n * x);
          }
          return acc.real();
        }
      },
      shape_);
}

double Profile::d2g(double x) const {
  const double w0 = kTwoPi / period_;
  return std::visit(
      [&](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, std::vector<CosineTerm>>) {
          double acc = 0.0;
          for (const auto& t : shape) {
            const double w = w0 * t.harmonic;
            acc -= t.amplitude * w * w * std::cos(w * x);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, ModeCoefficients>) {
          const auto& c = shape;
          cplx acc(0.0, 0.0);
          for (int n = -c.band(); n <= c.band(); ++n) {
            const double w = w0 * n;
            acc -= c[n] * w * w * std::polar(1.0, w * x);
          }
          return acc.real();
        } else {
          return 0.0;  // piecewise-linear / piecewise-constant
        }
      },
      shape_);
}

cplx Profile::g_coefficient(int n) const {
  return std::visit(
      [&](const auto& shape) -> cplx {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, std::vector<CosineTerm>>) {
          cplx acc(0.0, 0.0);
          for (const auto& t : shape) {
            if (t.harmonic == 0) {
              if (n == 0) acc += t.amplitude;
            } else if (n == t.harmonic || n == -t.harmonic) {
              acc += 0.5 * t.amplitude;
            }
          }
          return acc;
        } else if constexpr (std::is_same_v<T, std::vector<Tent>>) {
          cplx acc(0.0, 0.0);
          for (const auto& t : shape) {
            const double z = std::numbers::pi * n * t.half_width / period_;
            const double s = sinc(z);
            acc += t.height * t.half_width / period_ * s * s *
                   std::polar(1.0, -kTwoPi * n * t.center / period_);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, std::vector<Boxcar>>) {
          cplx acc(0.0, 0.0);
          for (const auto& bx : shape) {
            const double d = bx.hi - bx.lo;
            const double z = std::numbers::pi * n * d / period_;
            acc += d / period_ * sinc(z) *
                   std::polar(1.0, -std::numbers::pi * n * (bx.lo + bx.hi) / period_);
          }
          return acc;
        } else {
          const auto& c = shape;
          return (std::abs(n) <= c.band()) ? c[n] : cplx(0.0, 0.0);
        }
      },
      shape_);
}

bool Profile::smooth() const {
  return std::holds_alternative<std::vector<CosineTerm>>(shape_) ||
         std::holds_alternative<ModeCoefficients>(shape_);
}

Profile Profile::projected(int band) const {
  ModeCoefficients coeffs(band);
  for (int n = -band; n <= band; ++n) coeffs[n] = g_coefficient(n);
  return fourier_modes(std::move(coeffs), delta_, period_);
}

double Profile::max_abs_g() const {
  const int samples = 4096;
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    m = std::max(m, std::abs(g(i * period_ / samples)));
  }
  return m;
}

std::string Profile::kind() const {
  return std::visit(
      [](const auto& shape) -> std::string {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, std::vector<CosineTerm>>) return "cosine-sum";
        else if constexpr (std::is_same_v<T, std::vector<Tent>>) return "tent-sum";
        else if constexpr (std::is_same_v<T, std::vector<Boxcar>>) return "boxcar-sum";
        else return "fourier-modes";
      },
      shape_);
}

}  // namespace superlens
