#ifndef SUPERLENS_PROFILE_HPP
#define SUPERLENS_PROFILE_HPP

#include <string>
#include <variant>
#include <vector>

#include "superlens/scene.hpp"
#include "superlens/spectral.hpp"

namespace superlens {

/// Periodic surface profile f(x) = delta * g(x). The shape g comes from one
/// of four families; all of them expose exact Fourier coefficients, so the
/// spectral projection used by the forward solver and the truth modes used
/// by error metrics share one code path.
class Profile {
 public:
  struct CosineTerm {
    int harmonic;      // cos(2*pi*harmonic*x/period)
    double amplitude;
  };
  struct Tent {
    double center;
    double half_width;
    double height;
  };
  struct Boxcar {
    double lo;
    double hi;  // characteristic function of [lo, hi], height 1
  };

  static Profile cosine_sum(std::vector<CosineTerm> terms, double delta,
                            double period = 1.0);
  static Profile tent_sum(std::vector<Tent> tents, double delta,
                          double period = 1.0);
  static Profile boxcar_sum(std::vector<Boxcar> boxes, double delta,
                            double period = 1.0);
  static Profile fourier_modes(ModeCoefficients coeffs, double delta,
                               double period = 1.0);
  static Profile flat(double period = 1.0);

  double delta() const { return delta_; }
  double period() const { return period_; }

  double g(double x) const;
  double dg(double x) const;   // one-sided at kinks
  double d2g(double x) const;  // zero a.e. for tents and boxcars

  /// Exact Fourier coefficient of g for mode n.
  cplx g_coefficient(int n) const;

  /// True for shapes with classical g', g'' everywhere (cosine sums and
  /// band-limited mode lists); tent and boxcar shapes need the spectral
  /// projection before the transformed coefficients can be formed.
  bool smooth() const;

  /// Projection of g onto modes |n| <= band, returned as a mode-list
  /// profile with the same delta.
  Profile projected(int band) const;

  /// max |g| sampled densely over one period (used by the a - f > 0 check).
  double max_abs_g() const;

  std::string kind() const;

 private:
  Profile() = default;

  using Shape = std::variant<std::vector<CosineTerm>, std::vector<Tent>,
                             std::vector<Boxcar>, ModeCoefficients>;
  Shape shape_;
  double delta_ = 0.0;
  double period_ = 1.0;
};

}  // namespace superlens

#endif  // SUPERLENS_PROFILE_HPP
