#ifndef SUPERLENS_SCENE_HPP
#define SUPERLENS_SCENE_HPP

#include <complex>
#include <numbers>

namespace superlens {

using cplx = std::complex<double>;

/// Physical configuration shared by every stage of the pipeline: a periodic
/// PEC surface below a material slab occupying slab_bottom < y < slab_top,
/// illuminated from above at normal incidence.
struct SceneParameters {
  double period = 1.0;        // surface period
  double wavelength = 1.1;    // free-space wavelength of the incident wave
  double slab_bottom = 0.1;   // lower slab face (a)
  double slab_top = 0.2;      // upper slab face = measurement line (b)
  cplx eps{-1.0, 0.0};        // relative permittivity of the slab
  cplx mu{-1.0, 0.0};         // relative permeability of the slab

  double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

  /// Throws std::invalid_argument when the geometry or material is unusable
  /// (non-positive lengths, slab faces out of order, mu == 0).
  void validate() const;
};

}  // namespace superlens

#endif  // SUPERLENS_SCENE_HPP
