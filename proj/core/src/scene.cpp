#include "superlens/scene.hpp"

#include <stdexcept>

namespace superlens {

void SceneParameters::validate() const {
  if (!(period > 0.0)) throw std::invalid_argument("scene: period must be > 0");
  if (!(wavelength > 0.0)) throw std::invalid_argument("scene: wavelength must be > 0");
  if (!(slab_bottom > 0.0) || !(slab_top > slab_bottom)) {
    throw std::invalid_argument("scene: need 0 < slab_bottom < slab_top");
  }
  if (mu == cplx(0.0, 0.0)) throw std::invalid_argument("scene: mu must be nonzero");
}

}  // namespace superlens
