#ifndef SUPERLENS_GRID_HPP
#define SUPERLENS_GRID_HPP

namespace superlens {

/// Tensor grid of the flattened domain. nx columns over one period
/// (periodic, no duplicated endpoint); ny_omega points on [0, a] and
/// ny_slab points on [a, b], both including their endpoints and sharing the
/// interface level, so there are ny_omega + ny_slab - 1 y-levels in total.
struct Grid {
  int nx = 256;
  int ny_omega = 128;
  int ny_slab = 128;

  int levels() const { return ny_omega + ny_slab - 1; }
  int interface_level() const { return ny_omega - 1; }

  /// Throws std::invalid_argument if too coarse for the one-sided
  /// second-order stencils (needs nx even >= 8, ny_omega/ny_slab >= 4).
  void validate() const;
};

}  // namespace superlens

#endif  // SUPERLENS_GRID_HPP
