#ifndef SUPERLENS_FORWARD_HPP
#define SUPERLENS_FORWARD_HPP

#include <iosfwd>
#include <vector>

#include "superlens/block_solver.hpp"
#include "superlens/grid.hpp"
#include "superlens/profile.hpp"
#include "superlens/scene.hpp"

namespace superlens {

// Full-wave forward solver on the flattened domain: the corrugated region is
// mapped onto the rectangle 0 < y < a by the flattening change of variables,
// the slab keeps the constant-coefficient Helmholtz equation, and the top is
// closed by the exact transparent boundary condition applied spectrally.
// Everything is discretized with second-order centered differences (one-sided
// second-order at the interface and boundary rows) and solved by banded block
// elimination. This path shares no formulas with the reconstruction module,
// so synthetic data generated here commits no inverse crime.

/// Variable coefficients of the flattened equation on the lower-region grid
/// nodes, row-major [j*nx + i] with j = 0 at the surface.
struct TransformedCoefficients {
  int nx = 0;
  int ny = 0;
  std::vector<double> c1, c2, c3, c4;

  double& at(std::vector<double>& v, int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
};

TransformedCoefficients transformed_coefficients(const Profile& profile,
                                                 const SceneParameters& p,
                                                 const Grid& grid);

struct SolveOptions {
  /// Optional loss added to eps (eps + i*sigma) to regularize near-singular
  /// sign-changing configurations. Default off.
  double loss_sigma = 0.0;
};

struct SolveReport {
  double growth_factor = 0.0;
  double min_rel_pivot = 1.0;
  double residual = 0.0;  // relative linear residual of the returned field
};

/// Complex total field on the flattened tensor grid, bottom level first.
class DiscreteField {
 public:
  std::vector<cplx> values;  // [j*nx + i]
  Grid grid;
  SceneParameters scene;
  double delta = 0.0;
  std::string profile_kind;
  SolveReport report;

  cplx at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * grid.nx + i];
  }
  /// Top-row extraction; entry i corresponds to x_i = i*period/nx.
  std::vector<cplx> trace_on_gamma_b() const;
};

/// Assembled banded block system, kept in compact form so tests can apply
/// the operator to arbitrary grid functions.
class AssembledSystem {
 public:
  static AssembledSystem assemble(const Profile& profile, const SceneParameters& p,
                                  const Grid& grid, const SolveOptions& opts = {});

  std::size_t rows() const { return block_rows_.size() * static_cast<std::size_t>(grid_.nx); }
  const Grid& grid() const { return grid_; }

  /// A * u on the full grid vector (levels-major).
  std::vector<cplx> apply(std::span<const cplx> u) const;
  const std::vector<cplx>& rhs() const { return rhs_; }

  DiscreteField solve() const;

 private:
  std::vector<BlockRow> block_rows_;
  std::vector<cplx> rhs_;
  Grid grid_;
  SceneParameters scene_;
  double delta_ = 0.0;
  std::string profile_kind_;
};

/// Assemble + solve; relative linear residual is checked against 1e-10 and
/// reported in the field metadata.
DiscreteField solve_total_field(const Profile& profile, const SceneParameters& p,
                                const Grid& grid, const SolveOptions& opts = {});

/// Trace CSV (columns x, re_u, im_u) with scene and grid recorded in header
/// comments, and the matching reader.
void write_trace_csv(const DiscreteField& field, std::ostream& os);

struct TraceData {
  std::vector<cplx> values;
  SceneParameters scene;
  Grid grid;
};
TraceData read_trace_csv(std::istream& is);

/// Whole-field dump: header (nx, ny_levels, period, a, b) followed by
/// row-major little-endian complex doubles from the surface upward.
void write_field_binary(const DiscreteField& field, std::ostream& os);

}  // namespace superlens

#endif  // SUPERLENS_FORWARD_HPP
