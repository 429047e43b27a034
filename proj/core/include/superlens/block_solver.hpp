#ifndef SUPERLENS_BLOCK_SOLVER_HPP
#define SUPERLENS_BLOCK_SOLVER_HPP

#include <Eigen/Dense>
#include <vector>

#include "superlens/scene.hpp"

namespace superlens {

/// One n-by-n block of a banded block matrix, stored in the cheapest form
/// that describes it. Off-diagonal blocks of the discretized problem are
/// scaled identities, diagonals, or periodic tridiagonals; only the
/// transparent-boundary row needs a dense block.
struct CompactBlock {
  enum class Kind { zero, scaled_identity, diagonal, periodic_tridiagonal, dense };

  Kind kind = Kind::zero;
  cplx scale{0.0, 0.0};
  Eigen::VectorXcd diag;         // diagonal entries (diagonal / ptri)
  Eigen::VectorXcd lower, upper; // ptri neighbours, periodic in the index
  Eigen::MatrixXcd mat;          // dense

  static CompactBlock zero() { return {}; }
  static CompactBlock scaled_identity(cplx s);
  static CompactBlock diagonal(Eigen::VectorXcd d);
  static CompactBlock periodic_tridiagonal(Eigen::VectorXcd lo,
                                           Eigen::VectorXcd di,
                                           Eigen::VectorXcd up);
  static CompactBlock dense(Eigen::MatrixXcd m);

  bool is_zero() const { return kind == Kind::zero; }
  Eigen::MatrixXcd to_dense(int n) const;

  /// Y -= (*this) * X
  void subtract_product(Eigen::MatrixXcd& Y, const Eigen::MatrixXcd& X) const;
  /// y -= (*this) * x
  void subtract_product(Eigen::VectorXcd& y, const Eigen::VectorXcd& x) const;
  /// y += (*this) * x
  void add_apply(Eigen::VectorXcd& y, const Eigen::VectorXcd& x) const;
};

/// Block row of a banded block matrix with block bandwidth two. Offsets are
/// relative to the diagonal.
struct BlockRow {
  CompactBlock sub2, sub1, diag, sup1, sup2;
};

struct BlockSolveReport {
  double growth_factor = 0.0;   // max over levels of |U|_max / |D_orig|_max
  double min_rel_pivot = 1.0;   // min over levels of min|U_ii| / max|U_ii|
  int worst_level = -1;         // level attaining min_rel_pivot
};

/// Direct solve of the banded block system by forward block elimination with
/// a partially pivoted dense factorization of each diagonal block, then back
/// substitution. Throws ConditioningError when a pivot block is numerically
/// singular (relative pivot below pivot_rel_tol).
Eigen::VectorXcd solve_block_banded(const std::vector<BlockRow>& rows, int n,
                                    const Eigen::VectorXcd& rhs,
                                    BlockSolveReport& report,
                                    double pivot_rel_tol = 1e-13);

/// y = A * x for the banded block matrix (residual checks, consistency
/// tests).
Eigen::VectorXcd apply_block_banded(const std::vector<BlockRow>& rows, int n,
                                    const Eigen::VectorXcd& x);

/// Frobenius norm of the banded block matrix, used to normalize residuals.
double frobenius_norm(const std::vector<BlockRow>& rows, int n);

}  // namespace superlens

#endif  // SUPERLENS_BLOCK_SOLVER_HPP
