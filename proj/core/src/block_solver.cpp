#include "superlens/block_solver.hpp"

#include <limits>
#include <optional>
#include <string>

#include "superlens/errors.hpp"

namespace superlens {

CompactBlock CompactBlock::scaled_identity(cplx s) {
  CompactBlock b;
  b.kind = Kind::scaled_identity;
  b.scale = s;
  return b;
}

CompactBlock CompactBlock::diagonal(Eigen::VectorXcd d) {
  CompactBlock b;
  b.kind = Kind::diagonal;
  b.diag = std::move(d);
  return b;
}

CompactBlock CompactBlock::periodic_tridiagonal(Eigen::VectorXcd lo,
                                                Eigen::VectorXcd di,
                                                Eigen::VectorXcd up) {
  CompactBlock b;
  b.kind = Kind::periodic_tridiagonal;
  b.lower = std::move(lo);
  b.diag = std::move(di);
  b.upper = std::move(up);
  return b;
}

CompactBlock CompactBlock::dense(Eigen::MatrixXcd m) {
  CompactBlock b;
  b.kind = Kind::dense;
  b.mat = std::move(m);
  return b;
}

Eigen::MatrixXcd CompactBlock::to_dense(int n) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  switch (kind) {
    case Kind::zero:
      break;
    case Kind::scaled_identity:
      m.diagonal().setConstant(scale);
      break;
    case Kind::diagonal:
      m.diagonal() = diag;
      break;
    case Kind::periodic_tridiagonal:
      for (int i = 0; i < n; ++i) {
        m(i, (i + n - 1) % n) += lower(i);
        m(i, i) += diag(i);
        m(i, (i + 1) % n) += upper(i);
      }
      break;
    case Kind::dense:
      m = mat;
      break;
  }
  return m;
}

namespace {

template <typename Dest, typename Src>
void subtract_product_impl(const CompactBlock& b, Dest& Y, const Src& X) {
  const int n = static_cast<int>(X.rows());
  switch (b.kind) {
    case CompactBlock::Kind::zero:
      break;
    case CompactBlock::Kind::scaled_identity:
      Y.noalias() -= b.scale * X;
      break;
    case CompactBlock::Kind::diagonal:
      Y.noalias() -= b.diag.asDiagonal() * X;
      break;
    case CompactBlock::Kind::periodic_tridiagonal:
      for (int c = 0; c < X.cols(); ++c) {
        for (int i = 0; i < n; ++i) {
          Y(i, c) -= b.lower(i) * X((i + n - 1) % n, c) + b.diag(i) * X(i, c) +
                     b.upper(i) * X((i + 1) % n, c);
        }
      }
      break;
    case CompactBlock::Kind::dense:
      Y.noalias() -= b.mat * X;
      break;
  }
}

}  // namespace

void CompactBlock::subtract_product(Eigen::MatrixXcd& Y,
                                    const Eigen::MatrixXcd& X) const {
  subtract_product_impl(*this, Y, X);
}

void CompactBlock::subtract_product(Eigen::VectorXcd& y,
                                    const Eigen::VectorXcd& x) const {
  subtract_product_impl(*this, y, x);
}

void CompactBlock::add_apply(Eigen::VectorXcd& y, const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd tmp = Eigen::VectorXcd::Zero(x.size());
  subtract_product_impl(*this, tmp, x);
  y -= tmp;  // tmp holds -(B*x)
}

Eigen::VectorXcd solve_block_banded(const std::vector<BlockRow>& rows, int n,
                                    const Eigen::VectorXcd& rhs,
                                    BlockSolveReport& report,
                                    double pivot_rel_tol) {
  const int levels = static_cast<int>(rows.size());
  report = BlockSolveReport{};

  // Dense overrides created by fill-in; empty optional means "use the
  // compact original".
  std::vector<std::optional<Eigen::MatrixXcd>> ov_diag(rows.size());
  std::vector<std::optional<Eigen::MatrixXcd>> ov_sub1(rows.size());
  std::vector<std::optional<Eigen::MatrixXcd>> ov_sup1(rows.size());

  std::vector<Eigen::MatrixXcd> G1(rows.size());  // D_j^{-1} * sup1 after elimination
  std::vector<Eigen::MatrixXcd> G2(rows.size());  // D_j^{-1} * sup2   (rarely nonzero)
  std::vector<Eigen::VectorXcd> y(rows.size());

  std::vector<Eigen::VectorXcd> b(rows.size());
  for (int j = 0; j < levels; ++j) b[static_cast<std::size_t>(j)] = rhs.segment(j * n, n);

  auto ensure_dense = [&](std::optional<Eigen::MatrixXcd>& slot,
                          const CompactBlock& orig) -> Eigen::MatrixXcd& {
    if (!slot) slot = orig.to_dense(n);
    return *slot;
  };

  for (int j = 0; j < levels; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    Eigen::MatrixXcd D = ov_diag[ju] ? std::move(*ov_diag[ju])
                                     : rows[ju].diag.to_dense(n);
    const double orig_max = rows[ju].diag.to_dense(n).cwiseAbs().maxCoeff();

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(D);
    const auto& packed = lu.matrixLU();
    double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double pv = std::abs(packed(i, i));
      pmax = std::max(pmax, pv);
      pmin = std::min(pmin, pv);
    }
    const double rel_pivot = (pmax > 0.0) ? pmin / pmax : 0.0;
    if (rel_pivot < report.min_rel_pivot) {
      report.min_rel_pivot = rel_pivot;
      report.worst_level = j;
    }
    if (orig_max > 0.0) {
      report.growth_factor = std::max(
          report.growth_factor,
          packed.triangularView<Eigen::Upper>().toDenseMatrix().cwiseAbs().maxCoeff() /
              orig_max);
    }
    if (rel_pivot < pivot_rel_tol) {
      throw ConditioningError(
          j, report.growth_factor,
          "near-singular pivot block at y-level " + std::to_string(j) +
              " (relative pivot " + std::to_string(rel_pivot) +
              "); consider a small loss parameter sigma > 0");
    }

    const bool has_sup1 = ov_sup1[ju].has_value() || !rows[ju].sup1.is_zero();
    if (has_sup1 && j + 1 < levels) {
      G1[ju] = lu.solve(ov_sup1[ju] ? *ov_sup1[ju] : rows[ju].sup1.to_dense(n));
    }
    if (!rows[ju].sup2.is_zero() && j + 2 < levels) {
      G2[ju] = lu.solve(rows[ju].sup2.to_dense(n));
    }
    y[ju] = lu.solve(b[ju]);

    // eliminate the sub-blocks of the next two rows in column j
    for (int r = j + 1; r <= j + 2 && r < levels; ++r) {
      const auto ru = static_cast<std::size_t>(r);
      const bool first_sub = (r == j + 1);
      const CompactBlock& orig = first_sub ? rows[ru].sub1 : rows[ru].sub2;
      // sub2 blocks are never touched by fill-in, only sub1 blocks are
      const Eigen::MatrixXcd* ov =
          (first_sub && ov_sub1[ru]) ? &*ov_sub1[ru] : nullptr;
      if (!ov && orig.is_zero()) continue;

      auto apply_B = [&](Eigen::MatrixXcd& target, const Eigen::MatrixXcd& X) {
        if (ov) {
          target.noalias() -= (*ov) * X;
        } else {
          orig.subtract_product(target, X);
        }
      };
      auto apply_B_vec = [&](Eigen::VectorXcd& target, const Eigen::VectorXcd& x) {
        if (ov) {
          target.noalias() -= (*ov) * x;
        } else {
          orig.subtract_product(target, x);
        }
      };

      if (G1[ju].size() > 0) {
        // column j+1 of row r: the diagonal when r == j+1, sub1 otherwise
        Eigen::MatrixXcd& tgt = first_sub
                                    ? ensure_dense(ov_diag[ru], rows[ru].diag)
                                    : ensure_dense(ov_sub1[ru], rows[ru].sub1);
        apply_B(tgt, G1[ju]);
      }
      if (G2[ju].size() > 0) {
        // column j+2 of row r: sup1 when r == j+1, the diagonal otherwise
        Eigen::MatrixXcd& tgt = first_sub
                                    ? ensure_dense(ov_sup1[ru], rows[ru].sup1)
                                    : ensure_dense(ov_diag[ru], rows[ru].diag);
        apply_B(tgt, G2[ju]);
      }
      apply_B_vec(b[ru], y[ju]);
    }
    ov_diag[ju].reset();
    ov_sub1[ju].reset();
    ov_sup1[ju].reset();
  }

  // back substitution on normalized rows [I G1 G2 | y]
  Eigen::VectorXcd x(static_cast<Eigen::Index>(levels) * n);
  for (int j = levels - 1; j >= 0; --j) {
    const auto ju = static_cast<std::size_t>(j);
    Eigen::VectorXcd xj = y[ju];
    if (G1[ju].size() > 0) xj.noalias() -= G1[ju] * x.segment((j + 1) * n, n);
    if (G2[ju].size() > 0) xj.noalias() -= G2[ju] * x.segment((j + 2) * n, n);
    x.segment(j * n, n) = xj;
  }
  return x;
}

double frobenius_norm(const std::vector<BlockRow>& rows, int n) {
  double sq = 0.0;
  auto add = [&](const CompactBlock& b) {
    switch (b.kind) {
      case CompactBlock::Kind::zero:
        break;
      case CompactBlock::Kind::scaled_identity:
        sq += std::norm(b.scale) * n;
        break;
      case CompactBlock::Kind::diagonal:
        sq += b.diag.squaredNorm();
        break;
      case CompactBlock::Kind::periodic_tridiagonal:
        sq += b.lower.squaredNorm() + b.diag.squaredNorm() + b.upper.squaredNorm();
        break;
      case CompactBlock::Kind::dense:
        sq += b.mat.squaredNorm();
        break;
    }
  };
  for (const auto& row : rows) {
    add(row.sub2);
    add(row.sub1);
    add(row.diag);
    add(row.sup1);
    add(row.sup2);
  }
  return std::sqrt(sq);
}

Eigen::VectorXcd apply_block_banded(const std::vector<BlockRow>& rows, int n,
                                    const Eigen::VectorXcd& x) {
  const int levels = static_cast<int>(rows.size());
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
  for (int j = 0; j < levels; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n);
    auto add = [&](const CompactBlock& blk, int col) {
      if (blk.is_zero() || col < 0 || col >= levels) return;
      const Eigen::VectorXcd xc = x.segment(col * n, n);
      blk.add_apply(acc, xc);
    };
    add(rows[ju].sub2, j - 2);
    add(rows[ju].sub1, j - 1);
    add(rows[ju].diag, j);
    add(rows[ju].sup1, j + 1);
    add(rows[ju].sup2, j + 2);
    y.segment(j * n, n) = acc;
  }
  return y;
}

}  // namespace superlens
