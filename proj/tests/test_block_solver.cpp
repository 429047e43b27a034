#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "superlens/block_solver.hpp"
#include "superlens/errors.hpp"

using namespace superlens;

namespace {

Eigen::VectorXcd random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(uni(rng), uni(rng));
  return v;
}

CompactBlock random_block(int n, int kind_pick, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  switch (kind_pick % 4) {
    case 0:
      return CompactBlock::scaled_identity(cplx(uni(rng), uni(rng)));
    case 1:
      return CompactBlock::diagonal(random_vector(n, rng));
    case 2:
      return CompactBlock::periodic_tridiagonal(random_vector(n, rng),
                                                random_vector(n, rng),
                                                random_vector(n, rng));
    default: {
      Eigen::MatrixXcd m(n, n);
      for (int i = 0; i < n; ++i) m.col(i) = random_vector(n, rng);
      return CompactBlock::dense(std::move(m));
    }
  }
}

/// dense assembly of the banded block matrix for oracle solves
Eigen::MatrixXcd to_full(const std::vector<BlockRow>& rows, int n) {
  const int levels = static_cast<int>(rows.size());
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(levels * n, levels * n);
  for (int j = 0; j < levels; ++j) {
    auto put = [&](const CompactBlock& b, int col) {
      if (b.is_zero() || col < 0 || col >= levels) return;
      full.block(j * n, col * n, n, n) = b.to_dense(n);
    };
    const auto& row = rows[static_cast<std::size_t>(j)];
    put(row.sub2, j - 2);
    put(row.sub1, j - 1);
    put(row.diag, j);
    put(row.sup1, j + 1);
    put(row.sup2, j + 2);
  }
  return full;
}

std::vector<BlockRow> random_system(int levels, int n, std::mt19937_64& rng,
                                    bool with_band2) {
  std::vector<BlockRow> rows(static_cast<std::size_t>(levels));
  int pick = 0;
  for (int j = 0; j < levels; ++j) {
    auto& row = rows[static_cast<std::size_t>(j)];
    // diagonally dominant-ish pivot blocks keep the oracle comparison clean
    Eigen::MatrixXcd d(n, n);
    for (int i = 0; i < n; ++i) d.col(i) = random_vector(n, rng);
    d.diagonal().array() += cplx(6.0, 2.0);
    row.diag = CompactBlock::dense(std::move(d));
    if (j > 0) row.sub1 = random_block(n, pick++, rng);
    if (j + 1 < levels) row.sup1 = random_block(n, pick++, rng);
  }
  if (with_band2 && levels > 4) {
    rows[2].sub2 = CompactBlock::diagonal(random_vector(n, rng));
    rows[2].sup2 = CompactBlock::diagonal(random_vector(n, rng));
    rows[static_cast<std::size_t>(levels - 1)].sub2 =
        CompactBlock::scaled_identity(cplx(0.4, -0.2));
  }
  return rows;
}

}  // namespace

TEST_CASE("compact blocks materialize and multiply consistently") {
  std::mt19937_64 rng(3);
  const int n = 7;
  for (int kind = 0; kind < 4; ++kind) {
    const auto block = random_block(n, kind, rng);
    const auto dense = block.to_dense(n);
    const auto x = random_vector(n, rng);
    Eigen::VectorXcd got = random_vector(n, rng);
    Eigen::VectorXcd want = got - dense * x;
    block.subtract_product(got, x);
    CHECK((got - want).norm() < 1e-13);

    Eigen::MatrixXcd X(n, 3);
    for (int c = 0; c < 3; ++c) X.col(c) = random_vector(n, rng);
    Eigen::MatrixXcd gotM = Eigen::MatrixXcd::Zero(n, 3);
    block.subtract_product(gotM, X);
    CHECK((gotM + dense * X).norm() < 1e-13);
  }
}

TEST_CASE("banded block solve matches a dense oracle") {
  std::mt19937_64 rng(41);
  for (bool with_band2 : {false, true}) {
    for (int trial = 0; trial < 6; ++trial) {
      const int n = 5 + trial % 3;
      const int levels = 8;
      const auto rows = random_system(levels, n, rng, with_band2);
      const auto rhs = random_vector(levels * n, rng);

      BlockSolveReport report;
      const auto x = solve_block_banded(rows, n, rhs, report);

      const Eigen::MatrixXcd full = to_full(rows, n);
      const Eigen::VectorXcd want = full.partialPivLu().solve(rhs);
      CAPTURE(with_band2);
      CAPTURE(trial);
      REQUIRE((x - want).norm() <= 1e-11 * want.norm());
      CHECK(report.min_rel_pivot > 0.0);
    }
  }
}

TEST_CASE("apply and frobenius norm match the dense assembly") {
  std::mt19937_64 rng(55);
  const int n = 6, levels = 7;
  const auto rows = random_system(levels, n, rng, true);
  const auto x = random_vector(levels * n, rng);
  const Eigen::MatrixXcd full = to_full(rows, n);

  CHECK((apply_block_banded(rows, n, x) - full * x).norm() < 1e-12 * x.norm());
  CHECK(frobenius_norm(rows, n) == doctest::Approx(full.norm()).epsilon(1e-12));
}

TEST_CASE("singular pivot block raises a conditioning error with its level") {
  std::mt19937_64 rng(77);
  const int n = 4, levels = 5;
  auto rows = random_system(levels, n, rng, false);
  Eigen::MatrixXcd singular = Eigen::MatrixXcd::Zero(n, n);
  singular(0, 0) = 1.0;  // rank deficient
  rows[3].diag = CompactBlock::dense(singular);
  rows[3].sub1 = CompactBlock::zero();
  rows[2].sup1 = CompactBlock::zero();

  const auto rhs = random_vector(levels * n, rng);
  BlockSolveReport report;
  try {
    (void)solve_block_banded(rows, n, rhs, report);
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    CHECK(e.level() == 3);
  }
}
