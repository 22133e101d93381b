#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tcmap/exact_linalg.hpp"

namespace {

using tcmap::BigInt;
using tcmap::Field;
using tcmap::FieldMatrix;
using tcmap::IntMatrix;
using tcmap::Rational;
using tcmap::Subspace;

std::vector<std::vector<long long>> random_int_rows(std::mt19937_64& rng, std::size_t max_dim, int bound) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_int_distribution<int> entry(-bound, bound);
  const std::size_t r = dim(rng), c = dim(rng);
  std::vector<std::vector<long long>> rows(r, std::vector<long long>(c));
  for (auto& row : rows)
    for (auto& x : row) x = entry(rng);
  return rows;
}

oracle::QMatrix to_q(const IntMatrix& m) {
  oracle::QMatrix out(m.rows(), std::vector<oracle::Q>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = oracle::Q(m(i, j));
  return out;
}

FieldMatrix random_field_matrix(std::mt19937_64& rng, const Field& f, std::size_t rows, std::size_t cols,
                                int zero_bias = 0) {
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> coin(0, 9);
  FieldMatrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (coin(rng) >= zero_bias) m.set(i, j, entry(rng));
  return m;
}

TEST(SmithNormalForm, WorkedExample) {
  const IntMatrix a = IntMatrix::from_rows({{2, 0, 0}, {0, 3, 0}});
  const auto snf = tcmap::smith_normal_form(a);
  EXPECT_EQ(snf.diagonal(0, 0), 1);
  EXPECT_EQ(snf.diagonal(1, 1), 6);
  EXPECT_EQ(snf.left * a * snf.right, snf.diagonal);
  EXPECT_EQ(tcmap::int_rank(a), 2u);
}

TEST(SmithNormalForm, ZeroAndEmpty) {
  EXPECT_EQ(tcmap::int_rank(IntMatrix(3, 2)), 0u);
  EXPECT_EQ(tcmap::int_rank(IntMatrix(0, 0)), 0u);
  EXPECT_EQ(tcmap::int_rank(IntMatrix::identity(4)), 4u);
}

TEST(SmithNormalForm, HandlesLargeEntries) {
  IntMatrix a(2, 2);
  a(0, 0) = BigInt("123456789012345678901234567890");
  a(0, 1) = BigInt("987654321098765432109876543210");
  a(1, 0) = BigInt("111111111111111111111111111111");
  a(1, 1) = BigInt("222222222222222222222222222222");
  const auto snf = tcmap::smith_normal_form(a);
  EXPECT_EQ(snf.left * a * snf.right, snf.diagonal);
  EXPECT_EQ(snf.diagonal(1, 1) % snf.diagonal(0, 0), 0);
}

// U A V = D, U and V unimodular, D diagonal with d_i | d_{i+1}, rank agrees with Q.
TEST(SmithNormalForm, RandomMatricesAgainstRationalOracle) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = random_int_rows(rng, 8, 9);
    const IntMatrix a = IntMatrix::from_rows(rows);
    const auto snf = tcmap::smith_normal_form(a);
    ASSERT_EQ(snf.left * a * snf.right, snf.diagonal) << "trial " << trial;
    EXPECT_EQ(abs(oracle::determinant(to_q(snf.left))), 1);
    EXPECT_EQ(abs(oracle::determinant(to_q(snf.right))), 1);
    std::size_t nonzero = 0;
    const std::size_t k = std::min(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (i != j) {
          EXPECT_EQ(snf.diagonal(i, j), 0);
        }
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_GE(snf.diagonal(i, i), 0);
      if (snf.diagonal(i, i) != 0) ++nonzero;
      if (i + 1 < k) {
        if (snf.diagonal(i, i) != 0) {
          EXPECT_EQ(snf.diagonal(i + 1, i + 1) % snf.diagonal(i, i), 0);
        } else {
          EXPECT_EQ(snf.diagonal(i + 1, i + 1), 0);
        }
      }
    }
    EXPECT_EQ(nonzero, oracle::rank_over_q(rows));
    EXPECT_EQ(tcmap::int_rank(a), nonzero);
  }
}

TEST(Field, PrimeArithmetic) {
  const Field f = Field::prime(7);
  EXPECT_EQ(f.element(-1), 6);
  EXPECT_EQ(f.element(Rational(1, 2)), 4);
  EXPECT_EQ(f.mul(3, 5), 1);
  EXPECT_EQ(f.inv(3), 5);
  EXPECT_THROW(Field::prime(8), tcmap::InvalidInput);
  EXPECT_THROW(f.inv(0), tcmap::InvalidInput);
}

TEST(Rref, IsIdempotent) {
  std::mt19937_64 rng(7);
  for (const Field& f : {Field::rationals(), Field::prime(2), Field::prime(5)}) {
    for (int trial = 0; trial < 40; ++trial) {
      const FieldMatrix m = random_field_matrix(rng, f, 1 + rng() % 6, 1 + rng() % 6, 3);
      const auto once = tcmap::rref(m);
      const auto twice = tcmap::rref(once.reduced);
      EXPECT_EQ(once.reduced, twice.reduced);
      EXPECT_EQ(once.pivots, twice.pivots);
    }
  }
}

// dim ker A + dim im A = cols; A kills its kernel; image vectors are A-images.
TEST(KernelImage, RankNullity) {
  std::mt19937_64 rng(11);
  for (const Field& f : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      const FieldMatrix a = random_field_matrix(rng, f, r, c, 4);
      const Subspace ker = tcmap::kernel_basis(a);
      const Subspace im = tcmap::image_basis(a);
      EXPECT_EQ(ker.dim() + im.dim(), c);
      EXPECT_EQ(ker.ambient(), c);
      EXPECT_EQ(im.ambient(), r);
      for (std::size_t i = 0; i < ker.dim(); ++i) {
        const auto v = a.apply(ker.vector(i));
        for (const auto& x : v) EXPECT_EQ(x, 0);
      }
      for (std::size_t j = 0; j < c; ++j) {
        std::vector<Rational> e(c, Rational(0));
        e[j] = 1;
        EXPECT_TRUE(im.contains(a.apply(e)));
      }
    }
  }
}

TEST(KernelImage, F2KernelMatchesEnumeration) {
  std::mt19937_64 rng(99);
  const Field f2 = Field::prime(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 8;
    std::vector<std::vector<int>> rows(r, std::vector<int>(c));
    FieldMatrix a(f2, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        rows[i][j] = static_cast<int>(rng() % 2);
        a.set(i, j, rows[i][j]);
      }
    const auto expected = oracle::f2_kernel_vectors(rows, c);
    const Subspace ker = tcmap::kernel_basis(a);
    ASSERT_EQ(std::size_t{1} << ker.dim(), expected.size());
    for (std::uint32_t x : expected) {
      std::vector<Rational> v(c);
      for (std::size_t j = 0; j < c; ++j) v[j] = (x >> j) & 1u;
      EXPECT_TRUE(ker.contains(v));
    }
  }
}

TEST(Intersection, WorkedExample) {
  const Field q = Field::rationals();
  const Subspace u = Subspace::span(q, 3, {{1, 0, 0}, {0, 1, 0}});
  const Subspace w = Subspace::span(q, 3, {{0, 1, 0}, {0, 0, 1}});
  const Subspace x = tcmap::intersect(u, w);
  EXPECT_EQ(x.dim(), 1u);
  EXPECT_TRUE(x.contains(std::vector<Rational>{0, 1, 0}));
}

// Commutative, contained in both, and dim(U ∩ W) + dim(U + W) = dim U + dim W.
TEST(Intersection, RandomSubspaces) {
  std::mt19937_64 rng(5);
  for (const Field& f : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 1 + rng() % 6;
      const Subspace u = tcmap::image_basis(random_field_matrix(rng, f, n, rng() % 5, 5));
      const Subspace w = tcmap::image_basis(random_field_matrix(rng, f, n, rng() % 5, 5));
      const Subspace uw = tcmap::intersect(u, w);
      const Subspace wu = tcmap::intersect(w, u);
      EXPECT_EQ(uw, wu);
      EXPECT_TRUE(u.contains(uw));
      EXPECT_TRUE(w.contains(uw));
      EXPECT_EQ(uw.dim() + tcmap::subspace_sum(u, w).dim(), u.dim() + w.dim());
    }
  }
}

TEST(Subspace, MismatchedAmbientThrows) {
  const Field q = Field::rationals();
  const Subspace u = Subspace::span(q, 2, {{1, 0}});
  const Subspace w = Subspace::span(q, 3, {{1, 0, 0}});
  EXPECT_THROW(tcmap::intersect(u, w), tcmap::DimensionMismatch);
  EXPECT_THROW(tcmap::intersect(u, Subspace::span(Field::prime(2), 2, {{1, 0}})), tcmap::DimensionMismatch);
}

}  // namespace
