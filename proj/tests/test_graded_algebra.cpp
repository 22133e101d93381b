#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tcmap/graded_algebra.hpp"

namespace {

using tcmap::AlgebraMap;
using tcmap::AxiomKind;
using tcmap::Field;
using tcmap::FieldMatrix;
using tcmap::GradedAlgebra;
using tcmap::Rational;
using tcmap::SparseVector;
using tcmap::Subspace;

const Field kQ = Field::rationals();

GradedAlgebra lambda_x() { return tcmap::exterior_algebra(kQ, {{"x", 1}}); }
GradedAlgebra lambda_xy(Field f = kQ) { return tcmap::exterior_algebra(f, {{"x", 1}, {"y", 1}}); }

// Λ(x,y) -> Λ(x,y), basis order 1, x, y, xy; column j is the image of basis j.
AlgebraMap diagonal_map(const GradedAlgebra& a, std::vector<int> diag) {
  FieldMatrix m(a.field(), a.dim(), a.dim());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return AlgebraMap(a, a, m);
}

std::vector<Rational> coords(const GradedAlgebra& a, const std::vector<std::pair<std::string, int>>& terms) {
  std::vector<Rational> v(a.dim(), Rational(0));
  for (const auto& [name, c] : terms) v[a.index_of(name)] += c;
  return v;
}

TEST(Validate, Examples) {
  EXPECT_TRUE(tcmap::validate_algebra(lambda_x()).ok());
  EXPECT_TRUE(tcmap::validate_algebra(tcmap::truncated_polynomial_algebra(kQ, "u", 2, 2)).ok());
  EXPECT_TRUE(tcmap::validate_algebra(lambda_xy()).ok());

  // Make x·y = y·x with |x| = |y| = 1.
  GradedAlgebra::ProductTable table = lambda_xy().products();
  table[{2, 1}] = SparseVector{{3, Rational(1)}};
  const GradedAlgebra bad(kQ, lambda_xy().basis(), 0, table);
  const auto report = tcmap::validate_algebra(bad);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(report.has(AxiomKind::Commutativity));
}

TEST(Validate, CatchesEachAxiom) {
  const GradedAlgebra good = lambda_xy();
  {
    GradedAlgebra::ProductTable t = good.products();
    t.erase({0, 1});  // 1·x = 0
    EXPECT_TRUE(tcmap::validate_algebra(GradedAlgebra(kQ, good.basis(), 0, t)).has(AxiomKind::Unit));
  }
  {
    GradedAlgebra::ProductTable t = good.products();
    t[{1, 1}] = SparseVector{{1, Rational(1)}};  // x·x = x, wrong degree
    EXPECT_TRUE(tcmap::validate_algebra(GradedAlgebra(kQ, good.basis(), 0, t)).has(AxiomKind::Degree));
  }
  {
    auto basis = good.basis();
    basis[0].degree = 1;
    EXPECT_TRUE(tcmap::validate_algebra(GradedAlgebra(kQ, basis, 0, good.products())).has(AxiomKind::UnitDegree));
  }
  {
    // Q[u]/(u^4) with u·u² = 0 but u²·u = u³: (u·u)·u != u·(u·u).
    const GradedAlgebra p = tcmap::truncated_polynomial_algebra(kQ, "u", 2, 4);
    GradedAlgebra::ProductTable t = p.products();
    t.erase({1, 2});
    EXPECT_TRUE(tcmap::validate_algebra(GradedAlgebra(kQ, p.basis(), 0, t)).has(AxiomKind::Associativity));
  }
}

TEST(TensorSquare, KoszulSigns) {
  const GradedAlgebra sq = tcmap::tensor_square(lambda_x());
  EXPECT_EQ(sq.dim(), 4u);
  const auto ab = sq.product(sq.index_of("1⊗x"), sq.index_of("x⊗1"));
  const auto ba = sq.product(sq.index_of("x⊗1"), sq.index_of("1⊗x"));
  EXPECT_EQ(ab, (SparseVector{{sq.index_of("x⊗x"), Rational(-1)}}));
  EXPECT_EQ(ba, (SparseVector{{sq.index_of("x⊗x"), Rational(1)}}));
  EXPECT_EQ(sq.unit(), sq.index_of("1⊗1"));

  const GradedAlgebra s2 = tcmap::tensor_square(tcmap::sphere_cohomology(kQ, 2));
  EXPECT_EQ(s2.product(s2.index_of("1⊗u"), s2.index_of("u⊗1")), (SparseVector{{s2.index_of("u⊗u"), Rational(1)}}));
  EXPECT_TRUE(tcmap::validate_algebra(s2).ok());
}

TEST(TensorSquare, InvalidInputThrows) {
  GradedAlgebra::ProductTable t = lambda_xy().products();
  t[{2, 1}] = SparseVector{{3, Rational(1)}};
  EXPECT_THROW(tcmap::tensor_square(GradedAlgebra(kQ, lambda_xy().basis(), 0, t)), tcmap::InvalidInput);
}

TEST(MultMap, Examples) {
  const GradedAlgebra a = lambda_x();
  const AlgebraMap mult = tcmap::mult_map(a);
  const GradedAlgebra& sq = mult.source();
  EXPECT_EQ(mult.image(sq.index_of("1⊗1")), (SparseVector{{a.index_of("1"), Rational(1)}}));
  EXPECT_TRUE(mult.image(sq.index_of("x⊗x")).empty());
  SparseVector zd{{sq.index_of("1⊗x"), Rational(1)}, {sq.index_of("x⊗1"), Rational(-1)}};
  EXPECT_TRUE(mult.apply(zd).empty());
  EXPECT_TRUE(tcmap::validate_map(mult).ok());
}

TEST(TensorSquareMap, Examples) {
  const GradedAlgebra a = lambda_xy();
  const AlgebraMap id = tcmap::tensor_square_map(AlgebraMap::identity(a));
  EXPECT_EQ(id.matrix(), FieldMatrix::identity(kQ, 16));

  const AlgebraMap proj = tcmap::tensor_square_map(diagonal_map(a, {1, 1, 0, 0}));
  EXPECT_TRUE(proj.image(proj.source().index_of("y⊗1")).empty());
  EXPECT_EQ(proj.image(proj.source().index_of("x⊗x")), (SparseVector{{proj.target().index_of("x⊗x"), Rational(1)}}));

  const AlgebraMap zero = tcmap::tensor_square_map(diagonal_map(a, {1, 0, 0, 0}));
  for (std::size_t j = 0; j < 16; ++j)
    if (j != zero.source().unit()) {
      EXPECT_TRUE(zero.image(j).empty());
    }
}

TEST(SubspaceCuplength, Examples) {
  const GradedAlgebra sq = tcmap::tensor_square(lambda_x());
  const Subspace v = Subspace::span(kQ, sq.dim(), {coords(sq, {{"1⊗x", 1}, {"x⊗1", -1}}), coords(sq, {{"x⊗x", 1}})});
  EXPECT_EQ(tcmap::subspace_cuplength(sq, v), 1u);

  const GradedAlgebra s2 = tcmap::tensor_square(tcmap::sphere_cohomology(kQ, 2));
  const Subspace w = Subspace::span(kQ, s2.dim(), {coords(s2, {{"1⊗u", 1}, {"u⊗1", -1}})});
  EXPECT_EQ(tcmap::subspace_cuplength(s2, w), 2u);

  EXPECT_EQ(tcmap::subspace_cuplength(s2, Subspace(kQ, s2.dim())), 0u);
  EXPECT_THROW(tcmap::subspace_cuplength(s2, Subspace::coordinate(kQ, s2.dim(), {s2.unit()})), tcmap::InvalidInput);
}

TEST(ZeroDivisorCuplength, Spheres) {
  EXPECT_EQ(tcmap::zero_divisor_cuplength(tcmap::sphere_cohomology(kQ, 1)), 1u);
  EXPECT_EQ(tcmap::zero_divisor_cuplength(tcmap::sphere_cohomology(kQ, 2)), 2u);
  EXPECT_EQ(tcmap::zero_divisor_cuplength(tcmap::sphere_cohomology(kQ, 3)), 1u);
  EXPECT_EQ(tcmap::zero_divisor_cuplength(lambda_xy()), 2u);
  EXPECT_EQ(tcmap::zero_divisor_cuplength(tcmap::point_cohomology(kQ)), 0u);
  // Over F_2 the even-sphere bound drops: (1⊗u + u⊗1)² = 2 u⊗u = 0.
  EXPECT_EQ(tcmap::zero_divisor_cuplength(tcmap::sphere_cohomology(Field::prime(2), 2)), 1u);
}

TEST(MapBounds, Examples) {
  const GradedAlgebra a = lambda_xy();
  EXPECT_EQ(tcmap::tc_map_lower_bound(AlgebraMap::identity(a)), 2u);
  EXPECT_EQ(tcmap::tc_map_lower_bound(diagonal_map(a, {1, 1, 0, 0})), 1u);
  EXPECT_EQ(tcmap::tc_map_lower_bound(diagonal_map(a, {1, 0, 0, 0})), 0u);

  EXPECT_EQ(tcmap::cat_map_lower_bound(AlgebraMap::identity(a)), 0u);
  EXPECT_EQ(tcmap::cat_map_lower_bound(diagonal_map(a, {1, 0, 0, 0})), 2u);
  EXPECT_EQ(tcmap::cat_map_lower_bound(diagonal_map(a, {1, 1, 0, 0})), 1u);
}

TEST(MapBounds, InvalidMapThrows) {
  const GradedAlgebra a = lambda_xy();
  // y ↦ xy does not preserve degree.
  FieldMatrix m = FieldMatrix::identity(kQ, 4);
  m.set(2, 2, 0);
  m.set(3, 2, 1);
  EXPECT_THROW(tcmap::tc_map_lower_bound(AlgebraMap(a, a, m)), tcmap::InvalidInput);
}

TEST(ZeroDivisorCuplength, IdentityMapBoundAgrees) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const GradedAlgebra a = oracle::algebra_of(oracle::random_algebra(rng, 6));
    EXPECT_EQ(tcmap::tc_map_lower_bound(AlgebraMap::identity(a)), tcmap::zero_divisor_cuplength(a));
  }
}

TEST(ZeroDivisorCuplength, AgreesWithExhaustiveOracle) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Table t = oracle::random_algebra(rng, 8);
    const GradedAlgebra a = oracle::algebra_of(t);
    ASSERT_TRUE(tcmap::validate_algebra(a).ok()) << "trial " << trial;
    EXPECT_EQ(tcmap::zero_divisor_cuplength(a), oracle::zero_divisor_cuplength(t)) << "trial " << trial;
  }
}

// Random homogeneous spanning sets V ⊆ V' of the positive part.
TEST(SubspaceCuplength, OracleAndMonotonicity) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> coeff(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const oracle::Table t = oracle::random_algebra(rng, 8);
    const GradedAlgebra a = oracle::algebra_of(t);
    std::vector<std::vector<Rational>> vs;
    std::size_t prev = 0;
    for (int grow = 0; grow < 4; ++grow) {
      const int d = t.degree[1 + rng() % (t.dim() - 1)];
      std::vector<Rational> v(t.dim(), Rational(0));
      for (std::size_t i = 0; i < t.dim(); ++i)
        if (t.degree[i] == d) v[i] = coeff(rng);
      vs.push_back(v);
      const Subspace span = Subspace::span(kQ, a.dim(), vs);
      const std::size_t k = tcmap::subspace_cuplength(a, span);
      EXPECT_EQ(k, oracle::exhaustive_cuplength(t, vs)) << "trial " << trial;
      EXPECT_GE(k, prev);
      prev = k;
    }
  }
}

TEST(TensorSquare, RandomSquaresAreValid) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const GradedAlgebra a = oracle::algebra_of(oracle::random_algebra(rng, 6));
    EXPECT_TRUE(tcmap::validate_algebra(tcmap::tensor_square(a)).ok());
  }
}

TEST(TensorSquare, SignsVanishOverF2) {
  const Field f2 = Field::prime(2);
  for (const GradedAlgebra& a : {lambda_xy(f2), tcmap::exterior_algebra(f2, {{"x", 1}, {"z", 3}})}) {
    const GradedAlgebra sq = tcmap::tensor_square(a);
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n * n; ++i)
      for (std::size_t j = 0; j < n * n; ++j) {
        // Unsigned product (a⊗b)(c⊗d) = ac ⊗ bd.
        SparseVector expected;
        for (const auto& [p, c1] : a.product(i / n, j / n))
          for (const auto& [q, c2] : a.product(i % n, j % n)) sq.accumulate(expected, p * n + q, c1 * c2);
        EXPECT_EQ(sq.product(i, j), expected);
      }
  }
}

}  // namespace
