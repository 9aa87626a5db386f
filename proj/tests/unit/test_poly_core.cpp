#include <random>

#include <gtest/gtest.h>

#include "agler/herm_poly.hpp"
#include "agler/mat_poly.hpp"
#include "oracles.hpp"

using namespace agler;

namespace {

const Complex I{0.0, 1.0};

Matrix scalar(Complex c) { return Matrix::Constant(1, 1, c); }

MatPoly z(std::size_t d, std::size_t i) { return MatPoly::variable(d, i); }

HermPoly one_minus_wz() { return HermPoly::identity(1, 1) - HermPoly::outer(z(1, 0)); }

MatPoly random_poly(std::mt19937_64& rng, std::size_t d, Index rows, Index cols, int degree) {
  std::normal_distribution<double> g;
  MatPoly::CoeffMap c;
  for (const auto& e : monomials_up_to(d, degree)) {
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m(i) = Complex(g(rng), g(rng));
    c.emplace(e, m);
  }
  return MatPoly(d, rows, cols, std::move(c));
}

Point random_point(std::mt19937_64& rng, std::size_t d, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Point p(static_cast<Index>(d));
  for (Index i = 0; i < p.size(); ++i) p(i) = Complex(u(rng), u(rng));
  return p;
}

}  // namespace

TEST(MultiIndex, GradedLexOrdersByDegreeThenLex) {
  GradedLex lt;
  EXPECT_TRUE(lt(MultiIndex{0, 0}, MultiIndex{0, 1}));
  EXPECT_TRUE(lt(MultiIndex{0, 1}, MultiIndex{1, 0}));
  EXPECT_TRUE(lt(MultiIndex{1, 0}, MultiIndex{0, 2}));
  EXPECT_FALSE(lt(MultiIndex{1, 1}, MultiIndex{1, 1}));
}

TEST(MultiIndex, MonomialCountIsBinomial) {
  // C(d + D, D)
  EXPECT_EQ(monomials_up_to(1, 3).size(), 4u);
  EXPECT_EQ(monomials_up_to(2, 2).size(), 6u);
  EXPECT_EQ(monomials_up_to(3, 2).size(), 10u);
  const auto b = monomials_up_to(2, 2);
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end(), GradedLex{}));
}

TEST(MultiIndex, DivisionAndDifference) {
  EXPECT_TRUE((MultiIndex{1, 0}).divides(MultiIndex{2, 1}));
  EXPECT_FALSE((MultiIndex{0, 2}).divides(MultiIndex{2, 1}));
  EXPECT_EQ((MultiIndex{2, 1}) - (MultiIndex{1, 0}), (MultiIndex{1, 1}));
}

TEST(EvalMatPoly, MonomialTimesIdentity) {
  const MatPoly p = MatPoly::monomial(2, MultiIndex{1, 0}, Matrix::Identity(2, 2));
  Point pt(2);
  pt << 0.5, 0.3;
  const Matrix v = eval_matpoly(p, pt);
  EXPECT_NEAR((v - 0.5 * Matrix::Identity(2, 2)).norm(), 0.0, 1e-15);
}

TEST(EvalMatPoly, ConstantIsConstant) {
  Matrix c(2, 2);
  c << 1.0, I, -I, 2.0;
  const MatPoly p = MatPoly::constant(2, c);
  Point pt(2);
  pt << Complex(0.7, -0.1), 3.0;
  EXPECT_EQ(eval_matpoly(p, pt), c);
}

TEST(EvalMatPoly, RowOfCoordinates) {
  MatPoly::CoeffMap c;
  Matrix e1(1, 2), e2(1, 2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  c.emplace(MultiIndex{1, 0}, e1);
  c.emplace(MultiIndex{0, 1}, e2);
  const MatPoly p(2, 1, 2, std::move(c));
  Point pt(2);
  pt << 0.2, 0.4 * I;
  const Matrix v = eval_matpoly(p, pt);
  EXPECT_NEAR(std::abs(v(0, 0) - 0.2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v(0, 1) - 0.4 * I), 0.0, 1e-15);
}

TEST(EvalMatPoly, WrongPointSizeThrows) {
  EXPECT_THROW(eval_matpoly(z(2, 0), Point::Zero(3)), DimensionMismatch);
}

TEST(EvalMatPoly, MatchesOracleOnRandomPolynomials) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const MatPoly p = random_poly(rng, 3, 2, 3, 3);
    const Point pt = random_point(rng, 3, 1.2);
    EXPECT_LE((p(pt) - oracle::eval(p, pt)).norm(), 1e-12 * (1.0 + oracle::eval(p, pt).norm()));
  }
}

TEST(MatPolyAlgebra, ProductEvaluatesToProductOfValues) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const MatPoly a = random_poly(rng, 2, 2, 3, 2);
    const MatPoly b = random_poly(rng, 2, 3, 1, 2);
    const Point pt = random_point(rng, 2, 1.0);
    const Matrix expected = oracle::eval(a, pt) * oracle::eval(b, pt);
    EXPECT_LE(((a * b)(pt) - expected).norm(), 1e-12 * (1.0 + expected.norm()));
  }
}

TEST(MatPolyAlgebra, SumDifferenceAndCancellation) {
  std::mt19937_64 rng(3);
  const MatPoly a = random_poly(rng, 2, 2, 2, 2);
  EXPECT_TRUE((a - a).is_zero());
  const MatPoly b = random_poly(rng, 2, 2, 2, 1);
  Point pt(2);
  pt << 0.3, -0.4 * I;
  EXPECT_LE(((a + b)(pt) - oracle::eval(a, pt) - oracle::eval(b, pt)).norm(), 1e-12);
  EXPECT_THROW(a + random_poly(rng, 2, 3, 2, 1), ShapeMismatch);
}

TEST(MatPolyAlgebra, KronIdentityMatchesOracle) {
  std::mt19937_64 rng(5);
  const MatPoly a = random_poly(rng, 2, 2, 3, 1);
  Point pt(2);
  pt << 0.1, 0.6;
  const Matrix expected = oracle::kron(oracle::eval(a, pt), Matrix::Identity(3, 3));
  EXPECT_LE((a.kron_identity(3)(pt) - expected).norm(), 1e-13);
}

TEST(MatPolyAlgebra, DegreeAndSupport) {
  const MatPoly p = z(2, 0) * z(2, 1) + MatPoly::constant(2, scalar(1.0));
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.degree_in(0), 1);
  EXPECT_EQ(MatPoly(2, 1, 1).degree(), -1);
  EXPECT_EQ(p.support().size(), 2u);
}

TEST(BivarOuter, ZTimesZ) {
  const BivarPoly b = bivar_outer(z(1, 0), z(1, 0));
  ASSERT_EQ(b.coeffs().size(), 1u);
  EXPECT_EQ(b.coeff(MultiIndex{1}, MultiIndex{1})(0, 0), Complex(1.0));
}

TEST(BivarOuter, StackedOneAndZ) {
  // [1; z]^*(w) [1; z](z) = 1 + w z
  const MatPoly f = MatPoly::vstack(std::vector<MatPoly>{MatPoly::constant(1, scalar(1.0)), z(1, 0)});
  const BivarPoly b = bivar_outer(f, f);
  EXPECT_EQ(b.rows(), 1);
  EXPECT_EQ(b.coeffs().size(), 2u);
  EXPECT_EQ(b.coeff(MultiIndex{0}, MultiIndex{0})(0, 0), Complex(1.0));
  EXPECT_EQ(b.coeff(MultiIndex{1}, MultiIndex{1})(0, 0), Complex(1.0));
}

TEST(BivarOuter, OneAndZ) {
  const BivarPoly b = bivar_outer(MatPoly::constant(1, scalar(1.0)), z(1, 0));
  ASSERT_EQ(b.coeffs().size(), 1u);
  EXPECT_EQ(b.coeffs().begin()->first.w, MultiIndex{0});
  EXPECT_EQ(b.coeffs().begin()->first.z, MultiIndex{1});
}

TEST(HermPoly, OuterIsExactlyHermitian) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const HermPoly h = HermPoly::outer(random_poly(rng, 2, 3, 2, 2));
    EXPECT_TRUE(h.as_bivar().is_hermitian_exact());
    EXPECT_EQ(h.as_bivar().hermitian_defect(), 0.0);
  }
}

TEST(HermPoly, FromBivarRejectsNonHermitian) {
  EXPECT_THROW(HermPoly::from_bivar(bivar_outer(MatPoly::constant(1, scalar(1.0)), z(1, 0))), std::invalid_argument);
}

TEST(HermPoly, SubAndScale) {
  EXPECT_TRUE(herm_sub(one_minus_wz(), one_minus_wz()).is_zero());
  const HermPoly s = herm_scale(one_minus_wz(), 2.0);
  EXPECT_EQ(s.coeff(MultiIndex{0}, MultiIndex{0})(0, 0), Complex(2.0));
  EXPECT_EQ(s.coeff(MultiIndex{1}, MultiIndex{1})(0, 0), Complex(-2.0));
  const HermPoly two_minus_wz = HermPoly::constant(1, scalar(2.0)) - HermPoly::outer(z(1, 0));
  const HermPoly diff = herm_sub(two_minus_wz, HermPoly::identity(1, 1));
  EXPECT_TRUE(herm_sub(diff, one_minus_wz()).is_zero());
}

TEST(HermPoly, CongruenceMatchesOracle) {
  std::mt19937_64 rng(23);
  const MatPoly f = random_poly(rng, 1, 1, 2, 1);
  const HermPoly c = one_minus_wz().congruence(f);
  Point pt(1);
  pt << Complex(0.3, 0.2);
  const Matrix fv = oracle::eval(f, pt);
  const Matrix expected = fv.adjoint() * (1.0 - std::norm(pt(0))) * fv;
  EXPECT_LE((c.diagonal_value(pt) - expected).norm(), 1e-13);
}

TEST(HereditaryEval, ScalarOperator) {
  const CommutingTuple t({scalar(0.5)});
  EXPECT_NEAR(std::abs(hereditary_eval(one_minus_wz(), t)(0, 0) - 0.75), 0.0, 1e-15);
}

TEST(HereditaryEval, DiagonalOperator) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.5;
  const Matrix v = hereditary_eval(one_minus_wz(), CommutingTuple({d}));
  EXPECT_LE((v - 0.75 * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(HereditaryEval, NilpotentOperatorGivesTStarT) {
  Matrix t = Matrix::Zero(2, 2);
  t(0, 1) = 1.0;
  const Matrix v = hereditary_eval(HermPoly::outer(z(1, 0)), CommutingTuple({t}));
  EXPECT_LE((v - t.adjoint() * t).norm(), 1e-15);
  EXPECT_EQ(v(1, 1), Complex(1.0));
}

TEST(HereditaryEval, MatchesOracleOnPolynomialsOfOneOperator) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a(3, 3);
    for (Index i = 0; i < a.size(); ++i) a(i) = 0.3 * Complex(g(rng), g(rng));
    // a and a^2 - 0.5 a commute.
    const std::vector<Matrix> ops{a, a * a - 0.5 * a};
    const HermPoly p = HermPoly::outer(random_poly(rng, 2, 2, 2, 2)) - HermPoly::identity(2, 2);
    const Matrix expected = oracle::hereditary(p, ops);
    EXPECT_LE((hereditary_eval(p, CommutingTuple(ops)) - expected).norm(), 1e-12 * (1.0 + expected.norm()));
  }
}

TEST(HereditaryEval, DiagonalTupleReducesToPointValues) {
  std::mt19937_64 rng(31);
  const HermPoly p = HermPoly::outer(random_poly(rng, 2, 1, 1, 2)) * 0.5;
  std::vector<Point> pts{random_point(rng, 2, 0.7), random_point(rng, 2, 0.7)};
  const Matrix v = hereditary_eval(p, CommutingTuple::diagonal(pts));
  for (Index k = 0; k < 2; ++k) {
    EXPECT_NEAR(std::abs(v(k, k) - oracle::diagonal(p, pts[static_cast<std::size_t>(k)])(0, 0)), 0.0, 1e-13);
  }
}

TEST(CommutingTuple, RejectsNonCommutingPair) {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  b(1, 0) = 1.0;
  EXPECT_THROW(CommutingTuple({a, b}), CommutationViolation);
}

TEST(CoeffMatrix, StackedBlocks) {
  const MatPoly f = MatPoly::vstack(std::vector<MatPoly>{z(1, 0), MatPoly::constant(1, scalar(1.0))});
  const std::vector<MultiIndex> basis{MultiIndex{0}, MultiIndex{1}};
  Matrix expected(4, 1);
  expected << 0.0, 1.0, 1.0, 0.0;
  EXPECT_EQ(coeff_matrix(f, basis), expected);
}

TEST(CoeffMatrix, ZeroAndConstant) {
  const std::vector<MultiIndex> basis{MultiIndex{0}, MultiIndex{1}};
  EXPECT_EQ(coeff_matrix(MatPoly(1, 2, 1), basis), Matrix::Zero(4, 1));
  Matrix c(2, 2);
  c << 1.0, 2.0, 3.0, I;
  const std::vector<MultiIndex> b0{MultiIndex{0}};
  EXPECT_EQ(coeff_matrix(MatPoly::constant(1, c), b0), c);
}

TEST(CoeffMatrix, MissingBasisMonomialThrows) {
  const std::vector<MultiIndex> b0{MultiIndex{0}};
  EXPECT_THROW(coeff_matrix(z(1, 0), b0), std::invalid_argument);
}

TEST(CoeffMatrix, SideBySideColumnsSpanValues) {
  std::mt19937_64 rng(37);
  const MatPoly f = random_poly(rng, 2, 3, 1, 1);
  const auto basis = monomials_up_to(2, 1);
  const Matrix m = coeff_matrix(f, basis, CoeffLayout::kSideBySide);
  ASSERT_EQ(m.rows(), 3);
  ASSERT_EQ(m.cols(), 3);
  Point pt(2);
  pt << 0.4, -0.2;
  Vector mono(3);
  for (Index a = 0; a < 3; ++a) mono(a) = oracle::monomial(basis[static_cast<std::size_t>(a)], pt);
  EXPECT_LE((m * mono - oracle::eval(f, pt)).norm(), 1e-14);
}
