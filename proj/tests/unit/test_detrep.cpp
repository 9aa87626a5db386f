#include <numbers>

#include <gtest/gtest.h>

#include "agler/detrep.hpp"
#include "oracles.hpp"

using namespace agler;

namespace {

Matrix scalar(Complex c) { return Matrix::Constant(1, 1, c); }

MatPoly zv(std::size_t d, std::size_t i) { return MatPoly::variable(d, i); }

MatPoly cst(std::size_t d, Complex c) { return MatPoly::constant(d, scalar(c)); }

/// min |p| over a grid of the distinguished boundary, which for these
/// fixtures (zero-free on the closed polydisk) bounds min |p| on it.
double torus_min(const MatPoly& p, int grid) {
  const std::size_t d = p.d();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(d, 0);
  while (true) {
    Point z(static_cast<Index>(d));
    for (std::size_t v = 0; v < d; ++v) z(static_cast<Index>(v)) = std::polar(1.0, 2.0 * std::numbers::pi * idx[v] / grid);
    best = std::min(best, std::abs(oracle::eval(p, z)(0, 0)));
    std::size_t v = 0;
    while (v < d && ++idx[v] == grid) idx[v++] = 0;
    if (v == d) break;
  }
  return best;
}

Complex det_oracle(const Matrix& k, const std::vector<Index>& n, const DomainSpec& s, const Point& z) {
  if (k.size() == 0) return 1.0;
  Matrix pn = Matrix::Zero(k.cols(), k.rows());
  Index r = 0, c = 0;
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    const Matrix blk = oracle::kron(oracle::eval(s.blocks[i], z), Matrix::Identity(n[i], n[i]));
    pn.block(r, c, blk.rows(), blk.cols()) = blk;
    r += blk.rows();
    c += blk.cols();
  }
  return (Matrix::Identity(k.rows(), k.rows()) - k * pn).determinant();
}

}  // namespace

TEST(Divide, ExactProduct) {
  const MatPoly a = cst(2, 1.0) - zv(2, 0) * Complex(0.5);
  const MatPoly b = cst(2, 2.0) + zv(2, 1) * zv(2, 0) - zv(2, 1) * Complex(0.25);
  const auto [q, r] = divide(a * b, a);
  EXPECT_TRUE(r.is_zero() || coeff_norm(r) <= 1e-15);
  EXPECT_LE(coeff_norm(q - b), 1e-14);
}

TEST(Divide, RemainderSatisfiesIdentity) {
  const MatPoly num = zv(2, 0) * zv(2, 0) + zv(2, 1) + cst(2, 3.0);
  const MatPoly den = zv(2, 0) - cst(2, 1.0);
  const auto [q, r] = divide(num, den);
  EXPECT_LE(coeff_norm(q * den + r - num), 1e-14);
  EXPECT_FALSE(r.is_zero());
}

TEST(Divide, RejectsZeroDivisor) { EXPECT_THROW(divide(zv(1, 0), MatPoly(1, 1, 1)), std::invalid_argument); }

TEST(ExpandDet, MatchesPointwiseDeterminant) {
  const DomainSpec s = make_preset("polydisk:2");
  Matrix k(3, 3);
  k << 0.1, 0.2, -0.3, 0.0, 0.4, 0.1, 0.2, -0.1, 0.3;
  const std::vector<Index> n{2, 1};
  const MatPoly det = expand_det(k, n, s);
  EXPECT_LE(det.degree(), 3);
  for (const auto& z : sample_interior(s, 10, 0.1, 4)) {
    EXPECT_NEAR(std::abs(oracle::eval(det, z)(0, 0) - det_oracle(k, n, s, z)), 0.0, 1e-13);
  }
}

TEST(ExpandDet, EmptyIsOne) {
  const DomainSpec s = make_preset("polydisk:1");
  const MatPoly det = expand_det(Matrix(0, 0), {0}, s);
  EXPECT_EQ(det, cst(1, 1.0));
}

TEST(FindScale, OneMinusHalfZ) {
  const DomainSpec disk = make_preset("polydisk:1");
  const MatPoly p = cst(1, 1.0) - zv(1, 0) * Complex(0.5);
  EXPECT_NEAR(torus_min(p, 720), 0.5, 1e-12);
  const ScaleResult sr = find_scale(p, disk, 1);
  EXPECT_LE(sr.c, 0.5 + 1e-6);
  EXPECT_GE(sr.c, 0.5 - 2e-3);
}

TEST(FindScale, ConstantOne) {
  const ScaleResult sr = find_scale(cst(2, 1.0), make_preset("polydisk:2"), 0);
  EXPECT_NEAR(sr.c, 1.0, 1e-3);
}

TEST(FindScale, ThreeMinusSumOnBidisk) {
  const MatPoly p = cst(2, 3.0) - zv(2, 0) - zv(2, 1);
  EXPECT_NEAR(torus_min(p, 120), 1.0, 1e-12);
  const ScaleResult sr = find_scale(p, make_preset("polydisk:2"), 1);
  EXPECT_LE(sr.c, 1.0 + 1e-6);
  EXPECT_GE(sr.c, 1.0 - 3e-3);
}

TEST(FindScale, ZeroInsideIsScreened) {
  const MatPoly p = zv(1, 0) - cst(1, 0.2);
  EXPECT_THROW(find_scale(p, make_preset("polydisk:1"), 1), ScreenFailure);
}

TEST(ExtractDetRep, OneMinusHalfZ) {
  const DomainSpec disk = make_preset("polydisk:1");
  const MatPoly p = cst(1, 1.0) - zv(1, 0) * Complex(0.5);
  const DetRep rep = extract_detrep(p, disk);
  ASSERT_EQ(rep.k.rows(), 1);
  ASSERT_EQ(rep.k.cols(), 1);
  EXPECT_NEAR(std::abs(rep.k(0, 0) - 0.5), 0.0, 1e-8);
  EXPECT_EQ(rep.n, std::vector<Index>{1});
  EXPECT_LE(coeff_norm(rep.q - cst(1, 1.0)), 1e-8);
  EXPECT_LE(verify_detrep(rep, p, disk, 200, 0).max_residual, 1e-12);
}

TEST(ExtractDetRep, ConstantOne) {
  const DomainSpec s = make_preset("polydisk:2");
  const DetRep rep = extract_detrep(cst(2, 1.0), s);
  EXPECT_EQ(rep.k.size(), 0);
  EXPECT_LE(coeff_norm(rep.q - cst(2, 1.0)), 1e-12);
}

TEST(ExtractDetRep, ProductOnBidisk) {
  const DomainSpec s = make_preset("polydisk:2");
  const MatPoly p = (cst(2, 1.0) - zv(2, 0) * Complex(0.5)) * (cst(2, 1.0) - zv(2, 1) * Complex(0.5));
  const DetRep rep = extract_detrep(p, s);
  EXPECT_LE(rep.sigma_max, 1.0 + 1e-10);
  EXPECT_LE(oracle::max_singular(rep.k), 1.0 + 1e-10);
  for (const auto& z : sample_interior(s, 50, 1e-3, 12)) {
    const Complex lhs = oracle::eval(p, z)(0, 0) * oracle::eval(rep.q, z)(0, 0);
    EXPECT_LE(std::abs(lhs - det_oracle(rep.k, rep.n, s, z)), 1e-8);
  }
  EXPECT_FALSE(stability_scan(rep.q, s, 100, 0).flagged);
}

TEST(ExtractDetRep, ZeroAtOriginRejected) {
  EXPECT_THROW(extract_detrep(zv(1, 0), make_preset("polydisk:1")), std::invalid_argument);
}

TEST(VerifyDetRep, PerturbationIsFirstOrder) {
  const DomainSpec disk = make_preset("polydisk:1");
  const MatPoly p = cst(1, 1.0) - zv(1, 0) * Complex(0.5);
  DetRep rep;
  rep.k = scalar(0.5 + 1e-4);
  rep.n = {1};
  rep.q = cst(1, 1.0);
  const double r = verify_detrep(rep, p, disk, 200, 0).max_residual;
  EXPECT_GE(r, 1e-6);
  EXPECT_LE(r, 1e-3);
}

TEST(VerifyDetRep, ZeroSamplesIsNormOnly) {
  DetRep rep;
  rep.k = scalar(0.5);
  rep.n = {1};
  rep.q = cst(1, 1.0);
  const auto v = verify_detrep(rep, cst(1, 1.0) - zv(1, 0) * Complex(0.5), make_preset("polydisk:1"), 0, 0);
  EXPECT_EQ(v.samples, 0);
  EXPECT_EQ(v.max_residual, 0.0);
  EXPECT_NEAR(v.sigma_max, 0.5, 1e-15);
}

TEST(StabilityScan, ConstantOne) {
  const auto rep = stability_scan(cst(1, 1.0), make_preset("polydisk:1"), 50, 0);
  EXPECT_NEAR(rep.min_modulus, 1.0, 1e-15);
  EXPECT_FALSE(rep.flagged);
}

TEST(StabilityScan, OneMinusZApproachesTheMargin) {
  // On |z| <= 1 - margin, min |1 - z| = margin. The scan samples, so it can
  // only over-estimate the minimum.
  const auto rep = stability_scan(cst(1, 1.0) - zv(1, 0), make_preset("polydisk:1"), 400, 0);
  ASSERT_EQ(rep.min_by_margin.size(), 3u);
  for (const auto& [margin, m] : rep.min_by_margin) EXPECT_GE(m, margin - 1e-12);
  EXPECT_LE(rep.min_by_margin.front().second, 0.2);
  EXPECT_FALSE(rep.flagged);
}
