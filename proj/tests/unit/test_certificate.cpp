#include <gtest/gtest.h>

#include "agler/certificate.hpp"
#include "oracles.hpp"

using namespace agler;

namespace {

const Complex I{0.0, 1.0};

Matrix scalar(Complex c) { return Matrix::Constant(1, 1, c); }

HermPoly c_minus_wz(double c, std::size_t d = 1, std::size_t i = 0) {
  return HermPoly::constant(d, scalar(c)) - HermPoly::outer(MatPoly::variable(d, i));
}

Certificate expect_certificate(const CertifyResult& r) {
  const auto* c = std::get_if<Certificate>(&r);
  if (c == nullptr) {
    ADD_FAILURE() << "expected a certificate, got: " << std::get<NotFoundUpToDegree>(r).reason;
    return {};
  }
  return *c;
}

/// Gram values read off the solver output: G0 and W1 at D = 0.
std::pair<double, double> solve_d0(const HermPoly& target) {
  const auto defects = defect_polys(make_preset("polydisk:1"));
  GramProblem gp = build_gram_problem(target, defects, 0);
  const auto sol = std::get<sdp::PsdSolution>(sdp::solve_psd_feasibility(gp.sdp, {.tol = 1e-11}));
  return {sol.blocks[0](0, 0).real(), sol.blocks[1](0, 0).real()};
}

}  // namespace

TEST(GramProblem, DiskOneMinusWzHandSystem) {
  const auto defects = defect_polys(make_preset("polydisk:1"));
  const GramProblem gp = build_gram_problem(c_minus_wz(1.0), defects, 0);
  EXPECT_FALSE(gp.structurally_infeasible);
  ASSERT_EQ(gp.sdp.block_sizes.size(), 2u);
  EXPECT_EQ(gp.sdp.block_sizes[0], 1);
  EXPECT_EQ(gp.sdp.block_sizes[1], 1);
  const auto [g0, w1] = solve_d0(c_minus_wz(1.0));
  EXPECT_NEAR(g0, 0.0, 1e-9);
  EXPECT_NEAR(w1, 1.0, 1e-9);
}

TEST(GramProblem, DiskTwoMinusWzHandSystem) {
  const auto [g0, w1] = solve_d0(c_minus_wz(2.0));
  EXPECT_NEAR(g0, 1.0, 1e-9);
  EXPECT_NEAR(w1, 1.0, 1e-9);
}

TEST(GramProblem, ConstantTargetIsG0) {
  Matrix a(2, 2);
  a << 2.0, 0.5 * I, -0.5 * I, 1.0;
  const GramProblem gp = build_gram_problem(HermPoly::constant(1, a), {}, 0);
  ASSERT_EQ(gp.sdp.block_sizes.size(), 1u);
  const auto sol = std::get<sdp::PsdSolution>(sdp::solve_psd_feasibility(gp.sdp, {.tol = 1e-11}));
  EXPECT_LE((sol.blocks[0] - a).norm(), 1e-9);
}

TEST(GramProblem, TargetBeyondWindowIsStructurallyInfeasible) {
  const auto defects = defect_polys(make_preset("polydisk:1"));
  const HermPoly target = HermPoly::identity(1, 1) - HermPoly::outer(MatPoly::monomial(1, MultiIndex{3}, scalar(1.0)));
  EXPECT_TRUE(build_gram_problem(target, defects, 0).structurally_infeasible);
  EXPECT_FALSE(build_gram_problem(target, defects, 2).structurally_infeasible);
}

TEST(Certify, DiskOneMinusWz) {
  const DomainSpec disk = make_preset("polydisk:1");
  const Certificate& c = expect_certificate(certify(c_minus_wz(1.0), disk));
  EXPECT_EQ(c.degree, 0);
  EXPECT_EQ(c.n0, 0);
  ASSERT_EQ(c.n.size(), 1u);
  EXPECT_EQ(c.n[0], 1);
  EXPECT_NEAR(std::abs(c.h[0].coeff(MultiIndex{0})(0, 0)), 1.0, 1e-9);
  EXPECT_LE(certificate_residual(c_minus_wz(1.0), c, disk), 1e-12);
}

TEST(Certify, ShiftedBidiskTarget) {
  // 3 - w1 z1 = 2 + (1 - w1 z1)
  const DomainSpec s = make_preset("polydisk:2");
  const HermPoly target = c_minus_wz(3.0, 2, 0);
  const Certificate& c = expect_certificate(certify(target, s));
  EXPECT_EQ(c.degree, 0);
  EXPECT_EQ(c.n0, 1);
  const Matrix h0h0 = c.h0.coeff(MultiIndex{0, 0}).adjoint() * c.h0.coeff(MultiIndex{0, 0});
  EXPECT_NEAR(h0h0(0, 0).real(), 2.0, 1e-8);
  EXPECT_EQ(c.n[0], 1);
  EXPECT_EQ(c.n[1], 0);
  EXPECT_LE(certificate_residual(target, c, s), 1e-8);
}

TEST(Certify, NegativeTargetReturnsWitness) {
  const HermPoly target = HermPoly::outer(MatPoly::variable(1, 0)) - HermPoly::identity(1, 1);
  const auto res = certify(target, make_preset("polydisk:1"));
  const auto* nf = std::get_if<NotFoundUpToDegree>(&res);
  ASSERT_NE(nf, nullptr);
  ASSERT_TRUE(nf->witness.has_value());
  EXPECT_EQ(*nf->witness, Point::Zero(1));
  EXPECT_LT(nf->witness_eigenvalue, 0.0);
}

TEST(Certify, IncompatibleTargetThrows) {
  EXPECT_THROW(certify(c_minus_wz(1.0, 2), make_preset("polydisk:1")), DimensionMismatch);
}

TEST(Certify, RowBallSumOfDiagonalDefects) {
  // 2 - w1 z1 - w2 z2 = e1^* (I - P^* P) e1 + e2^* (I - P^* P) e2.
  const DomainSpec s = make_preset("cartan1:1x2");
  const HermPoly target = HermPoly::constant(2, scalar(2.0)) - HermPoly::outer(MatPoly::variable(2, 0)) -
                          HermPoly::outer(MatPoly::variable(2, 1));
  const Certificate& c = expect_certificate(certify(target, s));
  EXPECT_LE(certificate_residual(target, c, s), 1e-8);
}

TEST(Certify, RowBallColumnDefectIsNotInTheModule) {
  // The truncated 2-shift on span{1, z1, z2} is a commuting row contraction
  // where 1 - w1 z1 - w2 z2 evaluates to -1 on the vacuum vector, so no
  // certificate can exist even though the target is positive on the ball.
  Matrix t1 = Matrix::Zero(3, 3), t2 = Matrix::Zero(3, 3);
  t1(1, 0) = 1.0;
  t2(2, 0) = 1.0;
  const DomainSpec s = make_preset("cartan1:1x2");
  Matrix row(3, 6);
  row << t1, t2;
  EXPECT_LE(oracle::max_singular(row), 1.0 + 1e-15);
  const HermPoly target = HermPoly::identity(2, 1) - HermPoly::outer(MatPoly::variable(2, 0)) -
                          HermPoly::outer(MatPoly::variable(2, 1));
  EXPECT_NEAR(oracle::min_eig(oracle::hereditary(target, {t1, t2})), -1.0, 1e-15);
  CertifyOptions o;
  o.d_max = 2;
  EXPECT_TRUE(std::holds_alternative<NotFoundUpToDegree>(certify(target, s, o)));
}

TEST(Certify, MatrixTarget) {
  // A^* A + (1 - wz) B^* B on the disk.
  Matrix a(2, 2), b(1, 2);
  a << 1.0, 0.2 * I, 0.0, 0.5;
  b << 0.3, 0.4;
  const HermPoly target = HermPoly::constant(1, a.adjoint() * a) +
                          (HermPoly::identity(1, 1) - HermPoly::outer(MatPoly::variable(1, 0)))
                              .congruence(MatPoly::constant(1, b));
  const DomainSpec disk = make_preset("polydisk:1");
  const Certificate& c = expect_certificate(certify(target, disk));
  EXPECT_EQ(c.gamma, 2);
  EXPECT_LE(certificate_residual(target, c, disk), 1e-8);
}

TEST(CertificateResidual, PerturbationIsFirstOrder) {
  const DomainSpec disk = make_preset("polydisk:1");
  Certificate c = expect_certificate(certify(c_minus_wz(1.0), disk));
  const double eps = 1e-3;
  c.h[0] = c.h[0] + MatPoly::constant(1, scalar(eps));
  const double r = certificate_residual(c_minus_wz(1.0), c, disk);
  EXPECT_GE(r, 1e-4);
  EXPECT_LE(r, 1e-2);
}

TEST(CertificateResidual, EmptyCertificateOfZeroTarget) {
  Certificate c;
  c.d = 1;
  c.gamma = 1;
  c.h0 = MatPoly(1, 0, 1);
  c.h = {MatPoly(1, 0, 1)};
  c.n = {0};
  EXPECT_EQ(certificate_residual(HermPoly(1, 1), c, make_preset("polydisk:1")), 0.0);
}

TEST(Reconstruct, MatchesHereditaryOracle) {
  const DomainSpec s = make_preset("polydisk:2");
  const HermPoly target = c_minus_wz(1.0, 2, 0) * 2.0 + c_minus_wz(1.5, 2, 1);
  const Certificate& c = expect_certificate(certify(target, s));
  const HermPoly rhs = reconstruct(c, defect_polys(s));
  Matrix t1 = Matrix::Zero(2, 2), t2 = Matrix::Zero(2, 2);
  t1 << 0.3, 0.1, 0.0, -0.2;
  t2 = 0.5 * t1 * t1;
  const std::vector<Matrix> ops{t1, t2};
  EXPECT_LE((oracle::hereditary(target, ops) - oracle::hereditary(rhs, ops)).norm(), 1e-8);
}

TEST(SpotCheck, DiskHandExample) {
  // 1 - wz at T = diag(0.3, 0.7 i) is diag(0.91, 0.51).
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 0.3;
  t(1, 1) = 0.7 * I;
  const Matrix v = hereditary_eval(c_minus_wz(1.0), CommutingTuple({t}));
  EXPECT_NEAR(v(0, 0).real(), 0.91, 1e-15);
  EXPECT_NEAR(v(1, 1).real(), 0.51, 1e-15);
  const DomainSpec disk = make_preset("polydisk:1");
  const Certificate& c = expect_certificate(certify(c_minus_wz(1.0), disk));
  const Matrix rhs = hereditary_eval(reconstruct(c, defect_polys(disk)), CommutingTuple({t}));
  EXPECT_LE((v - rhs).norm(), 1e-12);
}

TEST(SpotCheck, ZeroTrialsIsEmpty) {
  const DomainSpec disk = make_preset("polydisk:1");
  const Certificate& c = expect_certificate(certify(c_minus_wz(1.0), disk));
  const auto rep = hereditary_spot_check(c_minus_wz(1.0), c, disk, 0, 3, 0);
  EXPECT_EQ(rep.trials, 0);
  EXPECT_TRUE(rep.passed());
}

TEST(SpotCheck, TwoMinusWzHasEigenvaluesAtLeastOne) {
  const DomainSpec disk = make_preset("polydisk:1");
  const Certificate& c = expect_certificate(certify(c_minus_wz(2.0), disk));
  const auto rep = hereditary_spot_check(c_minus_wz(2.0), c, disk, 30, 4, 9);
  EXPECT_TRUE(rep.passed());
  EXPECT_GE(rep.min_target_eigenvalue, 1.0 - 1e-12);
  EXPECT_LE(rep.max_mismatch, 1e-8);
}

TEST(Certify, ReconstructionIsHermitianExact) {
  const DomainSpec s = make_preset("polydisk:2");
  const HermPoly target = c_minus_wz(1.0, 2, 0) + c_minus_wz(1.0, 2, 1);
  const Certificate& c = expect_certificate(certify(target, s));
  EXPECT_TRUE(reconstruct(c, defect_polys(s)).as_bivar().is_hermitian_exact());
}
