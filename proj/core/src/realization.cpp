#include "agler/realization.hpp"

#include <cmath>

namespace agler {

void RationalMatFn::validate() const {
  if (q.d() != r.d()) throw DimensionMismatch("RationalMatFn: Q and R have different variable counts");
  if (r.rows() != r.cols()) throw ShapeMismatch("RationalMatFn: R must be square");
  if (q.cols() != r.rows()) throw ShapeMismatch("RationalMatFn: Q must have as many columns as R");
}

Matrix RationalMatFn::operator()(const Point& z) const {
  // F = Q R^{-1}, i.e. F^T = R^{-T} Q^T.
  const Eigen::PartialPivLU<Matrix> lu(r(z).transpose());
  if (std::abs(lu.determinant()) == 0.0) throw NumericalError("RationalMatFn: R(z) is singular");
  return lu.solve(q(z).transpose()).transpose();
}

Matrix Colligation::full() const {
  Matrix s(a.rows() + c.rows(), a.cols() + b.cols());
  s << a, b, c, d;
  return s;
}

HermPoly defect_of(const RationalMatFn& fn) {
  fn.validate();
  return HermPoly::outer(fn.r) - HermPoly::outer(fn.q);
}

LurkingData lurking_data(const RationalMatFn& fn, const Certificate& cert, const DomainSpec& domain) {
  fn.validate();
  domain.validate();
  if (fn.q.d() != domain.d) throw DimensionMismatch("lurking_contraction: function and domain variable counts differ");
  if (cert.gamma != fn.beta()) throw ShapeMismatch("lurking_contraction: certificate size differs from beta");
  if (cert.h.size() != domain.blocks.size()) {
    throw ShapeMismatch("lurking_contraction: certificate has " + std::to_string(cert.h.size()) +
                        " defect witnesses, domain has " + std::to_string(domain.blocks.size()) + " blocks");
  }
  std::vector<MatPoly> vparts;
  std::vector<MatPoly> xparts;
  for (std::size_t i = 0; i < domain.blocks.size(); ++i) {
    if (cert.n[i] == 0) continue;
    vparts.push_back(domain.blocks[i].kron_identity(cert.n[i]) * cert.h[i]);
    xparts.push_back(cert.h[i]);
  }
  vparts.push_back(fn.r);
  xparts.push_back(fn.q);
  LurkingData out;
  out.v = MatPoly::vstack(vparts);
  out.x = MatPoly::vstack(xparts);
  const std::vector<MatPoly> both{out.v, out.x};
  out.basis = joint_support(both);
  out.v_mat = coeff_matrix(out.v, out.basis, CoeffLayout::kSideBySide);
  out.x_mat = coeff_matrix(out.x, out.basis, CoeffLayout::kSideBySide);
  return out;
}

Colligation lurking_contraction(const RationalMatFn& fn, const Certificate& cert, const DomainSpec& domain,
                                double tol) {
  const LurkingData ld = lurking_data(fn, cert, domain);
  const Matrix& v = ld.v_mat;
  const Matrix& x = ld.x_mat;

  Matrix s = Matrix::Zero(x.rows(), v.rows());
  if (v.size() > 0) {
    Eigen::BDCSVD<Matrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const double cut = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
    // S = X V^+ with V^+ = V_r diag(1/s) U_r^*; zero on the complement.
    for (Index k = 0; k < sv.size(); ++k) {
      if (sv(k) <= cut || sv(k) == 0.0) break;
      s += (x * svd.matrixV().col(k)) * (svd.matrixU().col(k).adjoint() / sv(k));
    }
  }

  Colligation col;
  col.consistency_residual = (x - s * v).norm();
  const double allowed = 10.0 * std::sqrt(std::max(tol, cert.residual)) * std::max(1.0, x.norm());
  if (col.consistency_residual > allowed) {
    throw NumericalError("lurking_contraction: coefficients of x are not carried by those of v (residual " +
                         std::to_string(col.consistency_residual) + ")");
  }
  double sigma = spectral_norm(s);
  if (sigma > 1.0 + 100.0 * tol) {
    throw NumericalError("lurking_contraction: S has norm " + std::to_string(sigma) + " > 1");
  }
  if (sigma > 1.0) {
    s /= sigma;
    col.rescaled = true;
    sigma = spectral_norm(s);
  }
  col.sigma_max = sigma;

  col.n = cert.n;
  for (const auto& blk : domain.blocks) {
    col.ell.push_back(blk.rows());
    col.m.push_back(blk.cols());
  }
  const Index mrows = domain.weighted_cols(cert.n);
  const Index lcols = domain.weighted_rows(cert.n);
  col.a = s.topLeftCorner(mrows, lcols);
  col.b = s.topRightCorner(mrows, fn.beta());
  col.c = s.bottomLeftCorner(fn.alpha(), lcols);
  col.d = s.bottomRightCorner(fn.alpha(), fn.beta());
  col.degree = cert.degree;
  col.certificate_residual = cert.residual;
  col.solver_iterations = cert.solver_iterations;
  return col;
}

Colligation realize(const RationalMatFn& fn, const DomainSpec& domain, const RealizeOptions& opt) {
  fn.validate();
  domain.validate();
  if (fn.q.d() != domain.d) throw DimensionMismatch("realize: function and domain variable counts differ");

  std::vector<Point> screen{Point::Zero(static_cast<Index>(domain.d))};
  if (opt.screen_samples > 0) {
    auto pts = sample_interior(domain, opt.screen_samples, opt.screen_margin, opt.certify.seed);
    screen.insert(screen.end(), pts.begin(), pts.end());
  }
  for (const auto& z : screen) {
    const Complex det = fn.r(z).determinant();
    if (std::abs(det) < opt.det_threshold) {
      throw std::invalid_argument("realize: det R vanishes to " + std::to_string(std::abs(det)) +
                                  " inside the domain");
    }
    const double norm = spectral_norm(fn(z));
    if (norm >= 1.0) {
      throw ScreenFailure("realize: sup-norm screen failed, ||F(z)|| = " + std::to_string(norm), z);
    }
  }

  CertifyResult res = certify(defect_of(fn), domain, opt.certify);
  if (auto* nf = std::get_if<NotFoundUpToDegree>(&res)) {
    throw NotFoundError("realize: degree exhausted, " + nf->reason);
  }
  const Certificate& cert = std::get<Certificate>(res);
  return lurking_contraction(fn, cert, domain, opt.certify.tol);
}

Matrix eval_realization(const Colligation& col, const DomainSpec& domain, const Point& z) {
  const Matrix p = weighted_value(domain, col.n, z);
  if (p.rows() != col.a.cols() || p.cols() != col.a.rows()) {
    throw ShapeMismatch("eval_realization: colligation partition does not match the domain");
  }
  if (col.a.size() == 0) return col.d;
  const Matrix m = Matrix::Identity(col.a.rows(), col.a.rows()) - col.a * p;
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw NumericalError("eval_realization: near-singular resolvent, condition estimate " +
                         std::to_string(1.0 / rcond));
  }
  return col.d + col.c * p * lu.solve(col.b);
}

RealizationReport verify_realization(const Colligation& col, const RationalMatFn& fn, const DomainSpec& domain,
                                     int samples, std::uint64_t seed, double margin) {
  RealizationReport rep;
  rep.seed = seed;
  rep.sigma_max = spectral_norm(col.full());
  if (samples <= 0) return rep;
  for (const auto& z : sample_interior(domain, samples, margin, seed)) {
    rep.max_error = std::max(rep.max_error, spectral_norm(eval_realization(col, domain, z) - fn(z)));
  }
  rep.samples = samples;
  return rep;
}

}  // namespace agler
