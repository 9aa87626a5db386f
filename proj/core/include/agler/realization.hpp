#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "agler/certificate.hpp"
#include "agler/domains.hpp"

namespace agler {

/// F = Q R^{-1} with Q alpha x beta and R beta x beta.
struct RationalMatFn {
  MatPoly q;
  MatPoly r;

  void validate() const;
  Index alpha() const { return q.rows(); }
  Index beta() const { return q.cols(); }
  /// Q(z) R(z)^{-1}; throws NumericalError when R(z) is singular.
  Matrix operator()(const Point& z) const;
};

/// [A B; C D] with A (sum m_i n_i) x (sum l_i n_i), B (sum m_i n_i) x beta,
/// C alpha x (sum l_i n_i), D alpha x beta.
struct Colligation {
  Matrix a;
  Matrix b;
  Matrix c;
  Matrix d;
  std::vector<Index> n;
  /// Block shapes l_i and m_i of the domain.
  std::vector<Index> ell;
  std::vector<Index> m;

  // Provenance.
  int degree = 0;
  double certificate_residual = 0.0;
  /// ||X - S V|| on the coefficient matrices.
  double consistency_residual = 0.0;
  double sigma_max = 0.0;
  bool rescaled = false;
  int solver_iterations = 0;

  Matrix full() const;
};

/// Pipeline failures that are not input errors: no certificate found, or a
/// necessity screen rejected the input.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScreenFailure : public std::runtime_error {
 public:
  ScreenFailure(const std::string& what, Point where) : std::runtime_error(what), point(std::move(where)) {}
  Point point;
};

/// R^*(w) R(z) - Q^*(w) Q(z).
HermPoly defect_of(const RationalMatFn& fn);

/// Coefficient data of the construction: v = [(P_i (x) I_{n_i}) H_i; R] and
/// x = [H_i; Q], side by side over their joint support.
struct LurkingData {
  MatPoly v;
  MatPoly x;
  std::vector<MultiIndex> basis;
  Matrix v_mat;
  Matrix x_mat;
};

LurkingData lurking_data(const RationalMatFn& fn, const Certificate& cert, const DomainSpec& domain);

/// S = X V^+ split into (A, B, C, D). Throws NumericalError when X is not
/// carried by the row space of V or S is not a contraction within 100 tol.
Colligation lurking_contraction(const RationalMatFn& fn, const Certificate& cert, const DomainSpec& domain,
                                double tol = 1e-8);

struct RealizeOptions {
  CertifyOptions certify;
  /// Sup-norm screen samples.
  int screen_samples = 256;
  double screen_margin = 1e-3;
  /// Below this min |det R| on the samples R counts as singular.
  double det_threshold = 1e-10;
};

/// certify(defect_of(fn)) followed by lurking_contraction. Throws
/// ScreenFailure when sup ||F|| >= 1 on a sample, NotFoundError when no
/// certificate is found.
Colligation realize(const RationalMatFn& fn, const DomainSpec& domain, const RealizeOptions& options = {});

/// D + C P(z)_n (I - A P(z)_n)^{-1} B.
Matrix eval_realization(const Colligation& col, const DomainSpec& domain, const Point& z);

struct RealizationReport {
  int samples = 0;
  double max_error = 0.0;
  double sigma_max = 0.0;
  std::uint64_t seed = 0;
};

RealizationReport verify_realization(const Colligation& col, const RationalMatFn& fn, const DomainSpec& domain,
                                     int samples, std::uint64_t seed, double margin = 1e-3);

}  // namespace agler
