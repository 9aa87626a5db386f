#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "agler/certificate.hpp"
#include "agler/realization.hpp"

namespace agler {

/// p(z) q(z) = det(I - K P(z)_n).
struct DetRep {
  /// (sum m_i n_i) x (sum l_i n_i).
  Matrix k;
  std::vector<Index> n;
  /// Scalar cofactor, 1 x 1.
  MatPoly q;
  double c = 0.0;
  double identity_residual = 0.0;
  /// Coefficient 2-norm of the division remainder.
  double division_remainder = 0.0;
  /// Coefficient 2-norm of the expanded determinant.
  double det_norm = 0.0;
  double sigma_max = 0.0;
  int degree = 0;
};

struct ScaleResult {
  double c = 0.0;
  Certificate cert;
  /// Upper end of the scale bracket (min |p| over the screen).
  double c_upper = 0.0;
  int probes = 0;
};

struct DetRepOptions {
  CertifyOptions certify;
  double c_tol = 1e-3;
  /// Strong-stability screen density and margin.
  int screen_samples = 256;
  double screen_margin = 1e-6;
  /// |p| at or below this on the screen counts as a zero.
  double zero_threshold = 1e-9;
  /// Allowed remainder relative to the determinant's coefficient norm.
  double remainder_tol = 1e-8;
  int verify_samples = 200;
};

/// Largest c (to within c_tol) such that p^*(w) p(z) - c^2 has a degree-D
/// certificate. Throws ScreenFailure when p has a sampled zero and
/// NotFoundError when no c > 0 works.
ScaleResult find_scale(const MatPoly& p, const DomainSpec& domain, int degree, const DetRepOptions& options = {});

/// Polynomial expansion of det(I - K P(z)_n) by interpolation on a grid of
/// roots of unity sized by the degree bound.
MatPoly expand_det(const Matrix& k, const std::vector<Index>& n, const DomainSpec& domain);

/// Quotient and remainder of scalar polynomials under grlex long division.
std::pair<MatPoly, MatPoly> divide(const MatPoly& num, const MatPoly& den);

/// Coefficient 2-norm of a scalar polynomial.
double coeff_norm(const MatPoly& p);

/// find_scale, realization of c / p, K = A, q = det(I - K P_n) / p.
DetRep extract_detrep(const MatPoly& p, const DomainSpec& domain, const DetRepOptions& options = {});

struct DetRepReport {
  int samples = 0;
  double max_residual = 0.0;
  double sigma_max = 0.0;
  std::uint64_t seed = 0;
};

/// max |p q - det(I - K P_n)| / (1 + |p q|) over interior samples.
DetRepReport verify_detrep(const DetRep& rep, const MatPoly& p, const DomainSpec& domain, int samples,
                           std::uint64_t seed);

struct StabilityReport {
  /// (margin, min |q|) pairs.
  std::vector<std::pair<double, double>> min_by_margin;
  double min_modulus = 0.0;
  /// Set when some |q| <= 1e-9.
  bool flagged = false;
};

/// min |q| over interior samples at margins 1e-1, 1e-2, 1e-3.
StabilityReport stability_scan(const MatPoly& q, const DomainSpec& domain, int samples, std::uint64_t seed);

}  // namespace agler
