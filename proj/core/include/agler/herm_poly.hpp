#pragma once

#include <map>
#include <utility>
#include <vector>

#include "agler/mat_poly.hpp"

namespace agler {

/// Exponent pair (lambda, mu) of the monomial w^lambda z^mu.
struct ExponentPair {
  MultiIndex w;
  MultiIndex z;
  friend bool operator==(const ExponentPair&, const ExponentPair&) = default;
};

struct ExponentPairLess {
  bool operator()(const ExponentPair& a, const ExponentPair& b) const {
    GradedLex lt;
    if (lt(a.w, b.w)) return true;
    if (lt(b.w, a.w)) return false;
    return lt(a.z, b.z);
  }
};

/// Polynomial in (w, z) with square size x size complex coefficients,
/// P(w, z) = sum P_{lambda mu} w^lambda z^mu. No symmetry is assumed.
class BivarPoly {
 public:
  using CoeffMap = std::map<ExponentPair, Matrix, ExponentPairLess>;

  BivarPoly() = default;
  BivarPoly(std::size_t d, Index rows, Index cols);
  BivarPoly(std::size_t d, Index rows, Index cols, CoeffMap coeffs);

  std::size_t d() const { return d_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  Matrix coeff(const MultiIndex& w, const MultiIndex& z) const;
  /// Largest total degree in w or in z; -1 for zero.
  int max_degree() const;

  /// Bitwise check of P_{lambda mu} == P_{mu lambda}^* for every stored pair.
  bool is_hermitian_exact() const;
  /// Largest Frobenius deviation from Hermitian symmetry.
  double hermitian_defect() const;

  BivarPoly& operator+=(const BivarPoly& other);
  BivarPoly& operator-=(const BivarPoly& other);
  friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
  friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }

  /// Largest coefficient Frobenius norm.
  double max_coeff_norm() const;

 private:
  friend class HermPoly;
  friend BivarPoly bivar_outer(const MatPoly& f, const MatPoly& g);
  void normalize();

  std::size_t d_ = 0;
  Index rows_ = 0;
  Index cols_ = 0;
  CoeffMap coeffs_;
};

/// f^*(w) g(z): coefficient (lambda, mu) is f_lambda^* g_mu. When f and g
/// compare equal the mirrored coefficients are written as exact adjoints.
BivarPoly bivar_outer(const MatPoly& f, const MatPoly& g);

/// Hermitian symmetric bivariate polynomial: P_{lambda mu} = P_{mu lambda}^*
/// holds bitwise for every stored coefficient.
class HermPoly {
 public:
  HermPoly() = default;
  /// The zero polynomial of size gamma.
  HermPoly(std::size_t d, Index size);

  /// Validates symmetry within tol * (1 + max coeff norm), then stores the
  /// exact Hermitian part. Throws std::invalid_argument otherwise.
  static HermPoly from_bivar(const BivarPoly& b, double tol = 1e-12);
  /// Constant Hermitian matrix A.
  static HermPoly constant(std::size_t d, const Matrix& a);
  static HermPoly identity(std::size_t d, Index size);
  /// f^*(w) f(z).
  static HermPoly outer(const MatPoly& f);

  std::size_t d() const { return poly_.d(); }
  Index size() const { return poly_.rows(); }
  const BivarPoly::CoeffMap& coeffs() const { return poly_.coeffs(); }
  Matrix coeff(const MultiIndex& w, const MultiIndex& z) const { return poly_.coeff(w, z); }
  const BivarPoly& as_bivar() const { return poly_; }
  int max_degree() const { return poly_.max_degree(); }
  bool is_zero() const { return poly_.coeffs().empty(); }

  HermPoly& operator+=(const HermPoly& other);
  HermPoly& operator-=(const HermPoly& other);
  HermPoly& operator*=(double r);
  friend HermPoly operator+(HermPoly a, const HermPoly& b) { return a += b; }
  friend HermPoly operator-(HermPoly a, const HermPoly& b) { return a -= b; }
  friend HermPoly operator*(HermPoly a, double r) { return a *= r; }
  friend HermPoly operator*(double r, HermPoly a) { return a *= r; }

  /// F^*(w) P(w, z) F(z) for F with size() rows.
  HermPoly congruence(const MatPoly& f) const;
  /// P (x) I_n.
  HermPoly kron_identity(Index n) const;
  /// Block diagonal P (+) Q.
  static HermPoly direct_sum(const HermPoly& p, const HermPoly& q);

  /// P(conj(z), z), a Hermitian size x size matrix.
  Matrix diagonal_value(const Point& z) const;

 private:
  explicit HermPoly(BivarPoly p) : poly_(std::move(p)) {}
  BivarPoly poly_;
};

HermPoly herm_sub(const HermPoly& p, const HermPoly& q);
HermPoly herm_scale(const HermPoly& p, double r);

/// d commuting N x N matrices. Construction fails when some commutator
/// exceeds the tolerance, by default 1e-10 * max ||T_i||^2.
class CommutingTuple {
 public:
  explicit CommutingTuple(std::vector<Matrix> ops, double rel_tol = 1e-10);

  /// Diagonal tuple whose k-th joint eigenvalue is points[k].
  static CommutingTuple diagonal(const std::vector<Point>& points);

  std::size_t d() const { return ops_.size(); }
  Index dim() const { return dim_; }
  const Matrix& operator[](std::size_t i) const { return ops_[i]; }
  const std::vector<Matrix>& ops() const { return ops_; }

  /// T^exp: per-variable powers by repeated squaring, multiplied in
  /// variable order 1..d.
  Matrix power(const MultiIndex& exp) const;

 private:
  std::vector<Matrix> ops_;
  Index dim_ = 0;
};

/// sum P_{lambda mu} (x) T^{*lambda} T^mu, a (rows N) x (cols N) matrix.
Matrix hereditary_eval(const BivarPoly& p, const CommutingTuple& t);
Matrix hereditary_eval(const HermPoly& p, const CommutingTuple& t);

}  // namespace agler
