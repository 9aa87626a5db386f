#pragma once

#include <map>
#include <span>
#include <vector>

#include "agler/multi_index.hpp"
#include "agler/types.hpp"

namespace agler {

/// Multivariate polynomial in z = (z_1, ..., z_d) with complex rows x cols
/// matrix coefficients. Coefficients with Frobenius norm at most
/// kDropTolerance times the largest coefficient norm are not stored.
///
/// Zero-sized shapes are permitted; they stand for the void summands that
/// appear when a multiplicity is zero.
class MatPoly {
 public:
  using CoeffMap = std::map<MultiIndex, Matrix, GradedLex>;

  static constexpr double kDropTolerance = 1e-14;

  MatPoly() = default;
  /// The zero polynomial of the given shape.
  MatPoly(std::size_t d, Index rows, Index cols);
  MatPoly(std::size_t d, Index rows, Index cols, CoeffMap coeffs);

  static MatPoly constant(std::size_t d, const Matrix& c);
  static MatPoly identity(std::size_t d, Index n);
  static MatPoly monomial(std::size_t d, const MultiIndex& exp, const Matrix& c);
  /// The scalar polynomial z_i.
  static MatPoly variable(std::size_t d, std::size_t i);

  std::size_t d() const { return d_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const CoeffMap& coeffs() const { return coeffs_; }

  /// Coefficient at exp, zero when absent.
  Matrix coeff(const MultiIndex& exp) const;
  bool is_zero() const { return coeffs_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  int degree_in(std::size_t var) const;
  std::vector<MultiIndex> support() const;

  /// Sum over mu of p_mu z^mu.
  Matrix operator()(const Point& z) const;

  MatPoly& operator+=(const MatPoly& other);
  MatPoly& operator-=(const MatPoly& other);
  MatPoly& operator*=(Complex s);

  friend MatPoly operator+(MatPoly a, const MatPoly& b) { return a += b; }
  friend MatPoly operator-(MatPoly a, const MatPoly& b) { return a -= b; }
  friend MatPoly operator*(MatPoly a, Complex s) { return a *= s; }
  friend MatPoly operator*(Complex s, MatPoly a) { return a *= s; }
  /// Matrix product of polynomials.
  friend MatPoly operator*(const MatPoly& a, const MatPoly& b);

  /// Kronecker product with the identity, p(z) (x) I_n.
  MatPoly kron_identity(Index n) const;

  /// Exact equality of shapes and stored coefficients.
  friend bool operator==(const MatPoly& a, const MatPoly& b);

  /// Rows stacked top to bottom; all parts share d and cols.
  static MatPoly vstack(std::span<const MatPoly> parts);
  /// Block diagonal direct sum.
  static MatPoly direct_sum(std::span<const MatPoly> parts);

 private:
  void normalize();

  std::size_t d_ = 0;
  Index rows_ = 0;
  Index cols_ = 0;
  CoeffMap coeffs_;
};

/// Evaluates p at z; throws DimensionMismatch when z.size() != p.d().
Matrix eval_matpoly(const MatPoly& p, const Point& z);

/// Value of the monomial z^exp.
Complex monomial_value(const MultiIndex& exp, const Point& z);

enum class CoeffLayout {
  /// Coefficients stacked vertically in basis order: (|basis| rows) x cols.
  kStacked,
  /// Coefficients placed side by side: rows x (|basis| cols). Its column
  /// space is span{ f(z) y : z, y }.
  kSideBySide,
};

/// Coefficient matrix of f over an explicit monomial basis. Throws
/// std::invalid_argument when the basis misses a support monomial of f.
Matrix coeff_matrix(const MatPoly& f, std::span<const MultiIndex> basis,
                    CoeffLayout layout = CoeffLayout::kStacked);

/// Union of supports, ascending grlex.
std::vector<MultiIndex> joint_support(std::span<const MatPoly> polys);

}  // namespace agler
