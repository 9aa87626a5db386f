#include "agler/mat_poly.hpp"

#include <algorithm>
#include <set>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace agler {

MatPoly::MatPoly(std::size_t d, Index rows, Index cols) : d_(d), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw ShapeMismatch("MatPoly: negative shape");
}

MatPoly::MatPoly(std::size_t d, Index rows, Index cols, CoeffMap coeffs)
    : MatPoly(d, rows, cols) {
  for (const auto& [exp, c] : coeffs) {
    if (exp.size() != d) {
      throw DimensionMismatch("MatPoly: exponent " + exp.to_string() + " has length " +
                              std::to_string(exp.size()) + ", expected " + std::to_string(d));
    }
    if (c.rows() != rows || c.cols() != cols) {
      throw ShapeMismatch("MatPoly: coefficient at " + exp.to_string() + " is " +
                          std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                          ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  coeffs_ = std::move(coeffs);
  normalize();
}

MatPoly MatPoly::constant(std::size_t d, const Matrix& c) {
  return monomial(d, MultiIndex(d), c);
}

MatPoly MatPoly::identity(std::size_t d, Index n) {
  return constant(d, Matrix::Identity(n, n));
}

MatPoly MatPoly::monomial(std::size_t d, const MultiIndex& exp, const Matrix& c) {
  CoeffMap m;
  m.emplace(exp, c);
  return MatPoly(d, c.rows(), c.cols(), std::move(m));
}

MatPoly MatPoly::variable(std::size_t d, std::size_t i) {
  return monomial(d, MultiIndex::unit(d, i), Matrix::Ones(1, 1));
}

void MatPoly::normalize() {
  double max_norm = 0.0;
  for (const auto& [exp, c] : coeffs_) max_norm = std::max(max_norm, c.norm());
  const double cut = kDropTolerance * max_norm;
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->second.size() == 0 || it->second.norm() <= cut) {
      it = coeffs_.erase(it);
    } else {
      ++it;
    }
  }
}

Matrix MatPoly::coeff(const MultiIndex& exp) const {
  auto it = coeffs_.find(exp);
  if (it == coeffs_.end()) return Matrix::Zero(rows_, cols_);
  return it->second;
}

int MatPoly::degree() const {
  if (coeffs_.empty()) return -1;
  return coeffs_.rbegin()->first.total_degree();
}

int MatPoly::degree_in(std::size_t var) const {
  int deg = coeffs_.empty() ? -1 : 0;
  for (const auto& [exp, c] : coeffs_) deg = std::max(deg, exp[var]);
  return deg;
}

std::vector<MultiIndex> MatPoly::support() const {
  std::vector<MultiIndex> s;
  s.reserve(coeffs_.size());
  for (const auto& [exp, c] : coeffs_) s.push_back(exp);
  return s;
}

Complex monomial_value(const MultiIndex& exp, const Point& z) {
  Complex v(1.0, 0.0);
  for (std::size_t i = 0; i < exp.size(); ++i) {
    for (int k = 0; k < exp[i]; ++k) v *= z(static_cast<Index>(i));
  }
  return v;
}

Matrix MatPoly::operator()(const Point& z) const {
  if (static_cast<std::size_t>(z.size()) != d_) {
    throw DimensionMismatch("MatPoly: point has dimension " + std::to_string(z.size()) +
                            ", expected " + std::to_string(d_));
  }
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const auto& [exp, c] : coeffs_) out += monomial_value(exp, z) * c;
  return out;
}

Matrix eval_matpoly(const MatPoly& p, const Point& z) { return p(z); }

MatPoly& MatPoly::operator+=(const MatPoly& other) {
  if (other.d_ != d_) throw DimensionMismatch("MatPoly +: variable count mismatch");
  if (other.rows_ != rows_ || other.cols_ != cols_) throw ShapeMismatch("MatPoly +: shape mismatch");
  for (const auto& [exp, c] : other.coeffs_) {
    auto [it, inserted] = coeffs_.try_emplace(exp, c);
    if (!inserted) it->second += c;
  }
  normalize();
  return *this;
}

MatPoly& MatPoly::operator-=(const MatPoly& other) {
  if (other.d_ != d_) throw DimensionMismatch("MatPoly -: variable count mismatch");
  if (other.rows_ != rows_ || other.cols_ != cols_) throw ShapeMismatch("MatPoly -: shape mismatch");
  for (const auto& [exp, c] : other.coeffs_) {
    auto [it, inserted] = coeffs_.try_emplace(exp, -c);
    if (!inserted) it->second -= c;
  }
  normalize();
  return *this;
}

MatPoly& MatPoly::operator*=(Complex s) {
  for (auto& [exp, c] : coeffs_) c *= s;
  normalize();
  return *this;
}

MatPoly operator*(const MatPoly& a, const MatPoly& b) {
  if (a.d_ != b.d_) throw DimensionMismatch("MatPoly *: variable count mismatch");
  if (a.cols_ != b.rows_) throw ShapeMismatch("MatPoly *: inner dimensions differ");
  MatPoly::CoeffMap out;
  for (const auto& [ea, ca] : a.coeffs_) {
    for (const auto& [eb, cb] : b.coeffs_) {
      Matrix prod = ca * cb;
      auto [it, inserted] = out.try_emplace(ea + eb, prod);
      if (!inserted) it->second += prod;
    }
  }
  return MatPoly(a.d_, a.rows_, b.cols_, std::move(out));
}

MatPoly MatPoly::kron_identity(Index n) const {
  CoeffMap out;
  const Matrix eye = Matrix::Identity(n, n);
  for (const auto& [exp, c] : coeffs_) {
    out.emplace(exp, Eigen::kroneckerProduct(c, eye).eval());
  }
  return MatPoly(d_, rows_ * n, cols_ * n, std::move(out));
}

bool operator==(const MatPoly& a, const MatPoly& b) {
  if (a.d_ != b.d_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  if (a.coeffs_.size() != b.coeffs_.size()) return false;
  auto ia = a.coeffs_.begin();
  for (auto ib = b.coeffs_.begin(); ib != b.coeffs_.end(); ++ia, ++ib) {
    if (!(ia->first == ib->first) || ia->second != ib->second) return false;
  }
  return true;
}

MatPoly MatPoly::vstack(std::span<const MatPoly> parts) {
  if (parts.empty()) throw std::invalid_argument("MatPoly::vstack: no parts");
  const std::size_t d = parts[0].d_;
  const Index cols = parts[0].cols_;
  Index rows = 0;
  for (const auto& p : parts) {
    if (p.d_ != d) throw DimensionMismatch("MatPoly::vstack: variable count mismatch");
    if (p.cols_ != cols) throw ShapeMismatch("MatPoly::vstack: column count mismatch");
    rows += p.rows_;
  }
  CoeffMap out;
  Index offset = 0;
  for (const auto& p : parts) {
    for (const auto& [exp, c] : p.coeffs_) {
      auto [it, inserted] = out.try_emplace(exp, Matrix::Zero(rows, cols));
      it->second.middleRows(offset, p.rows_) = c;
    }
    offset += p.rows_;
  }
  return MatPoly(d, rows, cols, std::move(out));
}

MatPoly MatPoly::direct_sum(std::span<const MatPoly> parts) {
  if (parts.empty()) throw std::invalid_argument("MatPoly::direct_sum: no parts");
  const std::size_t d = parts[0].d_;
  Index rows = 0;
  Index cols = 0;
  for (const auto& p : parts) {
    if (p.d_ != d) throw DimensionMismatch("MatPoly::direct_sum: variable count mismatch");
    rows += p.rows_;
    cols += p.cols_;
  }
  CoeffMap out;
  Index r0 = 0;
  Index c0 = 0;
  for (const auto& p : parts) {
    for (const auto& [exp, c] : p.coeffs_) {
      auto [it, inserted] = out.try_emplace(exp, Matrix::Zero(rows, cols));
      it->second.block(r0, c0, p.rows_, p.cols_) = c;
    }
    r0 += p.rows_;
    c0 += p.cols_;
  }
  return MatPoly(d, rows, cols, std::move(out));
}

Matrix coeff_matrix(const MatPoly& f, std::span<const MultiIndex> basis, CoeffLayout layout) {
  for (const auto& [exp, c] : f.coeffs()) {
    if (std::find(basis.begin(), basis.end(), exp) == basis.end()) {
      throw std::invalid_argument("coeff_matrix: basis misses support monomial " + exp.to_string());
    }
  }
  const Index k = static_cast<Index>(basis.size());
  const bool stacked = layout == CoeffLayout::kStacked;
  Matrix out = stacked ? Matrix::Zero(k * f.rows(), f.cols()) : Matrix::Zero(f.rows(), k * f.cols());
  for (Index i = 0; i < k; ++i) {
    auto it = f.coeffs().find(basis[static_cast<std::size_t>(i)]);
    if (it == f.coeffs().end()) continue;
    if (stacked) {
      out.middleRows(i * f.rows(), f.rows()) = it->second;
    } else {
      out.middleCols(i * f.cols(), f.cols()) = it->second;
    }
  }
  return out;
}

std::vector<MultiIndex> joint_support(std::span<const MatPoly> polys) {
  std::set<MultiIndex, GradedLex> s;
  for (const auto& p : polys) {
    for (const auto& [exp, c] : p.coeffs()) s.insert(exp);
  }
  return {s.begin(), s.end()};
}

}  // namespace agler
