#include "agler/herm_poly.hpp"

#include <algorithm>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace agler {

namespace {

constexpr double kDrop = MatPoly::kDropTolerance;

// Canonical representative of the pair {(l, m), (m, l)}.
bool is_canonical(const ExponentPair& k) { return !GradedLex{}(k.z, k.w); }

// Exact Hermitian part: (P + P^*) / 2 written so that mirrored coefficients
// are bitwise adjoints, with small coefficients dropped pairwise.
BivarPoly::CoeffMap exact_hermitian_part(const BivarPoly::CoeffMap& in) {
  BivarPoly::CoeffMap canon;
  double max_norm = 0.0;
  for (const auto& [key, c] : in) {
    const ExponentPair mirror{key.z, key.w};
    if (key == mirror) {
      Matrix h = (c + c.adjoint()) / 2.0;
      max_norm = std::max(max_norm, h.norm());
      canon.emplace(key, std::move(h));
      continue;
    }
    if (!is_canonical(key)) {
      if (in.count(mirror)) continue;  // handled with its canonical partner
      Matrix h = c.adjoint() / 2.0;
      max_norm = std::max(max_norm, h.norm());
      canon.emplace(mirror, std::move(h));
      continue;
    }
    auto it = in.find(mirror);
    Matrix h = it == in.end() ? Matrix(c / 2.0) : Matrix((c + it->second.adjoint()) / 2.0);
    max_norm = std::max(max_norm, h.norm());
    canon.emplace(key, std::move(h));
  }
  BivarPoly::CoeffMap out;
  const double cut = kDrop * max_norm;
  for (auto& [key, h] : canon) {
    if (h.size() == 0 || h.norm() <= cut) continue;
    const ExponentPair mirror{key.z, key.w};
    if (!(key == mirror)) out.emplace(mirror, h.adjoint());
    out.emplace(key, std::move(h));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- BivarPoly

BivarPoly::BivarPoly(std::size_t d, Index rows, Index cols) : d_(d), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw ShapeMismatch("BivarPoly: negative shape");
}

BivarPoly::BivarPoly(std::size_t d, Index rows, Index cols, CoeffMap coeffs)
    : BivarPoly(d, rows, cols) {
  for (const auto& [key, c] : coeffs) {
    if (key.w.size() != d || key.z.size() != d) {
      throw DimensionMismatch("BivarPoly: exponent pair (" + key.w.to_string() + ", " +
                              key.z.to_string() + ") does not have length " + std::to_string(d));
    }
    if (c.rows() != rows || c.cols() != cols) throw ShapeMismatch("BivarPoly: coefficient shape mismatch");
  }
  coeffs_ = std::move(coeffs);
  normalize();
}

void BivarPoly::normalize() {
  const double cut = kDrop * max_coeff_norm();
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->second.size() == 0 || it->second.norm() <= cut) {
      it = coeffs_.erase(it);
    } else {
      ++it;
    }
  }
}

Matrix BivarPoly::coeff(const MultiIndex& w, const MultiIndex& z) const {
  auto it = coeffs_.find(ExponentPair{w, z});
  if (it == coeffs_.end()) return Matrix::Zero(rows_, cols_);
  return it->second;
}

int BivarPoly::max_degree() const {
  int deg = -1;
  for (const auto& [key, c] : coeffs_) {
    deg = std::max({deg, key.w.total_degree(), key.z.total_degree()});
  }
  return deg;
}

double BivarPoly::max_coeff_norm() const {
  double m = 0.0;
  for (const auto& [key, c] : coeffs_) m = std::max(m, c.norm());
  return m;
}

bool BivarPoly::is_hermitian_exact() const {
  if (rows_ != cols_) return false;
  for (const auto& [key, c] : coeffs_) {
    auto it = coeffs_.find(ExponentPair{key.z, key.w});
    if (it == coeffs_.end()) return false;
    if (it->second != c.adjoint()) return false;
  }
  return true;
}

double BivarPoly::hermitian_defect() const {
  double worst = 0.0;
  for (const auto& [key, c] : coeffs_) {
    auto it = coeffs_.find(ExponentPair{key.z, key.w});
    const double dev = it == coeffs_.end() ? c.norm() : (it->second - c.adjoint()).norm();
    worst = std::max(worst, dev);
  }
  return worst;
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& other) {
  if (other.d_ != d_) throw DimensionMismatch("BivarPoly +: variable count mismatch");
  if (other.rows_ != rows_ || other.cols_ != cols_) throw ShapeMismatch("BivarPoly +: shape mismatch");
  for (const auto& [key, c] : other.coeffs_) {
    auto [it, inserted] = coeffs_.try_emplace(key, c);
    if (!inserted) it->second += c;
  }
  normalize();
  return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& other) {
  if (other.d_ != d_) throw DimensionMismatch("BivarPoly -: variable count mismatch");
  if (other.rows_ != rows_ || other.cols_ != cols_) throw ShapeMismatch("BivarPoly -: shape mismatch");
  for (const auto& [key, c] : other.coeffs_) {
    auto [it, inserted] = coeffs_.try_emplace(key, -c);
    if (!inserted) it->second -= c;
  }
  normalize();
  return *this;
}

BivarPoly bivar_outer(const MatPoly& f, const MatPoly& g) {
  if (f.d() != g.d()) throw DimensionMismatch("bivar_outer: variable count mismatch");
  if (f.rows() != g.rows() || f.cols() != g.cols()) throw ShapeMismatch("bivar_outer: shape mismatch");
  const bool same = (&f == &g) || f == g;
  BivarPoly::CoeffMap out;
  for (const auto& [lw, fl] : f.coeffs()) {
    for (const auto& [mz, gm] : g.coeffs()) {
      ExponentPair key{lw, mz};
      if (same && GradedLex{}(mz, lw)) continue;  // mirrored below
      Matrix c = fl.adjoint() * gm;
      if (same) {
        if (lw == mz) {
          c = ((c + c.adjoint()) / 2.0).eval();
        } else {
          out.emplace(ExponentPair{mz, lw}, c.adjoint());
        }
      }
      out.emplace(std::move(key), std::move(c));
    }
  }
  BivarPoly result(f.d(), f.cols(), g.cols());
  result.coeffs_ = std::move(out);
  if (same) {
    result.coeffs_ = exact_hermitian_part(result.coeffs_);
  } else {
    result.normalize();
  }
  return result;
}

// ----------------------------------------------------------------- HermPoly

HermPoly::HermPoly(std::size_t d, Index size) : poly_(d, size, size) {}

HermPoly HermPoly::from_bivar(const BivarPoly& b, double tol) {
  if (b.rows() != b.cols()) throw ShapeMismatch("HermPoly: coefficients must be square");
  const double defect = b.hermitian_defect();
  if (defect > tol * (1.0 + b.max_coeff_norm())) {
    throw std::invalid_argument("HermPoly: coefficients are not Hermitian symmetric (defect " +
                                std::to_string(defect) + ")");
  }
  BivarPoly p(b.d(), b.rows(), b.cols());
  p.coeffs_ = exact_hermitian_part(b.coeffs());
  return HermPoly(std::move(p));
}

HermPoly HermPoly::constant(std::size_t d, const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("HermPoly::constant: matrix must be square");
  BivarPoly::CoeffMap m;
  m.emplace(ExponentPair{MultiIndex(d), MultiIndex(d)}, a);
  return from_bivar(BivarPoly(d, a.rows(), a.cols(), std::move(m)));
}

HermPoly HermPoly::identity(std::size_t d, Index size) {
  return constant(d, Matrix::Identity(size, size));
}

HermPoly HermPoly::outer(const MatPoly& f) { return HermPoly(bivar_outer(f, f)); }

HermPoly& HermPoly::operator+=(const HermPoly& other) {
  poly_ += other.poly_;
  poly_.coeffs_ = exact_hermitian_part(poly_.coeffs_);
  return *this;
}

HermPoly& HermPoly::operator-=(const HermPoly& other) {
  poly_ -= other.poly_;
  poly_.coeffs_ = exact_hermitian_part(poly_.coeffs_);
  return *this;
}

HermPoly& HermPoly::operator*=(double r) {
  for (auto& [key, c] : poly_.coeffs_) c *= r;
  poly_.coeffs_ = exact_hermitian_part(poly_.coeffs_);
  return *this;
}

HermPoly HermPoly::congruence(const MatPoly& f) const {
  if (f.d() != d()) throw DimensionMismatch("HermPoly::congruence: variable count mismatch");
  if (f.rows() != size()) throw ShapeMismatch("HermPoly::congruence: F must have size() rows");
  BivarPoly::CoeffMap out;
  for (const auto& [key, c] : coeffs()) {
    for (const auto& [ea, fa] : f.coeffs()) {
      const Matrix left = fa.adjoint() * c;
      for (const auto& [eb, fb] : f.coeffs()) {
        Matrix prod = left * fb;
        auto [it, inserted] = out.try_emplace(ExponentPair{ea + key.w, key.z + eb}, prod);
        if (!inserted) it->second += prod;
      }
    }
  }
  BivarPoly p(d(), f.cols(), f.cols());
  p.coeffs_ = exact_hermitian_part(out);
  return HermPoly(std::move(p));
}

HermPoly HermPoly::kron_identity(Index n) const {
  BivarPoly::CoeffMap out;
  const Matrix eye = Matrix::Identity(n, n);
  for (const auto& [key, c] : coeffs()) out.emplace(key, Eigen::kroneckerProduct(c, eye).eval());
  BivarPoly p(d(), size() * n, size() * n);
  p.coeffs_ = exact_hermitian_part(out);
  return HermPoly(std::move(p));
}

HermPoly HermPoly::direct_sum(const HermPoly& a, const HermPoly& b) {
  if (a.d() != b.d()) throw DimensionMismatch("HermPoly::direct_sum: variable count mismatch");
  const Index n = a.size() + b.size();
  BivarPoly::CoeffMap out;
  for (const auto& [key, c] : a.coeffs()) {
    auto [it, ins] = out.try_emplace(key, Matrix::Zero(n, n));
    it->second.topLeftCorner(a.size(), a.size()) = c;
  }
  for (const auto& [key, c] : b.coeffs()) {
    auto [it, ins] = out.try_emplace(key, Matrix::Zero(n, n));
    it->second.bottomRightCorner(b.size(), b.size()) = c;
  }
  BivarPoly p(a.d(), n, n);
  p.coeffs_ = exact_hermitian_part(out);
  return HermPoly(std::move(p));
}

Matrix HermPoly::diagonal_value(const Point& z) const {
  if (static_cast<std::size_t>(z.size()) != d()) throw DimensionMismatch("HermPoly: point dimension mismatch");
  Matrix out = Matrix::Zero(size(), size());
  for (const auto& [key, c] : coeffs()) {
    out += std::conj(monomial_value(key.w, z)) * monomial_value(key.z, z) * c;
  }
  return (out + out.adjoint()) / 2.0;
}

HermPoly herm_sub(const HermPoly& p, const HermPoly& q) {
  if (p.d() != q.d()) throw DimensionMismatch("herm_sub: variable count mismatch");
  if (p.size() != q.size()) throw ShapeMismatch("herm_sub: size mismatch");
  return p - q;
}

HermPoly herm_scale(const HermPoly& p, double r) { return p * r; }

// ----------------------------------------------------------- CommutingTuple

CommutingTuple::CommutingTuple(std::vector<Matrix> ops, double rel_tol) : ops_(std::move(ops)) {
  if (ops_.empty()) throw DimensionMismatch("CommutingTuple: empty tuple");
  dim_ = ops_[0].rows();
  double max_norm = 0.0;
  for (const auto& t : ops_) {
    if (t.rows() != dim_ || t.cols() != dim_) throw ShapeMismatch("CommutingTuple: operators must be N x N");
    max_norm = std::max(max_norm, spectral_norm(t));
  }
  const double tol = rel_tol * std::max(max_norm * max_norm, 1e-300);
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    for (std::size_t j = i + 1; j < ops_.size(); ++j) {
      const double c = spectral_norm(ops_[i] * ops_[j] - ops_[j] * ops_[i]);
      if (c > tol) {
        throw CommutationViolation("CommutingTuple: ||[T_" + std::to_string(i + 1) + ", T_" +
                                   std::to_string(j + 1) + "]|| = " + std::to_string(c));
      }
    }
  }
}

CommutingTuple CommutingTuple::diagonal(const std::vector<Point>& points) {
  if (points.empty()) throw DimensionMismatch("CommutingTuple::diagonal: no points");
  const Index d = points[0].size();
  const Index n = static_cast<Index>(points.size());
  std::vector<Matrix> ops(static_cast<std::size_t>(d), Matrix::Zero(n, n));
  for (Index k = 0; k < n; ++k) {
    if (points[static_cast<std::size_t>(k)].size() != d) throw DimensionMismatch("CommutingTuple::diagonal: ragged points");
    for (Index i = 0; i < d; ++i) ops[static_cast<std::size_t>(i)](k, k) = points[static_cast<std::size_t>(k)](i);
  }
  return CommutingTuple(std::move(ops));
}

namespace {

Matrix matrix_power(const Matrix& t, int e) {
  Matrix result = Matrix::Identity(t.rows(), t.cols());
  Matrix base = t;
  while (e > 0) {
    if (e & 1) result = (result * base).eval();
    e >>= 1;
    if (e > 0) base = (base * base).eval();
  }
  return result;
}

}  // namespace

Matrix CommutingTuple::power(const MultiIndex& exp) const {
  if (exp.size() != ops_.size()) throw DimensionMismatch("CommutingTuple::power: exponent length mismatch");
  Matrix out = Matrix::Identity(dim_, dim_);
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (exp[i] > 0) out = (out * matrix_power(ops_[i], exp[i])).eval();
  }
  return out;
}

Matrix hereditary_eval(const BivarPoly& p, const CommutingTuple& t) {
  if (t.d() != p.d()) {
    throw DimensionMismatch("hereditary_eval: tuple has " + std::to_string(t.d()) +
                            " operators, polynomial has " + std::to_string(p.d()) + " variables");
  }
  const Index n = t.dim();
  std::map<MultiIndex, Matrix, GradedLex> powers;
  auto pw = [&](const MultiIndex& e) -> const Matrix& {
    auto it = powers.find(e);
    if (it == powers.end()) it = powers.emplace(e, t.power(e)).first;
    return it->second;
  };
  Matrix out = Matrix::Zero(p.rows() * n, p.cols() * n);
  for (const auto& [key, c] : p.coeffs()) {
    const Matrix m = pw(key.w).adjoint() * pw(key.z);
    out += Eigen::kroneckerProduct(c, m).eval();
  }
  return out;
}

Matrix hereditary_eval(const HermPoly& p, const CommutingTuple& t) {
  Matrix out = hereditary_eval(p.as_bivar(), t);
  return (out + out.adjoint()) / 2.0;
}

}  // namespace agler
