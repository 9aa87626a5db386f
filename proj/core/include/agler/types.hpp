#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace agler {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A point of C^d.
using Point = Eigen::VectorXcd;

// Error hierarchy. Contract violations on inputs derive from
// std::invalid_argument, numerical failures from std::runtime_error.

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CommutationViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest singular value; zero for empty matrices.
double spectral_norm(const Matrix& m);

/// Smallest eigenvalue of a Hermitian matrix; +inf for empty matrices.
double min_eigenvalue(const Matrix& h);

/// Numerical rank: singular values above rel_tol * sigma_max.
Index numerical_rank(const Matrix& m, double rel_tol);

}  // namespace agler
