#pragma once

#include <string>
#include <variant>
#include <vector>

#include "agler/types.hpp"

namespace agler::sdp {

/// coeff * X_block[row, col]; X_block is Hermitian so X[col, row] is the
/// conjugate of X[row, col].
struct Term {
  int block = 0;
  Index row = 0;
  Index col = 0;
  Complex coeff{1.0, 0.0};
};

/// sum of terms == rhs, read as two real equations (real and imaginary part).
struct Constraint {
  std::vector<Term> terms;
  Complex rhs{0.0, 0.0};
};

/// Find Hermitian X_1, ..., X_k with X_j >= 0 satisfying every constraint;
/// with maximize_slack the smallest eigenvalue over all blocks is pushed up.
struct PsdFeasibilityProblem {
  std::vector<Index> block_sizes;
  std::vector<Constraint> constraints;
  bool maximize_slack = true;

  /// Throws ShapeMismatch when a term addresses a missing block or entry.
  void validate() const;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 50000;
  /// Bisection probes spent on the slack objective.
  int slack_bisection_steps = 20;
  /// Iteration budget of a single slack probe.
  int probe_max_iter = 5000;
  /// A window is stalled when the splitting gap changes by less than
  /// stall_rel_change (relative) over this many iterations.
  int stall_window = 500;
  double stall_rel_change = 1e-5;
  /// Consecutive stalled windows required. Feasible problems near the
  /// boundary of feasibility show long plateaus before converging.
  int stall_windows = 4;
  /// Eliminate diagonal entries forced to zero by the constraints.
  bool facial_reduction = true;
};

struct PsdSolution {
  std::vector<Matrix> blocks;
  /// Smallest eigenvalue over all blocks.
  double slack = 0.0;
  /// Largest constraint violation |sum - rhs|.
  double residual = 0.0;
  int iterations = 0;
  /// Splitting gap sampled every 100 iterations.
  std::vector<double> gap_trace;
};

/// Infeasible at the working precision. Never a claim of mathematical
/// nonexistence beyond the stated reason.
struct Infeasible {
  std::string reason;
  double distance = 0.0;
  int iterations = 0;
};

struct IterationBudgetExceeded {
  double gap = 0.0;
  int iterations = 0;
};

using SolveResult = std::variant<PsdSolution, Infeasible, IterationBudgetExceeded>;

/// Douglas-Rachford splitting between the affine constraint set (projected
/// through a factorization of the constraint Gram matrix) and the product of
/// PSD cones (eigenvalue clipping). Deterministic: no random state.
SolveResult solve_psd_feasibility(const PsdFeasibilityProblem& problem,
                                  const SolverOptions& options = {});

/// [[Re H, -Im H], [Im H, Re H]]. Throws std::invalid_argument when H is not
/// Hermitian within 1e-12 * (1 + ||H||).
RealMatrix embed_complex(const Matrix& h);
/// Inverse of embed_complex; reads the left column blocks.
Matrix unembed_complex(const RealMatrix& e);

struct PsdFactor {
  /// r x n with factor^* factor ~ W.
  Matrix factor;
  Index rank = 0;
};

/// Factor a PSD matrix through its eigendecomposition, keeping eigenvalues
/// above rank_tol * lambda_max. Throws NumericalError when W has an
/// eigenvalue below -rank_tol * max(1, lambda_max).
PsdFactor psd_factor(const Matrix& w, double rank_tol = 1e-9);

}  // namespace agler::sdp
