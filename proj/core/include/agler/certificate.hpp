#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agler/domains.hpp"
#include "agler/herm_poly.hpp"
#include "agler/sdp.hpp"

namespace agler {

/// Gram formulation of
///   target = H_0^*(w) H_0(z) + sum_j H_j^*(w) (P_j(w, z) (x) I_{n_j}) H_j(z)
/// with H_j of degree <= D. G_0 is indexed by (lambda in basis, p < gamma)
/// at row a * gamma + p; W_j by (r < gamma_j, lambda, p) at row
/// (r * |basis| + a) * gamma + p.
struct GramProblem {
  HermPoly target;
  std::vector<HermPoly> defects;
  int degree = 0;
  /// Shared basis B_0 = B_j: all monomials of degree <= D, ascending grlex.
  std::vector<MultiIndex> basis;
  /// Exponents up to this total degree are matched.
  int window = 0;
  /// Set when the target has support outside the window.
  bool structurally_infeasible = false;
  std::string infeasibility_reason;
  /// Blocks: G_0 first, then W_1..W_k.
  sdp::PsdFeasibilityProblem sdp;
};

GramProblem build_gram_problem(const HermPoly& target, const std::vector<HermPoly>& defects, int degree);

struct Certificate {
  std::size_t d = 0;
  /// Size of the certified target.
  Index gamma = 0;
  int degree = 0;
  /// n_0 x gamma.
  MatPoly h0;
  /// (gamma_j n_j) x gamma, one per defect.
  std::vector<MatPoly> h;
  Index n0 = 0;
  std::vector<Index> n;
  /// certificate_residual at acceptance.
  double residual = 0.0;
  double slack = 0.0;
  int solver_iterations = 0;
};

struct DegreeAttempt {
  int degree = 0;
  /// "structurally-infeasible", "infeasible", "iteration-budget", "residual".
  std::string status;
  std::string detail;
  double measure = 0.0;
  int iterations = 0;
};

struct NotFoundUpToDegree {
  int highest_degree = -1;
  std::vector<DegreeAttempt> attempts;
  /// Set by the necessity screen: a point with target(conj z, z) not PSD.
  std::optional<Point> witness;
  double witness_eigenvalue = 0.0;
  std::string reason;
};

using CertifyResult = std::variant<Certificate, NotFoundUpToDegree>;

struct CertifyOptions {
  /// -1 selects the smallest degree whose window covers the target.
  int d_min = -1;
  int d_max = 4;
  double tol = 1e-8;
  double rank_tol = 1e-9;
  /// Random interior points for the necessity screen, on top of the origin.
  int screen_samples = 64;
  double screen_margin = 1e-6;
  std::uint64_t seed = 0;
  /// The solver tolerance is tol * solver_tol_factor.
  double solver_tol_factor = 0.1;
  sdp::SolverOptions solver;
};

/// Degree escalation D = d_min..d_max of the Gram feasibility problem,
/// preceded by the necessity screen.
CertifyResult certify(const HermPoly& target, const DomainSpec& domain, const CertifyOptions& options = {});

/// Certificate from a feasible Gram solution.
Certificate extract_certificate(const GramProblem& problem, const sdp::PsdSolution& solution, double rank_tol);

/// H_0^* H_0 + sum_j H_j^* (P_j (x) I_{n_j}) H_j.
HermPoly reconstruct(const Certificate& cert, const std::vector<HermPoly>& defects);

/// Largest Frobenius norm of target minus reconstruction, coefficientwise.
double certificate_residual(const HermPoly& target, const Certificate& cert, const DomainSpec& domain);
double certificate_residual(const HermPoly& target, const Certificate& cert, const std::vector<HermPoly>& defects);

struct SpotCheckReport {
  int trials = 0;
  /// max ||target(T^*, T) - rhs(T^*, T)||.
  double max_mismatch = 0.0;
  double min_target_eigenvalue = 0.0;
  double min_defect_eigenvalue = 0.0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Random commuting diagonal tuples with joint eigenvalues inside the domain.
SpotCheckReport hereditary_spot_check(const HermPoly& target, const Certificate& cert, const DomainSpec& domain,
                                      int trials, int matrix_size, std::uint64_t seed, double tol = 1e-8);

struct ArchimedeanReport {
  std::vector<double> radius;
  std::vector<std::optional<Certificate>> certificates;
  /// -1 when nothing was found for the variable.
  std::vector<int> feasible_degree;
  bool approximation_hypothesis_checked = false;
  bool all_found() const;
};

/// Smallest r <= r_max, to within radius_tol, such that r^2 - w_i z_i has a
/// certificate of degree <= max_degree, for each variable i.
ArchimedeanReport archimedean_check(const DomainSpec& spec, int max_degree, double r_max,
                                    double radius_tol = 1e-3, const CertifyOptions& options = {});

/// Copy of spec with bounds set from the Archimedean radii. Throws
/// std::invalid_argument when some radius is not found.
DomainSpec with_archimedean_bounds(const DomainSpec& spec, int max_degree, double r_max);

}  // namespace agler
