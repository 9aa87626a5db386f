#include "agler/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

namespace agler {

namespace {

using ConstraintKey = std::tuple<Index, Index, Index, Index>;

class ConstraintTable {
 public:
  explicit ConstraintTable(std::map<MultiIndex, Index, GradedLex> index) : index_(std::move(index)) {}

  bool contains(const MultiIndex& m) const { return index_.count(m) > 0; }

  // Equation for entry (p, q) of the (lambda, mu) coefficient. Only one of
  // each conjugate pair of equations is kept; the other is its adjoint.
  void add_term(const MultiIndex& lambda, const MultiIndex& mu, Index p, Index q, int block, Index row, Index col,
                Complex c) {
    const Index il = index_.at(lambda);
    const Index im = index_.at(mu);
    if (il < im || (il == im && p <= q)) table_[{il, im, p, q}].terms.push_back(sdp::Term{block, row, col, c});
  }

  void set_rhs(const MultiIndex& lambda, const MultiIndex& mu, Index p, Index q, Complex v) {
    const Index il = index_.at(lambda);
    const Index im = index_.at(mu);
    if (il < im || (il == im && p <= q)) table_[{il, im, p, q}].rhs = v;
  }

  std::vector<sdp::Constraint> take() {
    std::vector<sdp::Constraint> out;
    out.reserve(table_.size());
    for (auto& [key, c] : table_) out.push_back(std::move(c));
    return out;
  }

 private:
  std::map<MultiIndex, Index, GradedLex> index_;
  std::map<ConstraintKey, sdp::Constraint> table_;
};

int max_defect_degree(const std::vector<HermPoly>& defects) {
  int deg = 0;
  for (const auto& p : defects) deg = std::max(deg, p.max_degree());
  return deg;
}

Matrix clip_psd(const Matrix& w) {
  if (w.size() == 0) return w;
  Eigen::SelfAdjointEigenSolver<Matrix> es((w + w.adjoint()) / 2.0);
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

GramProblem build_gram_problem(const HermPoly& target, const std::vector<HermPoly>& defects, int degree) {
  if (degree < 0) throw std::invalid_argument("build_gram_problem: negative degree");
  for (const auto& p : defects) {
    if (p.d() != target.d()) throw DimensionMismatch("build_gram_problem: defect and target variable counts differ");
  }
  GramProblem gp;
  gp.target = target;
  gp.defects = defects;
  gp.degree = degree;
  const std::size_t d = target.d();
  const Index gamma = target.size();
  gp.basis = monomials_up_to(d, degree);
  const Index nb = static_cast<Index>(gp.basis.size());
  gp.window = degree + (defects.empty() ? 0 : max_defect_degree(defects));

  std::map<MultiIndex, Index, GradedLex> index;
  for (const auto& m : monomials_up_to(d, gp.window)) index.emplace(m, static_cast<Index>(index.size()));
  ConstraintTable table(std::move(index));

  gp.sdp.block_sizes.push_back(nb * gamma);
  for (Index a = 0; a < nb; ++a) {
    for (Index b = 0; b < nb; ++b) {
      for (Index p = 0; p < gamma; ++p) {
        for (Index q = 0; q < gamma; ++q) {
          table.add_term(gp.basis[static_cast<std::size_t>(a)], gp.basis[static_cast<std::size_t>(b)], p, q, 0,
                         a * gamma + p, b * gamma + q, 1.0);
        }
      }
    }
  }

  for (std::size_t j = 0; j < defects.size(); ++j) {
    const int block = static_cast<int>(j + 1);
    const Index gj = defects[j].size();
    gp.sdp.block_sizes.push_back(gj * nb * gamma);
    auto row_of = [&](Index r, Index a, Index p) { return (r * nb + a) * gamma + p; };
    for (const auto& [key, c] : defects[j].coeffs()) {
      for (Index r = 0; r < gj; ++r) {
        for (Index s = 0; s < gj; ++s) {
          const Complex prs = c(r, s);
          if (prs == 0.0) continue;
          for (Index a = 0; a < nb; ++a) {
            const MultiIndex lambda = key.w + gp.basis[static_cast<std::size_t>(a)];
            for (Index b = 0; b < nb; ++b) {
              const MultiIndex mu = key.z + gp.basis[static_cast<std::size_t>(b)];
              for (Index p = 0; p < gamma; ++p) {
                for (Index q = 0; q < gamma; ++q) {
                  table.add_term(lambda, mu, p, q, block, row_of(r, a, p), row_of(s, b, q), prs);
                }
              }
            }
          }
        }
      }
    }
  }

  for (const auto& [key, c] : target.coeffs()) {
    if (!table.contains(key.w) || !table.contains(key.z)) {
      gp.structurally_infeasible = true;
      gp.infeasibility_reason = "target coefficient at (" + key.w.to_string() + ", " + key.z.to_string() +
                                ") lies outside the degree-" + std::to_string(gp.window) + " window";
      continue;
    }
    for (Index p = 0; p < gamma; ++p) {
      for (Index q = 0; q < gamma; ++q) table.set_rhs(key.w, key.z, p, q, c(p, q));
    }
  }
  gp.sdp.constraints = table.take();
  return gp;
}

Certificate extract_certificate(const GramProblem& gp, const sdp::PsdSolution& sol, double rank_tol) {
  const std::size_t d = gp.target.d();
  const Index gamma = gp.target.size();
  const Index nb = static_cast<Index>(gp.basis.size());
  Certificate cert;
  cert.d = d;
  cert.gamma = gamma;
  cert.degree = gp.degree;
  cert.slack = sol.slack;
  cert.solver_iterations = sol.iterations;

  const sdp::PsdFactor f0 = sdp::psd_factor(clip_psd(sol.blocks[0]), rank_tol);
  cert.n0 = f0.rank;
  MatPoly::CoeffMap h0;
  for (Index a = 0; a < nb; ++a) {
    h0.emplace(gp.basis[static_cast<std::size_t>(a)], f0.factor.middleCols(a * gamma, gamma));
  }
  cert.h0 = MatPoly(d, cert.n0, gamma, std::move(h0));

  for (std::size_t j = 0; j < gp.defects.size(); ++j) {
    const Index gj = gp.defects[j].size();
    const sdp::PsdFactor f = sdp::psd_factor(clip_psd(sol.blocks[j + 1]), rank_tol);
    const Index nj = f.rank;
    MatPoly::CoeffMap hj;
    for (Index a = 0; a < nb; ++a) {
      Matrix c = Matrix::Zero(gj * nj, gamma);
      for (Index r = 0; r < gj; ++r) {
        for (Index t = 0; t < nj; ++t) {
          c.row(r * nj + t) = f.factor.row(t).segment((r * nb + a) * gamma, gamma);
        }
      }
      hj.emplace(gp.basis[static_cast<std::size_t>(a)], std::move(c));
    }
    cert.n.push_back(nj);
    cert.h.emplace_back(d, gj * nj, gamma, std::move(hj));
  }
  return cert;
}

HermPoly reconstruct(const Certificate& cert, const std::vector<HermPoly>& defects) {
  if (defects.size() != cert.h.size()) throw ShapeMismatch("reconstruct: defect count differs from witness count");
  HermPoly out = HermPoly::outer(cert.h0);
  for (std::size_t j = 0; j < defects.size(); ++j) {
    if (cert.n[j] == 0) continue;
    out += defects[j].kron_identity(cert.n[j]).congruence(cert.h[j]);
  }
  return out;
}

double certificate_residual(const HermPoly& target, const Certificate& cert, const std::vector<HermPoly>& defects) {
  const HermPoly diff = target - reconstruct(cert, defects);
  return diff.as_bivar().max_coeff_norm();
}

double certificate_residual(const HermPoly& target, const Certificate& cert, const DomainSpec& domain) {
  return certificate_residual(target, cert, defect_polys(domain));
}

CertifyResult certify(const HermPoly& target, const DomainSpec& domain, const CertifyOptions& opt) {
  domain.validate();
  if (target.d() != domain.d) throw DimensionMismatch("certify: target and domain variable counts differ");
  const std::vector<HermPoly> defects = defect_polys(domain);

  // Necessity: target(conj z, z) >= 0 on the closed domain.
  std::vector<Point> screen{Point::Zero(static_cast<Index>(domain.d))};
  if (domain.bounds && opt.screen_samples > 0) {
    auto pts = sample_interior(domain, opt.screen_samples, opt.screen_margin, opt.seed);
    screen.insert(screen.end(), pts.begin(), pts.end());
  }
  for (const auto& z : screen) {
    const double ev = min_eigenvalue(target.diagonal_value(z));
    if (ev < -opt.tol) {
      NotFoundUpToDegree nf;
      nf.witness = z;
      nf.witness_eigenvalue = ev;
      nf.reason = "necessity screen: target(conj z, z) has eigenvalue " + std::to_string(ev);
      return nf;
    }
  }

  const int tdeg = target.max_degree();
  const int start = opt.d_min >= 0 ? opt.d_min : std::max(0, tdeg - max_defect_degree(defects));
  sdp::SolverOptions so = opt.solver;
  so.tol = opt.tol * opt.solver_tol_factor;

  NotFoundUpToDegree nf;
  for (int deg = start; deg <= opt.d_max; ++deg) {
    nf.highest_degree = deg;
    const GramProblem gp = build_gram_problem(target, defects, deg);
    DegreeAttempt at;
    at.degree = deg;
    if (gp.structurally_infeasible) {
      at.status = "structurally-infeasible";
      at.detail = gp.infeasibility_reason;
      nf.attempts.push_back(at);
      continue;
    }
    const sdp::SolveResult res = sdp::solve_psd_feasibility(gp.sdp, so);
    if (const auto* inf = std::get_if<sdp::Infeasible>(&res)) {
      at.status = "infeasible";
      at.detail = inf->reason;
      at.measure = inf->distance;
      at.iterations = inf->iterations;
      nf.attempts.push_back(at);
      continue;
    }
    if (const auto* bud = std::get_if<sdp::IterationBudgetExceeded>(&res)) {
      at.status = "iteration-budget";
      at.measure = bud->gap;
      at.iterations = bud->iterations;
      nf.attempts.push_back(at);
      continue;
    }
    const auto& sol = std::get<sdp::PsdSolution>(res);
    Certificate cert = extract_certificate(gp, sol, opt.rank_tol);
    cert.residual = certificate_residual(target, cert, defects);
    if (cert.residual <= opt.tol) return cert;
    at.status = "residual";
    at.detail = "reconstruction residual above tolerance";
    at.measure = cert.residual;
    at.iterations = sol.iterations;
    nf.attempts.push_back(at);
  }
  nf.reason = "no certificate up to degree " + std::to_string(opt.d_max);
  return nf;
}

SpotCheckReport hereditary_spot_check(const HermPoly& target, const Certificate& cert, const DomainSpec& domain,
                                      int trials, int matrix_size, std::uint64_t seed, double tol) {
  SpotCheckReport rep;
  if (trials <= 0) return rep;
  if (matrix_size <= 0) throw std::invalid_argument("hereditary_spot_check: matrix_size must be positive");
  const std::vector<HermPoly> defects = defect_polys(domain);
  const HermPoly rhs = reconstruct(cert, defects);
  rep.min_target_eigenvalue = std::numeric_limits<double>::infinity();
  rep.min_defect_eigenvalue = std::numeric_limits<double>::infinity();
  for (int k = 0; k < trials; ++k) {
    const auto pts = sample_interior(domain, matrix_size, 1e-3, seed + static_cast<std::uint64_t>(k));
    const CommutingTuple t = CommutingTuple::diagonal(pts);
    const Matrix lhs = hereditary_eval(target, t);
    const double mismatch = spectral_norm(lhs - hereditary_eval(rhs, t));
    const double ev = min_eigenvalue(lhs);
    rep.max_mismatch = std::max(rep.max_mismatch, mismatch);
    rep.min_target_eigenvalue = std::min(rep.min_target_eigenvalue, ev);
    for (const auto& p : defects) {
      rep.min_defect_eigenvalue = std::min(rep.min_defect_eigenvalue, min_eigenvalue(hereditary_eval(p, t)));
    }
    if (mismatch > tol) rep.failures.push_back("trial " + std::to_string(k) + ": mismatch " + std::to_string(mismatch));
    if (ev < -tol) rep.failures.push_back("trial " + std::to_string(k) + ": target eigenvalue " + std::to_string(ev));
  }
  if (rep.min_defect_eigenvalue < -tol) {
    rep.failures.push_back("defect eigenvalue " + std::to_string(rep.min_defect_eigenvalue));
  }
  rep.trials = trials;
  return rep;
}

bool ArchimedeanReport::all_found() const {
  return std::all_of(feasible_degree.begin(), feasible_degree.end(), [](int deg) { return deg >= 0; });
}

ArchimedeanReport archimedean_check(const DomainSpec& spec, int max_degree, double r_max, double radius_tol,
                                    const CertifyOptions& options) {
  spec.validate();
  if (max_degree < spec.max_block_degree()) {
    throw std::invalid_argument("archimedean_check: max_degree is below the largest block degree");
  }
  if (!(r_max > 0.0)) throw std::invalid_argument("archimedean_check: r_max must be positive");
  ArchimedeanReport rep;
  rep.approximation_hypothesis_checked = spec.approximation_hypothesis_checked;
  CertifyOptions opt = options;
  opt.d_min = 0;
  opt.d_max = max_degree;
  // The target r^2 - |z_i|^2 is negative outside the closed domain only, so
  // screening samples add nothing here.
  opt.screen_samples = 0;
  for (std::size_t i = 0; i < spec.d; ++i) {
    const HermPoly zz = HermPoly::outer(MatPoly::variable(spec.d, i));
    auto probe = [&](double r) -> std::optional<Certificate> {
      const HermPoly target = HermPoly::constant(spec.d, Matrix::Constant(1, 1, r * r)) - zz;
      CertifyResult res = certify(target, spec, opt);
      if (auto* c = std::get_if<Certificate>(&res)) return std::move(*c);
      return std::nullopt;
    };
    std::optional<Certificate> best = probe(r_max);
    if (!best) {
      rep.radius.push_back(r_max);
      rep.certificates.emplace_back(std::nullopt);
      rep.feasible_degree.push_back(-1);
      continue;
    }
    double lo = 0.0;
    double hi = r_max;
    while (hi - lo > radius_tol) {
      const double mid = 0.5 * (lo + hi);
      if (auto c = probe(mid)) {
        hi = mid;
        best = std::move(c);
      } else {
        lo = mid;
      }
    }
    rep.radius.push_back(hi);
    rep.feasible_degree.push_back(best->degree);
    rep.certificates.emplace_back(std::move(best));
  }
  return rep;
}

DomainSpec with_archimedean_bounds(const DomainSpec& spec, int max_degree, double r_max) {
  const ArchimedeanReport rep = archimedean_check(spec, max_degree, r_max);
  if (!rep.all_found()) {
    throw std::invalid_argument("domain is not certified Archimedean up to degree " + std::to_string(max_degree) +
                                " and radius " + std::to_string(r_max));
  }
  DomainSpec out = spec;
  out.bounds = rep.radius;
  return out;
}

}  // namespace agler
