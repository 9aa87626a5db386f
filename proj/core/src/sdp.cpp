#include "agler/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace agler::sdp {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865476;
// Coefficients below this fraction of a row's largest entry are cancellation noise.
constexpr double kRowNoise = 1e-14;
// Tikhonov shift of the unit-diagonal constraint Gram matrix.
constexpr double kGramShift = 1e-12;

// Hermitian n x n block as n^2 reals: diagonal entries at (i, i), sqrt(2) Re
// X_ij at (i, j) and sqrt(2) Im X_ij at (j, i) for i < j. The map is an
// isometry from the Frobenius norm to the Euclidean norm.
struct Layout {
  std::vector<Index> sizes;
  std::vector<Index> offsets;
  Index total = 0;

  explicit Layout(const std::vector<Index>& s) : sizes(s) {
    for (Index n : sizes) {
      offsets.push_back(total);
      total += n * n;
    }
  }
  Index param(std::size_t b, Index i, Index j) const { return offsets[b] + i * sizes[b] + j; }
};

struct RealRow {
  std::map<Index, double> coefs;
  double rhs = 0.0;
};

void add_term(const Layout& layout, const Term& t, RealRow& re, RealRow& im) {
  const auto b = static_cast<std::size_t>(t.block);
  const double cr = t.coeff.real();
  const double ci = t.coeff.imag();
  if (t.row == t.col) {
    const Index p = layout.param(b, t.row, t.row);
    re.coefs[p] += cr;
    im.coefs[p] += ci;
    return;
  }
  const Index lo = std::min(t.row, t.col);
  const Index hi = std::max(t.row, t.col);
  const Index a = layout.param(b, lo, hi);  // sqrt2 Re X_lo,hi
  const Index c = layout.param(b, hi, lo);  // sqrt2 Im X_lo,hi
  if (t.row < t.col) {
    // (cr + i ci)(a + i c) / sqrt2
    re.coefs[a] += cr * kInvSqrt2;
    re.coefs[c] -= ci * kInvSqrt2;
    im.coefs[a] += ci * kInvSqrt2;
    im.coefs[c] += cr * kInvSqrt2;
  } else {
    // (cr + i ci)(a - i c) / sqrt2
    re.coefs[a] += cr * kInvSqrt2;
    re.coefs[c] += ci * kInvSqrt2;
    im.coefs[a] += ci * kInvSqrt2;
    im.coefs[c] -= cr * kInvSqrt2;
  }
}

void prune(RealRow& row) {
  double m = 0.0;
  for (const auto& [p, c] : row.coefs) m = std::max(m, std::abs(c));
  for (auto it = row.coefs.begin(); it != row.coefs.end();) {
    if (std::abs(it->second) <= kRowNoise * m || it->second == 0.0) {
      it = row.coefs.erase(it);
    } else {
      ++it;
    }
  }
}

// Active principal submatrix of one block and the columns of its parameters.
struct BlockMap {
  std::vector<Index> active;  // global row indices kept
  std::vector<Index> diag_col;
  std::vector<Index> re_col;  // na x na, a < b
  std::vector<Index> im_col;
  Index na() const { return static_cast<Index>(active.size()); }
};

class ReducedProblem {
 public:
  std::vector<BlockMap> blocks;
  Eigen::SparseMatrix<double> a;  // unit-norm rows
  RealVector b;
  Index n = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> gram;

  // Orthogonal projection onto {x : a x = b}, refined `passes` times.
  RealVector project_affine(const RealVector& x, int passes = 1) const {
    RealVector y = x;
    if (a.rows() == 0) return y;
    for (int k = 0; k < passes; ++k) {
      const RealVector r = a * y - b;
      const RealVector lambda = gram.solve(r);
      y -= a.transpose() * lambda;
    }
    return y;
  }

  Matrix block_matrix(const RealVector& x, std::size_t k) const {
    const BlockMap& bm = blocks[k];
    const Index na = bm.na();
    Matrix m(na, na);
    for (Index i = 0; i < na; ++i) {
      m(i, i) = x(bm.diag_col[static_cast<std::size_t>(i)]);
      for (Index j = i + 1; j < na; ++j) {
        const auto idx = static_cast<std::size_t>(i * na + j);
        const Complex v(x(bm.re_col[idx]) * kInvSqrt2, x(bm.im_col[idx]) * kInvSqrt2);
        m(i, j) = v;
        m(j, i) = std::conj(v);
      }
    }
    return m;
  }

  void store_block(const Matrix& m, std::size_t k, RealVector& x) const {
    const BlockMap& bm = blocks[k];
    const Index na = bm.na();
    for (Index i = 0; i < na; ++i) {
      x(bm.diag_col[static_cast<std::size_t>(i)]) = m(i, i).real();
      for (Index j = i + 1; j < na; ++j) {
        const auto idx = static_cast<std::size_t>(i * na + j);
        x(bm.re_col[idx]) = kSqrt2 * m(i, j).real();
        x(bm.im_col[idx]) = kSqrt2 * m(i, j).imag();
      }
    }
  }

  // Projection onto {X_k >= t I} for every active block.
  RealVector project_cone(const RealVector& x, double t) const {
    RealVector y = x;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (blocks[k].na() == 0) continue;
      const Matrix m = block_matrix(x, k);
      Eigen::SelfAdjointEigenSolver<Matrix> es(m);
      RealVector ev = es.eigenvalues();
      if (ev.minCoeff() >= t) continue;
      for (Index i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), t);
      const Matrix& u = es.eigenvectors();
      store_block(u * ev.cast<Complex>().asDiagonal() * u.adjoint(), k, y);
    }
    return y;
  }

  double min_active_eigenvalue(const RealVector& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (blocks[k].na() == 0) continue;
      m = std::min(m, min_eigenvalue(block_matrix(x, k)));
    }
    return m;
  }

  double mean_eigenvalue_floor(const RealVector& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const Index na = blocks[k].na();
      if (na == 0) continue;
      m = std::min(m, block_matrix(x, k).trace().real() / static_cast<double>(na));
    }
    return m;
  }
};

enum class DrStatus { kConverged, kInfeasible, kBudget };

struct DrOutcome {
  DrStatus status = DrStatus::kBudget;
  RealVector x;
  double gap = 0.0;
  int iterations = 0;
};

DrOutcome run_douglas_rachford(const ReducedProblem& rp, RealVector& z, double t, int max_iter,
                               const SolverOptions& opt, std::vector<double>* trace) {
  DrOutcome out;
  double window_start_gap = std::numeric_limits<double>::infinity();
  int stalled_windows = 0;
  for (int k = 1; k <= max_iter; ++k) {
    const RealVector x = rp.project_affine(z);
    const RealVector y = rp.project_cone(2.0 * x - z, t);
    const RealVector step = y - x;
    z += step;
    out.gap = step.norm();
    out.iterations = k;
    if (trace && k % 100 == 0) trace->push_back(out.gap);
    if (k == 1) window_start_gap = out.gap;
    if (out.gap <= opt.tol) {
      out.status = DrStatus::kConverged;
      out.x = x;
      return out;
    }
    if (k % opt.stall_window == 0) {
      const bool stalled = std::isfinite(window_start_gap) && out.gap > 10.0 * opt.tol &&
                           window_start_gap - out.gap <= opt.stall_rel_change * window_start_gap;
      stalled_windows = stalled ? stalled_windows + 1 : 0;
      if (stalled_windows >= std::max(1, opt.stall_windows)) {
        out.status = DrStatus::kInfeasible;
        out.x = x;
        return out;
      }
      window_start_gap = out.gap;
    }
  }
  out.status = DrStatus::kBudget;
  out.x = rp.project_affine(z);
  return out;
}

}  // namespace

void PsdFeasibilityProblem::validate() const {
  for (Index n : block_sizes) {
    if (n < 0) throw ShapeMismatch("PsdFeasibilityProblem: negative block size");
  }
  for (const auto& c : constraints) {
    for (const auto& t : c.terms) {
      if (t.block < 0 || static_cast<std::size_t>(t.block) >= block_sizes.size()) {
        throw ShapeMismatch("PsdFeasibilityProblem: term addresses missing block " + std::to_string(t.block));
      }
      const Index n = block_sizes[static_cast<std::size_t>(t.block)];
      if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n) {
        throw ShapeMismatch("PsdFeasibilityProblem: term entry outside block " + std::to_string(t.block));
      }
    }
  }
}

SolveResult solve_psd_feasibility(const PsdFeasibilityProblem& problem, const SolverOptions& opt) {
  problem.validate();
  const Layout layout(problem.block_sizes);

  std::vector<RealRow> rows;
  rows.reserve(problem.constraints.size() * 2);
  double bscale = 1.0;
  for (const auto& c : problem.constraints) {
    RealRow re, im;
    re.rhs = c.rhs.real();
    im.rhs = c.rhs.imag();
    for (const auto& t : c.terms) add_term(layout, t, re, im);
    prune(re);
    prune(im);
    rows.push_back(std::move(re));
    rows.push_back(std::move(im));
    bscale = std::max({bscale, std::abs(c.rhs.real()), std::abs(c.rhs.imag())});
  }

  // Facial reduction: a row sum_i c_i X_ii = 0 with all c_i of one sign
  // forces those diagonals, hence their rows and columns, to vanish.
  std::vector<std::vector<bool>> live(problem.block_sizes.size());
  std::vector<std::pair<std::size_t, Index>> diag_of(static_cast<std::size_t>(layout.total), {0, -1});
  for (std::size_t b = 0; b < problem.block_sizes.size(); ++b) {
    live[b].assign(static_cast<std::size_t>(problem.block_sizes[b]), true);
    for (Index i = 0; i < problem.block_sizes[b]; ++i) {
      diag_of[static_cast<std::size_t>(layout.param(b, i, i))] = {b, i};
    }
  }
  std::vector<std::size_t> block_of(static_cast<std::size_t>(layout.total));
  for (std::size_t b = 0; b < layout.sizes.size(); ++b) {
    for (Index p = 0; p < layout.sizes[b] * layout.sizes[b]; ++p) {
      block_of[static_cast<std::size_t>(layout.offsets[b] + p)] = b;
    }
  }
  auto param_live = [&](Index p) {
    const std::size_t b = block_of[static_cast<std::size_t>(p)];
    const Index local = p - layout.offsets[b];
    const Index n = layout.sizes[b];
    return live[b][static_cast<std::size_t>(local / n)] && live[b][static_cast<std::size_t>(local % n)];
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& row : rows) {
      int sign = 0;
      bool diagonal_only = true;
      bool any = false;
      for (const auto& [p, c] : row.coefs) {
        if (!param_live(p)) continue;
        any = true;
        if (diag_of[static_cast<std::size_t>(p)].second < 0) {
          diagonal_only = false;
          break;
        }
        const int s = c > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        if (s != sign) {
          diagonal_only = false;
          break;
        }
      }
      if (!any) {
        if (std::abs(row.rhs) > opt.tol) {
          return Infeasible{"inconsistent constraint with no free entries", std::abs(row.rhs), 0};
        }
        continue;
      }
      if (!diagonal_only) continue;
      if (sign * row.rhs < -opt.tol) {
        return Infeasible{"nonnegative combination of diagonal entries must equal a negative value",
                          std::abs(row.rhs), 0};
      }
      if (!opt.facial_reduction || std::abs(row.rhs) > kRowNoise * bscale) continue;
      for (const auto& [p, c] : row.coefs) {
        if (!param_live(p)) continue;
        const auto [b, i] = diag_of[static_cast<std::size_t>(p)];
        live[b][static_cast<std::size_t>(i)] = false;
        changed = true;
      }
    }
  }

  // Reduced parameter space.
  ReducedProblem rp;
  std::vector<Index> col_of(static_cast<std::size_t>(layout.total), -1);
  rp.blocks.resize(problem.block_sizes.size());
  for (std::size_t b = 0; b < problem.block_sizes.size(); ++b) {
    BlockMap& bm = rp.blocks[b];
    for (Index i = 0; i < layout.sizes[b]; ++i) {
      if (live[b][static_cast<std::size_t>(i)]) bm.active.push_back(i);
    }
    const Index na = bm.na();
    bm.diag_col.resize(static_cast<std::size_t>(na));
    bm.re_col.assign(static_cast<std::size_t>(na * na), -1);
    bm.im_col.assign(static_cast<std::size_t>(na * na), -1);
    for (Index a = 0; a < na; ++a) {
      const Index gi = bm.active[static_cast<std::size_t>(a)];
      col_of[static_cast<std::size_t>(layout.param(b, gi, gi))] = rp.n;
      bm.diag_col[static_cast<std::size_t>(a)] = rp.n++;
      for (Index c = a + 1; c < na; ++c) {
        const Index gj = bm.active[static_cast<std::size_t>(c)];
        col_of[static_cast<std::size_t>(layout.param(b, gi, gj))] = rp.n;
        bm.re_col[static_cast<std::size_t>(a * na + c)] = rp.n++;
        col_of[static_cast<std::size_t>(layout.param(b, gj, gi))] = rp.n;
        bm.im_col[static_cast<std::size_t>(a * na + c)] = rp.n++;
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> rhs;
  for (const auto& row : rows) {
    double norm2 = 0.0;
    for (const auto& [p, c] : row.coefs) {
      if (col_of[static_cast<std::size_t>(p)] >= 0) norm2 += c * c;
    }
    if (norm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    const auto r = static_cast<Index>(rhs.size());
    for (const auto& [p, c] : row.coefs) {
      const Index col = col_of[static_cast<std::size_t>(p)];
      if (col >= 0) trips.emplace_back(r, col, c * inv);
    }
    rhs.push_back(row.rhs * inv);
  }
  rp.a.resize(static_cast<Index>(rhs.size()), rp.n);
  rp.a.setFromTriplets(trips.begin(), trips.end());
  rp.b = Eigen::Map<RealVector>(rhs.data(), static_cast<Index>(rhs.size()));

  auto finish = [&](const RealVector& x, int iterations, std::vector<double> trace) {
    PsdSolution sol;
    sol.iterations = iterations;
    sol.gap_trace = std::move(trace);
    sol.blocks.resize(problem.block_sizes.size());
    sol.slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < problem.block_sizes.size(); ++k) {
      const Index n = problem.block_sizes[k];
      Matrix full = Matrix::Zero(n, n);
      if (rp.blocks[k].na() > 0) {
        const Matrix m = rp.block_matrix(x, k);
        const auto& act = rp.blocks[k].active;
        for (Index a = 0; a < m.rows(); ++a) {
          for (Index c = 0; c < m.cols(); ++c) {
            full(act[static_cast<std::size_t>(a)], act[static_cast<std::size_t>(c)]) = m(a, c);
          }
        }
      }
      if (n > 0) sol.slack = std::min(sol.slack, min_eigenvalue(full));
      sol.blocks[k] = std::move(full);
    }
    if (!std::isfinite(sol.slack)) sol.slack = 0.0;
    double res = 0.0;
    for (const auto& c : problem.constraints) {
      Complex s(0.0, 0.0);
      for (const auto& t : c.terms) s += t.coeff * sol.blocks[static_cast<std::size_t>(t.block)](t.row, t.col);
      res = std::max(res, std::abs(s - c.rhs));
    }
    sol.residual = res;
    return sol;
  };

  if (rp.n == 0) {
    PsdSolution sol = finish(RealVector(), 0, {});
    if (sol.residual > opt.tol) return Infeasible{"inconsistent constraints", sol.residual, 0};
    return sol;
  }

  if (rp.a.rows() > 0) {
    Eigen::SparseMatrix<double> g = rp.a * rp.a.transpose();
    Eigen::SparseMatrix<double> shift(g.rows(), g.cols());
    shift.setIdentity();
    g += kGramShift * shift;
    rp.gram.compute(g);
    if (rp.gram.info() != Eigen::Success) {
      throw NumericalError("solve_psd_feasibility: constraint Gram factorization failed");
    }
  }

  // Least-norm point of the affine set; its residual decides consistency.
  RealVector z = rp.project_affine(RealVector::Zero(rp.n), 3);
  if (rp.a.rows() > 0) {
    const double incons = (rp.a * z - rp.b).lpNorm<Eigen::Infinity>();
    if (incons > opt.tol) return Infeasible{"affine constraints are inconsistent", incons, 0};
  }

  auto polish = [&](const RealVector& x) { return rp.project_affine(x, 3); };

  std::vector<double> trace;
  DrOutcome first = run_douglas_rachford(rp, z, 0.0, opt.max_iter, opt, &trace);
  int total_iter = first.iterations;
  if (first.status == DrStatus::kInfeasible) {
    return Infeasible{"splitting gap stalled above tolerance", first.gap, total_iter};
  }
  if (first.status == DrStatus::kBudget) return IterationBudgetExceeded{first.gap, total_iter};

  RealVector best = polish(first.x);
  if (!problem.maximize_slack || opt.slack_bisection_steps <= 0) {
    return finish(best, total_iter, std::move(trace));
  }

  double lo = std::max(0.0, rp.min_active_eigenvalue(best));
  double hi = rp.mean_eigenvalue_floor(best);
  RealVector z_best = z;
  // A stalled probe only costs slack, so probes give up after one window.
  SolverOptions probe_opt = opt;
  probe_opt.stall_windows = 1;
  for (int step = 0; step < opt.slack_bisection_steps && hi - lo > 1e-7 * std::max(1.0, hi); ++step) {
    const double t = 0.5 * (lo + hi);
    RealVector z_probe = z_best;
    DrOutcome probe = run_douglas_rachford(rp, z_probe, t, opt.probe_max_iter, probe_opt, nullptr);
    total_iter += probe.iterations;
    if (probe.status != DrStatus::kConverged) {
      hi = t;
      continue;
    }
    const RealVector x = polish(probe.x);
    const double s = rp.min_active_eigenvalue(x);
    if (s >= lo) {
      best = x;
      z_best = z_probe;
      lo = std::max(lo, std::min(s, t));
    } else {
      hi = t;
    }
  }
  return finish(best, total_iter, std::move(trace));
}

RealMatrix embed_complex(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("embed_complex: matrix must be square");
  if ((h - h.adjoint()).norm() > 1e-12 * (1.0 + h.norm())) {
    throw std::invalid_argument("embed_complex: matrix is not Hermitian");
  }
  const Index n = h.rows();
  RealMatrix e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = h.real();
  e.topRightCorner(n, n) = -h.imag();
  e.bottomLeftCorner(n, n) = h.imag();
  e.bottomRightCorner(n, n) = h.real();
  return e;
}

Matrix unembed_complex(const RealMatrix& e) {
  if (e.rows() != e.cols() || e.rows() % 2 != 0) throw std::invalid_argument("unembed_complex: bad shape");
  const Index n = e.rows() / 2;
  Matrix h(n, n);
  h.real() = e.topLeftCorner(n, n);
  h.imag() = e.bottomLeftCorner(n, n);
  return h;
}

PsdFactor psd_factor(const Matrix& w, double rank_tol) {
  if (w.rows() != w.cols()) throw std::invalid_argument("psd_factor: matrix must be square");
  const Index n = w.rows();
  PsdFactor out;
  if (n == 0) {
    out.factor = Matrix(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((w + w.adjoint()) / 2.0);
  const RealVector& ev = es.eigenvalues();
  const double lmax = std::max(ev(n - 1), 0.0);
  if (ev(0) < -rank_tol * std::max(1.0, lmax)) {
    throw NumericalError("psd_factor: matrix is indefinite (eigenvalue " + std::to_string(ev(0)) + ")");
  }
  std::vector<Index> keep;
  for (Index i = n - 1; i >= 0; --i) {
    if (ev(i) > rank_tol * lmax && ev(i) > 0.0) keep.push_back(i);
  }
  out.rank = static_cast<Index>(keep.size());
  out.factor = Matrix::Zero(out.rank, n);
  for (Index r = 0; r < out.rank; ++r) {
    const Index i = keep[static_cast<std::size_t>(r)];
    out.factor.row(r) = std::sqrt(ev(i)) * es.eigenvectors().col(i).adjoint();
  }
  return out;
}

}  // namespace agler::sdp
