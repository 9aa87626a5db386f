#include "agler/detrep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace agler {

namespace {

using ScalarMap = std::map<MultiIndex, Complex, GradedLex>;

void require_scalar(const MatPoly& p, const char* who) {
  if (p.rows() != 1 || p.cols() != 1) throw ShapeMismatch(std::string(who) + ": polynomial must be 1 x 1");
}

ScalarMap to_scalar_map(const MatPoly& p) {
  ScalarMap m;
  for (const auto& [e, c] : p.coeffs()) m.emplace(e, c(0, 0));
  return m;
}

MatPoly from_scalar_map(std::size_t d, const ScalarMap& m) {
  MatPoly::CoeffMap out;
  for (const auto& [e, c] : m) out.emplace(e, Matrix::Constant(1, 1, c));
  return MatPoly(d, 1, 1, std::move(out));
}

Point gradient(const ScalarMap& p, const Point& z) {
  Point g = Point::Zero(z.size());
  for (const auto& [e, c] : p) {
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      Complex term = c * static_cast<double>(e[v]);
      for (std::size_t u = 0; u < e.size(); ++u) {
        const int pw = u == v ? e[u] - 1 : e[u];
        for (int k = 0; k < pw; ++k) term *= z(static_cast<Index>(u));
      }
      g(static_cast<Index>(v)) += term;
    }
  }
  return g;
}

/// Minimum-norm Newton iteration toward a zero of p, kept inside the domain.
/// Returns the last interior iterate.
Point newton_to_zero(const MatPoly& p, const ScalarMap& coeffs, const DomainSpec& domain, Point z,
                     double margin, int steps) {
  for (int k = 0; k < steps; ++k) {
    const Complex f = p(z)(0, 0);
    const Point g = gradient(coeffs, z);
    const double gg = g.squaredNorm();
    if (gg == 0.0 || f == Complex(0.0)) break;
    const Point next = z - (f / gg) * g.conjugate();
    if (!(p_norm_at(domain, next) < 1.0 - margin)) break;
    z = next;
  }
  return z;
}

}  // namespace

double coeff_norm(const MatPoly& p) {
  double s = 0.0;
  for (const auto& [e, c] : p.coeffs()) s += c.squaredNorm();
  return std::sqrt(s);
}

ScaleResult find_scale(const MatPoly& p, const DomainSpec& domain, int degree, const DetRepOptions& opt) {
  require_scalar(p, "find_scale");
  if (p.d() != domain.d) throw DimensionMismatch("find_scale: polynomial and domain variable counts differ");
  if (!(opt.c_tol > 0.0)) throw std::invalid_argument("find_scale: c_tol must be positive");

  std::vector<Point> screen{Point::Zero(static_cast<Index>(domain.d))};
  if (opt.screen_samples > 0) {
    auto pts = sample_interior(domain, opt.screen_samples, opt.screen_margin, opt.certify.seed);
    screen.insert(screen.end(), pts.begin(), pts.end());
  }
  ScaleResult out;
  out.c_upper = std::numeric_limits<double>::infinity();
  for (const auto& z : screen) {
    const double m = std::abs(p(z)(0, 0));
    if (m <= opt.zero_threshold) {
      throw ScreenFailure("find_scale: stability screen failed, |p(z)| = " + std::to_string(m), z);
    }
    out.c_upper = std::min(out.c_upper, m);
  }
  // Sampling alone rarely lands within the threshold of an isolated zero, so
  // the smallest samples seed a short Newton search.
  if (p.degree() > 0) {
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < screen.size(); ++i) ranked.emplace_back(std::abs(p(screen[i])(0, 0)), i);
    const std::size_t seeds = std::min<std::size_t>(8, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(seeds), ranked.end());
    const ScalarMap coeffs = to_scalar_map(p);
    for (std::size_t i = 0; i < seeds; ++i) {
      const Point z = newton_to_zero(p, coeffs, domain, screen[ranked[i].second], opt.screen_margin, 50);
      const double m = std::abs(p(z)(0, 0));
      if (m <= opt.zero_threshold) {
        throw ScreenFailure("find_scale: stability screen found a zero, |p(z)| = " + std::to_string(m), z);
      }
      out.c_upper = std::min(out.c_upper, m);
    }
  }

  CertifyOptions co = opt.certify;
  co.d_min = degree;
  co.d_max = degree;
  co.screen_samples = 0;
  const HermPoly pp = HermPoly::outer(p);
  auto probe = [&](double c) -> std::optional<Certificate> {
    ++out.probes;
    CertifyResult res = certify(pp - HermPoly::constant(p.d(), Matrix::Constant(1, 1, c * c)), domain, co);
    if (auto* cert = std::get_if<Certificate>(&res)) return std::move(*cert);
    return std::nullopt;
  };

  if (auto cert = probe(out.c_upper)) {
    out.c = out.c_upper;
    out.cert = std::move(*cert);
    return out;
  }
  double lo = 0.0;
  double hi = out.c_upper;
  std::optional<Certificate> best;
  while (hi - lo > opt.c_tol) {
    const double mid = 0.5 * (lo + hi);
    if (auto cert = probe(mid)) {
      lo = mid;
      best = std::move(cert);
    } else {
      hi = mid;
    }
  }
  if (!best) {
    throw NotFoundError("find_scale: no c > 0 is certified at degree " + std::to_string(degree));
  }
  out.c = lo;
  out.cert = std::move(*best);
  return out;
}

MatPoly expand_det(const Matrix& k, const std::vector<Index>& n, const DomainSpec& domain) {
  const std::size_t d = domain.d;
  if (k.rows() != domain.weighted_cols(n) || k.cols() != domain.weighted_rows(n)) {
    throw ShapeMismatch("expand_det: K does not match the multiplicity tuple");
  }
  if (k.size() == 0) return MatPoly::constant(d, Matrix::Ones(1, 1));

  // deg det(I - K P_n) <= sum_i n_i m_i deg P_i, and likewise per variable.
  int total = 0;
  std::vector<int> bound(d, 0);
  for (std::size_t i = 0; i < domain.blocks.size(); ++i) {
    const int w = static_cast<int>(n[i] * domain.blocks[i].cols());
    total += w * domain.blocks[i].degree();
    for (std::size_t v = 0; v < d; ++v) bound[v] += w * domain.blocks[i].degree_in(v);
  }
  std::vector<Index> size(d);
  Index npts = 1;
  for (std::size_t v = 0; v < d; ++v) {
    bound[v] = std::min(bound[v], total);
    size[v] = bound[v] + 1;
    npts *= size[v];
  }

  // Values on the grid of roots of unity, variable 0 varying slowest.
  auto unflatten = [&](Index flat) {
    std::vector<Index> idx(d);
    for (std::size_t v = d; v-- > 0;) {
      idx[v] = flat % size[v];
      flat /= size[v];
    }
    return idx;
  };
  const Matrix eye = Matrix::Identity(k.rows(), k.rows());
  Vector vals(npts);
  for (Index f = 0; f < npts; ++f) {
    const auto idx = unflatten(f);
    Point z(static_cast<Index>(d));
    for (std::size_t v = 0; v < d; ++v) {
      z(static_cast<Index>(v)) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(idx[v]) /
                                                     static_cast<double>(size[v]));
    }
    vals(f) = (eye - k * weighted_value(domain, n, z)).determinant();
  }

  // Inverse DFT along each axis.
  Index stride = 1;
  for (std::size_t v = d; v-- > 0;) {
    const Index len = size[v];
    const Index outer = npts / (len * stride);
    Vector line(len);
    for (Index o = 0; o < outer; ++o) {
      for (Index s = 0; s < stride; ++s) {
        const Index base = o * len * stride + s;
        for (Index e = 0; e < len; ++e) {
          Complex acc = 0.0;
          for (Index t = 0; t < len; ++t) {
            acc += vals(base + t * stride) *
                   std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(e * t) / static_cast<double>(len));
          }
          line(e) = acc / static_cast<double>(len);
        }
        for (Index e = 0; e < len; ++e) vals(base + e * stride) = line(e);
      }
    }
    stride *= len;
  }

  // Coefficients below the interpolation noise floor are zero.
  const double floor = 1e-13 * vals.cwiseAbs().maxCoeff();
  ScalarMap coeffs;
  for (Index f = 0; f < npts; ++f) {
    const auto idx = unflatten(f);
    std::vector<int> e(idx.begin(), idx.end());
    MultiIndex m(std::move(e));
    if (m.total_degree() > total || std::abs(vals(f)) <= floor) continue;
    coeffs.emplace(std::move(m), vals(f));
  }
  return from_scalar_map(d, coeffs);
}

std::pair<MatPoly, MatPoly> divide(const MatPoly& num, const MatPoly& den) {
  require_scalar(num, "divide");
  require_scalar(den, "divide");
  if (num.d() != den.d()) throw DimensionMismatch("divide: variable counts differ");
  if (den.is_zero()) throw std::invalid_argument("divide: division by the zero polynomial");
  const ScalarMap dm = to_scalar_map(den);
  const auto& [lead, lc] = *dm.rbegin();
  ScalarMap r = to_scalar_map(num);
  ScalarMap quot;
  ScalarMap rem;
  while (!r.empty()) {
    auto top = std::prev(r.end());
    const MultiIndex e = top->first;
    const Complex c = top->second;
    r.erase(top);
    if (!lead.divides(e)) {
      rem[e] += c;
      continue;
    }
    const MultiIndex f = e - lead;
    const Complex t = c / lc;
    quot[f] += t;
    for (const auto& [g, dc] : dm) {
      if (g == lead) continue;
      r[f + g] -= t * dc;
    }
  }
  return {from_scalar_map(num.d(), quot), from_scalar_map(num.d(), rem)};
}

DetRepReport verify_detrep(const DetRep& rep, const MatPoly& p, const DomainSpec& domain, int samples,
                           std::uint64_t seed) {
  DetRepReport out;
  out.seed = seed;
  out.sigma_max = spectral_norm(rep.k);
  if (samples <= 0) return out;
  const Matrix eye = Matrix::Identity(rep.k.rows(), rep.k.rows());
  for (const auto& z : sample_interior(domain, samples, 1e-3, seed)) {
    const Complex pq = p(z)(0, 0) * rep.q(z)(0, 0);
    const Complex det = rep.k.size() == 0 ? Complex(1.0) : (eye - rep.k * weighted_value(domain, rep.n, z)).determinant();
    out.max_residual = std::max(out.max_residual, std::abs(pq - det) / (1.0 + std::abs(pq)));
  }
  out.samples = samples;
  return out;
}

DetRep extract_detrep(const MatPoly& p, const DomainSpec& domain, const DetRepOptions& opt) {
  require_scalar(p, "extract_detrep");
  domain.validate();
  if (p.d() != domain.d) throw DimensionMismatch("extract_detrep: polynomial and domain variable counts differ");
  const Complex p0 = p(Point::Zero(static_cast<Index>(domain.d)))(0, 0);
  if (std::abs(p0) <= opt.zero_threshold) throw std::invalid_argument("extract_detrep: p(0) must be nonzero");

  const int start = opt.certify.d_min >= 0 ? opt.certify.d_min
                                           : std::max(0, p.degree() - domain.max_block_degree());
  std::string last_failure = "empty degree range";
  for (int deg = start; deg <= opt.certify.d_max; ++deg) {
    ScaleResult sr;
    try {
      sr = find_scale(p, domain, deg, opt);
    } catch (const NotFoundError& e) {
      last_failure = e.what();
      continue;
    }
    // c / p is realized directly from the scale certificate; a sup-norm
    // screen would reject c = min |p|.
    const RationalMatFn fn{MatPoly::constant(domain.d, Matrix::Constant(1, 1, sr.c)), p};
    const Colligation col = lurking_contraction(fn, sr.cert, domain, opt.certify.tol);

    DetRep rep;
    rep.k = col.a;
    rep.n = col.n;
    rep.c = sr.c;
    rep.degree = deg;
    rep.sigma_max = spectral_norm(rep.k);
    const MatPoly det = expand_det(rep.k, rep.n, domain);
    auto [q, rem] = divide(det, p);
    rep.q = std::move(q);
    rep.det_norm = coeff_norm(det);
    rep.division_remainder = coeff_norm(rem);
    if (rep.division_remainder > opt.remainder_tol * rep.det_norm) {
      throw NumericalError("extract_detrep: det(I - K P_n) is not divisible by p, remainder " +
                           std::to_string(rep.division_remainder));
    }
    int bound = 0;
    for (std::size_t i = 0; i < domain.blocks.size(); ++i) {
      bound += static_cast<int>(rep.n[i] * domain.blocks[i].cols()) * domain.blocks[i].degree();
    }
    if (p.degree() + std::max(rep.q.degree(), 0) > bound) {
      throw NumericalError("extract_detrep: deg p + deg q exceeds the determinant degree bound");
    }
    rep.identity_residual = verify_detrep(rep, p, domain, opt.verify_samples, opt.certify.seed).max_residual;
    return rep;
  }
  throw NotFoundError("extract_detrep: degree exhausted, " + last_failure);
}

StabilityReport stability_scan(const MatPoly& q, const DomainSpec& domain, int samples, std::uint64_t seed) {
  require_scalar(q, "stability_scan");
  StabilityReport rep;
  rep.min_modulus = std::abs(q(Point::Zero(static_cast<Index>(domain.d)))(0, 0));
  std::uint64_t s = seed;
  for (double margin : {1e-1, 1e-2, 1e-3}) {
    double m = rep.min_modulus;
    for (const auto& z : sample_interior(domain, samples, margin, s++)) m = std::min(m, std::abs(q(z)(0, 0)));
    rep.min_by_margin.emplace_back(margin, m);
    rep.min_modulus = std::min(rep.min_modulus, m);
  }
  rep.flagged = rep.min_modulus <= 1e-9;
  return rep;
}

}  // namespace agler
