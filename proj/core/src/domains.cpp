#include "agler/domains.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <regex>

namespace agler {

void DomainSpec::validate() const {
  if (blocks.empty()) throw std::invalid_argument("DomainSpec: no blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].d() != d) {
      throw DimensionMismatch("DomainSpec: block " + std::to_string(i) + " has " +
                              std::to_string(blocks[i].d()) + " variables, expected " + std::to_string(d));
    }
    if (blocks[i].rows() <= 0 || blocks[i].cols() <= 0) {
      throw ShapeMismatch("DomainSpec: block " + std::to_string(i) + " has an empty shape");
    }
  }
  if (bounds && bounds->size() != d) throw DimensionMismatch("DomainSpec: bounds length differs from d");
}

Index DomainSpec::total_rows() const {
  Index r = 0;
  for (const auto& b : blocks) r += b.rows();
  return r;
}

Index DomainSpec::total_cols() const {
  Index c = 0;
  for (const auto& b : blocks) c += b.cols();
  return c;
}

int DomainSpec::max_block_degree() const {
  int deg = 0;
  for (const auto& b : blocks) deg = std::max(deg, b.degree());
  return deg;
}

Index DomainSpec::weighted_rows(const std::vector<Index>& n) const {
  if (n.size() != blocks.size()) throw ShapeMismatch("DomainSpec: multiplicity tuple length mismatch");
  Index r = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) r += blocks[i].rows() * n[i];
  return r;
}

Index DomainSpec::weighted_cols(const std::vector<Index>& n) const {
  if (n.size() != blocks.size()) throw ShapeMismatch("DomainSpec: multiplicity tuple length mismatch");
  Index c = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) c += blocks[i].cols() * n[i];
  return c;
}

Preset parse_preset(const std::string& text) {
  static const std::regex single(R"((polydisk|cartan2|cartan3):(-?\d+))");
  static const std::regex pair(R"(cartan1:(-?\d+)x(-?\d+))");
  std::smatch m;
  Preset p;
  if (std::regex_match(text, m, pair)) {
    p.kind = PresetKind::kCartan1;
    p.a = std::stoi(m[1]);
    p.b = std::stoi(m[2]);
  } else if (std::regex_match(text, m, single)) {
    const std::string kind = m[1];
    p.kind = kind == "polydisk" ? PresetKind::kPolydisk
             : kind == "cartan2" ? PresetKind::kCartan2
                                 : PresetKind::kCartan3;
    p.a = std::stoi(m[2]);
  } else {
    throw std::invalid_argument("unknown domain preset '" + text +
                                "' (expected polydisk:d, cartan1:LxM, cartan2:m or cartan3:m)");
  }
  if (p.a <= 0 || p.b <= 0) throw std::invalid_argument("domain preset '" + text + "': parameters must be positive");
  return p;
}

std::string preset_name(const Preset& p) {
  switch (p.kind) {
    case PresetKind::kPolydisk: return "polydisk:" + std::to_string(p.a);
    case PresetKind::kCartan1: return "cartan1:" + std::to_string(p.a) + "x" + std::to_string(p.b);
    case PresetKind::kCartan2: return "cartan2:" + std::to_string(p.a);
    case PresetKind::kCartan3: return "cartan3:" + std::to_string(p.a);
  }
  return "custom";
}

namespace {

// Linear matrix polynomial sum_k coeffs[k] z_k.
MatPoly linear_block(std::size_t d, const std::vector<Matrix>& coeffs) {
  MatPoly::CoeffMap m;
  for (std::size_t k = 0; k < d; ++k) m.emplace(MultiIndex::unit(d, k), coeffs[k]);
  return MatPoly(d, coeffs[0].rows(), coeffs[0].cols(), std::move(m));
}

}  // namespace

DomainSpec make_preset(const Preset& p) {
  if (p.a <= 0 || p.b <= 0) throw std::invalid_argument("make_preset: parameters must be positive");
  DomainSpec spec;
  spec.name = preset_name(p);
  spec.approximation_hypothesis_checked = true;
  switch (p.kind) {
    case PresetKind::kPolydisk: {
      spec.d = static_cast<std::size_t>(p.a);
      for (std::size_t i = 0; i < spec.d; ++i) spec.blocks.push_back(MatPoly::variable(spec.d, i));
      break;
    }
    case PresetKind::kCartan1: {
      spec.d = static_cast<std::size_t>(p.a * p.b);
      std::vector<Matrix> coeffs;
      for (int r = 0; r < p.a; ++r) {
        for (int s = 0; s < p.b; ++s) {
          Matrix e = Matrix::Zero(p.a, p.b);
          e(r, s) = 1.0;
          coeffs.push_back(e);
        }
      }
      spec.blocks.push_back(linear_block(spec.d, coeffs));
      break;
    }
    case PresetKind::kCartan2: {
      spec.d = static_cast<std::size_t>(p.a * (p.a + 1) / 2);
      std::vector<Matrix> coeffs;
      for (int r = 0; r < p.a; ++r) {
        for (int s = r; s < p.a; ++s) {
          Matrix e = Matrix::Zero(p.a, p.a);
          e(r, s) = 1.0;
          e(s, r) = 1.0;
          coeffs.push_back(e);
        }
      }
      spec.blocks.push_back(linear_block(spec.d, coeffs));
      break;
    }
    case PresetKind::kCartan3: {
      if (p.a < 2) throw std::invalid_argument("make_preset: cartan3 needs m >= 2");
      spec.d = static_cast<std::size_t>(p.a * (p.a - 1) / 2);
      std::vector<Matrix> coeffs;
      for (int r = 0; r < p.a; ++r) {
        for (int s = r + 1; s < p.a; ++s) {
          Matrix e = Matrix::Zero(p.a, p.a);
          e(r, s) = 1.0;
          e(s, r) = -1.0;
          coeffs.push_back(e);
        }
      }
      spec.blocks.push_back(linear_block(spec.d, coeffs));
      break;
    }
  }
  // Every coordinate is an entry of (or, for polydisks, equal to) a
  // contraction, so the closed domain sits in the unit polydisk.
  spec.bounds = std::vector<double>(spec.d, 1.0);
  spec.validate();
  return spec;
}

DomainSpec make_preset(const std::string& text) { return make_preset(parse_preset(text)); }

DomainSpec make_domain(std::size_t d, std::vector<MatPoly> blocks) {
  DomainSpec spec;
  spec.d = d;
  spec.blocks = std::move(blocks);
  spec.validate();
  return spec;
}

Matrix assembled_value(const DomainSpec& spec, const Point& z) {
  if (static_cast<std::size_t>(z.size()) != spec.d) {
    throw DimensionMismatch("domain point has " + std::to_string(z.size()) + " coordinates, expected " +
                            std::to_string(spec.d));
  }
  Matrix out = Matrix::Zero(spec.total_rows(), spec.total_cols());
  Index r = 0;
  Index c = 0;
  for (const auto& b : spec.blocks) {
    out.block(r, c, b.rows(), b.cols()) = b(z);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Matrix weighted_value(const DomainSpec& spec, const std::vector<Index>& n, const Point& z) {
  if (static_cast<std::size_t>(z.size()) != spec.d) throw DimensionMismatch("weighted_value: point dimension mismatch");
  Matrix out = Matrix::Zero(spec.weighted_rows(n), spec.weighted_cols(n));
  Index r = 0;
  Index c = 0;
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
    const Index ni = n[i];
    if (ni == 0) continue;
    const Matrix v = spec.blocks[i](z);
    for (Index a = 0; a < v.rows(); ++a) {
      for (Index b = 0; b < v.cols(); ++b) {
        for (Index t = 0; t < ni; ++t) out(r + a * ni + t, c + b * ni + t) = v(a, b);
      }
    }
    r += v.rows() * ni;
    c += v.cols() * ni;
  }
  return out;
}

double p_norm_at(const DomainSpec& spec, const Point& z) {
  if (static_cast<std::size_t>(z.size()) != spec.d) {
    throw DimensionMismatch("p_norm_at: point has " + std::to_string(z.size()) + " coordinates, expected " +
                            std::to_string(spec.d));
  }
  double m = 0.0;
  for (const auto& b : spec.blocks) m = std::max(m, spectral_norm(b(z)));
  return m;
}

std::vector<HermPoly> defect_polys(const DomainSpec& spec) {
  std::vector<HermPoly> out;
  out.reserve(spec.blocks.size());
  for (const auto& b : spec.blocks) {
    out.push_back(HermPoly::identity(spec.d, b.cols()) - HermPoly::outer(b));
  }
  return out;
}

std::vector<Point> sample_interior(const DomainSpec& spec, int count, double margin, std::uint64_t seed) {
  if (!(margin > 0.0 && margin < 1.0)) throw std::invalid_argument("sample_interior: margin must lie in (0, 1)");
  if (count < 0) throw std::invalid_argument("sample_interior: negative count");
  std::vector<Point> out;
  if (count == 0) return out;
  if (!spec.bounds) {
    throw std::invalid_argument("sample_interior: no bounding box for domain '" + spec.name +
                                "'; run archimedean_check to establish one");
  }
  const double level = 1.0 - margin;
  const Point origin = Point::Zero(static_cast<Index>(spec.d));
  if (p_norm_at(spec, origin) > level) {
    throw std::invalid_argument("sample_interior: the origin is not inside the domain at the requested margin");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto& box = *spec.bounds;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Point z(static_cast<Index>(spec.d));
    for (std::size_t i = 0; i < spec.d; ++i) {
      const double re = unit(rng);
      const double im = unit(rng);
      z(static_cast<Index>(i)) = Complex(re, im) * box[i];
    }
    if (p_norm_at(spec, z) > level) {
      // Largest s in [0, 1] with ||P(s z)|| <= level, up to bisection accuracy.
      double lo = 0.0;
      double hi = 1.0;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (p_norm_at(spec, mid * z) <= level) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      z *= lo;
    }
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace agler
