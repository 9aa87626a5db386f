#include "io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace agler::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw FormatError(path + ": " + msg); }

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) fail(path, std::string("missing field \"") + k + "\"");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) fail(path, "unknown field \"" + k + "\"");
  }
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

long long integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

Index count_at(const json& j, const std::string& path) {
  const long long v = integer_at(j, path);
  if (v < 0) fail(path, "expected a nonnegative integer");
  return static_cast<Index>(v);
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::vector<Index> counts_at(const json& j, const std::string& path) {
  std::vector<Index> out;
  const json& a = array_at(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(count_at(a[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

MultiIndex exponent_at(const json& j, const std::string& path, std::size_t d) {
  const json& a = array_at(j, path);
  if (a.size() != d) {
    fail(path, "exponent has length " + std::to_string(a.size()) + ", expected d = " + std::to_string(d));
  }
  std::vector<int> e;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long long v = integer_at(a[i], path + "[" + std::to_string(i) + "]");
    if (v < 0) fail(path, "negative exponent");
    e.push_back(static_cast<int>(v));
  }
  return MultiIndex(std::move(e));
}

Matrix shaped_matrix(const json& j, const std::string& path, Index rows, Index cols) {
  const Matrix m = matrix_from_json(j, path);
  if (m.size() == 0 && (rows == 0 || cols == 0)) return Matrix::Zero(rows, cols);
  if (m.rows() != rows || m.cols() != cols) {
    fail(path, "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                   std::to_string(rows) + "x" + std::to_string(cols));
  }
  return m;
}

}  // namespace

json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Point& z) {
  json a = json::array();
  for (Index i = 0; i < z.size(); ++i) a.push_back(to_json(z(i)));
  return a;
}

json to_json(const MatPoly& p) {
  json coeffs = json::array();
  for (const auto& [e, c] : p.coeffs()) coeffs.push_back({{"exp", e.exponents()}, {"mat", to_json(c)}});
  return {{"d", p.d()}, {"rows", p.rows()}, {"cols", p.cols()}, {"coeffs", std::move(coeffs)}};
}

json to_json(const HermPoly& p) {
  json coeffs = json::array();
  for (const auto& [k, c] : p.coeffs()) {
    coeffs.push_back({{"w", k.w.exponents()}, {"z", k.z.exponents()}, {"mat", to_json(c)}});
  }
  return {{"d", p.d()}, {"size", p.size()}, {"coeffs", std::move(coeffs)}};
}

json to_json(const DomainSpec& spec) {
  json blocks = json::array();
  for (const auto& b : spec.blocks) blocks.push_back(to_json(b));
  json j = {{"name", spec.name}, {"d", spec.d}, {"blocks", std::move(blocks)}};
  if (spec.bounds) j["bounds"] = *spec.bounds;
  return j;
}

json to_json(const Certificate& cert) {
  json h = json::array();
  for (const auto& hj : cert.h) h.push_back(to_json(hj));
  return {{"d", cert.d},         {"gamma", cert.gamma},       {"degree", cert.degree},
          {"n0", cert.n0},       {"n", cert.n},               {"h0", to_json(cert.h0)},
          {"h", std::move(h)},   {"residual", cert.residual}, {"slack", cert.slack},
          {"solver_iterations", cert.solver_iterations}};
}

json to_json(const Colligation& col) {
  return {{"A", to_json(col.a)},
          {"B", to_json(col.b)},
          {"C", to_json(col.c)},
          {"D", to_json(col.d)},
          {"alpha", col.d.rows()},
          {"beta", col.d.cols()},
          {"n", col.n},
          {"ell", col.ell},
          {"m", col.m},
          {"provenance",
           {{"degree", col.degree},
            {"certificate_residual", col.certificate_residual},
            {"consistency_residual", col.consistency_residual},
            {"sigma_max", col.sigma_max},
            {"rescaled", col.rescaled},
            {"solver_iterations", col.solver_iterations}}}};
}

json to_json(const DetRep& rep) {
  return {{"K", to_json(rep.k)},
          {"n", rep.n},
          {"q", to_json(rep.q)},
          {"c", rep.c},
          {"identity_residual", rep.identity_residual},
          {"division_remainder", rep.division_remainder},
          {"det_norm", rep.det_norm},
          {"sigma_max", rep.sigma_max},
          {"degree", rep.degree}};
}

Complex complex_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
  return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

Matrix matrix_from_json(const json& j, const std::string& path) {
  const json& rows = array_at(j, path);
  if (rows.empty()) return Matrix(0, 0);
  const std::size_t ncols = array_at(rows[0], path + "[0]").size();
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(ncols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const json& row = array_at(rows[r], rp);
    if (row.size() != ncols) fail(rp, "ragged matrix row");
    for (std::size_t c = 0; c < ncols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(row[c], rp + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Point point_from_json(const json& j, const std::string& path) {
  const json& a = array_at(j, path);
  Point z(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) z(static_cast<Index>(i)) = complex_from_json(a[i], path + "[" + std::to_string(i) + "]");
  return z;
}

MatPoly matpoly_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"d", "rows", "cols", "coeffs"});
  const auto d = static_cast<std::size_t>(count_at(j["d"], path + ".d"));
  const Index rows = count_at(j["rows"], path + ".rows");
  const Index cols = count_at(j["cols"], path + ".cols");
  MatPoly::CoeffMap coeffs;
  const json& cs = array_at(j["coeffs"], path + ".coeffs");
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const std::string cp = path + ".coeffs[" + std::to_string(k) + "]";
    expect_object(cs[k], cp, {"exp", "mat"});
    MultiIndex e = exponent_at(cs[k]["exp"], cp + ".exp", d);
    Matrix m = shaped_matrix(cs[k]["mat"], cp + ".mat", rows, cols);
    if (coeffs.count(e)) fail(cp, "duplicate exponent " + e.to_string());
    coeffs.emplace(std::move(e), std::move(m));
  }
  return MatPoly(d, rows, cols, std::move(coeffs));
}

HermPoly hermpoly_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"d", "size", "coeffs"});
  const auto d = static_cast<std::size_t>(count_at(j["d"], path + ".d"));
  const Index size = count_at(j["size"], path + ".size");
  BivarPoly::CoeffMap coeffs;
  const json& cs = array_at(j["coeffs"], path + ".coeffs");
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const std::string cp = path + ".coeffs[" + std::to_string(k) + "]";
    expect_object(cs[k], cp, {"w", "z", "mat"});
    ExponentPair key{exponent_at(cs[k]["w"], cp + ".w", d), exponent_at(cs[k]["z"], cp + ".z", d)};
    Matrix m = shaped_matrix(cs[k]["mat"], cp + ".mat", size, size);
    if (coeffs.count(key)) fail(cp, "duplicate exponent pair");
    coeffs.emplace(std::move(key), std::move(m));
  }
  try {
    return HermPoly::from_bivar(BivarPoly(d, size, size, std::move(coeffs)));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

DomainSpec domain_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"d", "blocks"}, {"name", "bounds"});
  const auto d = static_cast<std::size_t>(count_at(j["d"], path + ".d"));
  std::vector<MatPoly> blocks;
  const json& bs = array_at(j["blocks"], path + ".blocks");
  for (std::size_t k = 0; k < bs.size(); ++k) blocks.push_back(matpoly_from_json(bs[k], path + ".blocks[" + std::to_string(k) + "]"));
  DomainSpec spec;
  spec.d = d;
  spec.blocks = std::move(blocks);
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail(path + ".name", "expected a string");
    spec.name = j["name"].get<std::string>();
  }
  if (j.contains("bounds")) {
    std::vector<double> b;
    const json& a = array_at(j["bounds"], path + ".bounds");
    for (std::size_t k = 0; k < a.size(); ++k) b.push_back(number_at(a[k], path + ".bounds[" + std::to_string(k) + "]"));
    spec.bounds = std::move(b);
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return spec;
}

Colligation colligation_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"A", "B", "C", "D", "alpha", "beta", "n", "ell", "m"}, {"provenance"});
  Colligation col;
  col.n = counts_at(j["n"], path + ".n");
  col.ell = counts_at(j["ell"], path + ".ell");
  col.m = counts_at(j["m"], path + ".m");
  if (col.ell.size() != col.n.size() || col.m.size() != col.n.size()) fail(path, "n, ell and m differ in length");
  const Index alpha = count_at(j["alpha"], path + ".alpha");
  const Index beta = count_at(j["beta"], path + ".beta");
  Index mn = 0;
  Index ln = 0;
  for (std::size_t i = 0; i < col.n.size(); ++i) {
    mn += col.m[i] * col.n[i];
    ln += col.ell[i] * col.n[i];
  }
  col.a = shaped_matrix(j["A"], path + ".A", mn, ln);
  col.b = shaped_matrix(j["B"], path + ".B", mn, beta);
  col.c = shaped_matrix(j["C"], path + ".C", alpha, ln);
  col.d = shaped_matrix(j["D"], path + ".D", alpha, beta);
  if (j.contains("provenance")) {
    const json& p = j["provenance"];
    const std::string pp = path + ".provenance";
    expect_object(p, pp, {}, {"degree", "certificate_residual", "consistency_residual", "sigma_max", "rescaled",
                               "solver_iterations"});
    if (p.contains("degree")) col.degree = static_cast<int>(integer_at(p["degree"], pp + ".degree"));
    if (p.contains("certificate_residual")) col.certificate_residual = number_at(p["certificate_residual"], pp);
    if (p.contains("consistency_residual")) col.consistency_residual = number_at(p["consistency_residual"], pp);
    if (p.contains("sigma_max")) col.sigma_max = number_at(p["sigma_max"], pp);
    if (p.contains("rescaled")) col.rescaled = p["rescaled"].get<bool>();
    if (p.contains("solver_iterations")) col.solver_iterations = static_cast<int>(integer_at(p["solver_iterations"], pp));
  }
  return col;
}

DetRep detrep_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"K", "n", "q", "c"},
                {"identity_residual", "division_remainder", "det_norm", "sigma_max", "degree"});
  DetRep rep;
  rep.k = matrix_from_json(j["K"], path + ".K");
  rep.n = counts_at(j["n"], path + ".n");
  rep.q = matpoly_from_json(j["q"], path + ".q");
  rep.c = number_at(j["c"], path + ".c");
  if (j.contains("identity_residual")) rep.identity_residual = number_at(j["identity_residual"], path);
  if (j.contains("division_remainder")) rep.division_remainder = number_at(j["division_remainder"], path);
  if (j.contains("det_norm")) rep.det_norm = number_at(j["det_norm"], path);
  if (j.contains("sigma_max")) rep.sigma_max = number_at(j["sigma_max"], path);
  if (j.contains("degree")) rep.degree = static_cast<int>(integer_at(j["degree"], path + ".degree"));
  return rep;
}

Certificate certificate_from_json(const json& j, const std::string& path) {
  expect_object(j, path, {"d", "gamma", "degree", "n0", "n", "h0", "h"}, {"residual", "slack", "solver_iterations"});
  Certificate cert;
  cert.d = static_cast<std::size_t>(count_at(j["d"], path + ".d"));
  cert.gamma = count_at(j["gamma"], path + ".gamma");
  cert.degree = static_cast<int>(integer_at(j["degree"], path + ".degree"));
  cert.n0 = count_at(j["n0"], path + ".n0");
  cert.n = counts_at(j["n"], path + ".n");
  cert.h0 = matpoly_from_json(j["h0"], path + ".h0");
  const json& h = array_at(j["h"], path + ".h");
  for (std::size_t k = 0; k < h.size(); ++k) cert.h.push_back(matpoly_from_json(h[k], path + ".h[" + std::to_string(k) + "]"));
  if (cert.h.size() != cert.n.size()) fail(path, "h and n differ in length");
  if (cert.h0.rows() != cert.n0 || cert.h0.cols() != cert.gamma) fail(path + ".h0", "shape differs from n0 x gamma");
  if (j.contains("residual")) cert.residual = number_at(j["residual"], path + ".residual");
  if (j.contains("slack")) cert.slack = number_at(j["slack"], path + ".slack");
  if (j.contains("solver_iterations")) {
    cert.solver_iterations = static_cast<int>(integer_at(j["solver_iterations"], path + ".solver_iterations"));
  }
  return cert;
}

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError(file.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(file.string() + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error(file.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

MatPoly parse_poly(const std::filesystem::path& file) { return matpoly_from_json(read_json_file(file), file.string()); }

void emit_poly(const MatPoly& p, const std::filesystem::path& file) { write_json_file(file, to_json(p)); }

Point parse_point(const std::string& text) {
  std::vector<Complex> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    try {
      std::size_t used = 0;
      const double re = std::stod(item.substr(0, comma), &used);
      double im = 0.0;
      if (comma != std::string::npos) im = std::stod(item.substr(comma + 1));
      coords.emplace_back(re, im);
    } catch (const std::exception&) {
      throw FormatError("point '" + text + "': cannot parse coordinate '" + item + "'");
    }
  }
  if (coords.empty()) throw FormatError("point '" + text + "' is empty");
  Point z(static_cast<Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) z(static_cast<Index>(i)) = coords[i];
  return z;
}

}  // namespace agler::io
