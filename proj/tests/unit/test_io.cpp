#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "io.hpp"

using namespace agler;
using agler::io::json;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("agler_io_" + name);
}

std::string error_of(const json& j) {
  try {
    io::matpoly_from_json(j);
  } catch (const io::FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Io, ParsesIdentityPolynomial) {
  const json j = json::parse(R"({"d":1,"rows":1,"cols":1,"coeffs":[{"exp":[1],"mat":[[[1.0,0.0]]]}]})");
  EXPECT_EQ(io::matpoly_from_json(j), MatPoly::variable(1, 0));
  EXPECT_EQ(io::to_json(MatPoly::variable(1, 0)), j);
}

TEST(Io, EmptyCoefficientsAreZero) {
  const json j = json::parse(R"({"d":2,"rows":2,"cols":1,"coeffs":[]})");
  const MatPoly p = io::matpoly_from_json(j);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.rows(), 2);
  EXPECT_EQ(io::to_json(p), j);
}

TEST(Io, ExponentLengthErrorNamesEntry) {
  const json j = json::parse(R"({"d":1,"rows":1,"cols":1,"coeffs":[{"exp":[0],"mat":[[[1,0]]]},{"exp":[1,0],"mat":[[[1,0]]]}]})");
  const std::string msg = error_of(j);
  EXPECT_NE(msg.find("coeffs[1].exp"), std::string::npos) << msg;
}

TEST(Io, RejectsUnknownFieldsAndBadShapes) {
  EXPECT_NE(error_of(json::parse(R"({"d":1,"rows":1,"cols":1,"coeffs":[],"x":0})")).find("unknown field"),
            std::string::npos);
  EXPECT_NE(error_of(json::parse(R"({"d":1,"rows":1,"cols":1,"coeffs":[{"exp":[0],"mat":[[[1,0],[2,0]]]}]})")),
            "");
  EXPECT_NE(error_of(json::parse(R"({"d":1,"rows":1,"cols":1,"coeffs":[{"exp":[0],"mat":[[[1,0,0]]]}]})")), "");
  EXPECT_NE(error_of(json::parse(R"({"d":1,"rows":1,"cols":1,"coeffs":[{"exp":[-1],"mat":[[[1,0]]]}]})")), "");
  EXPECT_NE(error_of(json::parse(R"({"d":1,"rows":1,"cols":1})")).find("coeffs"), std::string::npos);
}

TEST(Io, RoundTripIsBitwiseExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  MatPoly::CoeffMap c;
  for (const auto& e : monomials_up_to(3, 2)) {
    Matrix m(2, 3);
    for (Index i = 0; i < m.size(); ++i) m(i) = Complex(u(rng) * 1e-7, u(rng));
    c.emplace(e, m);
  }
  const MatPoly p(3, 2, 3, std::move(c));
  const auto file = temp_file("roundtrip.json");
  io::emit_poly(p, file);
  const MatPoly back = io::parse_poly(file);
  ASSERT_EQ(back.coeffs().size(), p.coeffs().size());
  for (const auto& [e, m] : p.coeffs()) {
    const Matrix& b = back.coeffs().at(e);
    for (Index i = 0; i < m.size(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(b(i).real()), std::bit_cast<std::uint64_t>(m(i).real()));
      EXPECT_EQ(std::bit_cast<std::uint64_t>(b(i).imag()), std::bit_cast<std::uint64_t>(m(i).imag()));
    }
  }
  std::filesystem::remove(file);
}

TEST(Io, HermPolyRoundTrip) {
  const HermPoly h = HermPoly::constant(2, Matrix::Constant(1, 1, 2.0)) - HermPoly::outer(MatPoly::variable(2, 1));
  EXPECT_TRUE(herm_sub(io::hermpoly_from_json(io::to_json(h)), h).is_zero());
}

TEST(Io, NonHermitianTargetRejected) {
  const json j = json::parse(R"({"d":1,"size":1,"coeffs":[{"w":[0],"z":[1],"mat":[[[1,0]]]}]})");
  EXPECT_THROW(io::hermpoly_from_json(j), std::invalid_argument);
}

TEST(Io, DomainRoundTrip) {
  const DomainSpec s = make_preset("cartan1:1x2");
  const DomainSpec back = io::domain_from_json(io::to_json(s));
  ASSERT_EQ(back.blocks.size(), 1u);
  EXPECT_EQ(back.blocks[0], s.blocks[0]);
  EXPECT_EQ(back.d, 2u);
}

TEST(Io, ColligationRoundTrip) {
  Colligation col;
  col.a = Matrix::Constant(2, 2, Complex(0.1, -0.2));
  col.b = Matrix::Constant(2, 1, 0.3);
  col.c = Matrix::Constant(1, 2, Complex(0.0, 0.4));
  col.d = Matrix::Constant(1, 1, 0.5);
  col.n = {1, 1};
  col.ell = {1, 1};
  col.m = {1, 1};
  col.degree = 1;
  const Colligation back = io::colligation_from_json(io::to_json(col));
  EXPECT_EQ(back.a, col.a);
  EXPECT_EQ(back.b, col.b);
  EXPECT_EQ(back.c, col.c);
  EXPECT_EQ(back.d, col.d);
  EXPECT_EQ(back.n, col.n);
  EXPECT_EQ(io::to_json(back), io::to_json(col));
}

TEST(Io, CertificateRoundTrip) {
  Certificate c = std::get<Certificate>(certify(
      HermPoly::constant(1, Matrix::Constant(1, 1, 2.0)) - HermPoly::outer(MatPoly::variable(1, 0)),
      make_preset("polydisk:1")));
  EXPECT_EQ(io::to_json(io::certificate_from_json(io::to_json(c))), io::to_json(c));
}

TEST(Io, ParseErrorsCarryPosition) {
  const auto file = temp_file("broken.json");
  {
    std::ofstream out(file);
    out << "{\"d\": 1,\n \"rows\": }";
  }
  try {
    io::read_json_file(file);
    FAIL() << "expected a parse error";
  } catch (const io::FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos) << e.what();
  }
  std::filesystem::remove(file);
  EXPECT_THROW(io::read_json_file(temp_file("missing.json")), io::FormatError);
}

TEST(Io, ParsePoint) {
  const Point z = io::parse_point("0.5,-0.25;1");
  ASSERT_EQ(z.size(), 2);
  EXPECT_EQ(z(0), Complex(0.5, -0.25));
  EXPECT_EQ(z(1), Complex(1.0, 0.0));
  EXPECT_THROW(io::parse_point("0.5,x"), io::FormatError);
  EXPECT_THROW(io::parse_point(""), io::FormatError);
}
