#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "agler/certificate.hpp"
#include "agler/detrep.hpp"
#include "agler/domains.hpp"
#include "agler/realization.hpp"

namespace agler::io {

using json = nlohmann::ordered_json;

/// Malformed input; the message names the JSON path or file position.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json to_json(Complex c);
json to_json(const Matrix& m);
json to_json(const Point& z);
json to_json(const MatPoly& p);
json to_json(const HermPoly& p);
json to_json(const DomainSpec& spec);
json to_json(const Certificate& cert);
json to_json(const Colligation& col);
json to_json(const DetRep& rep);

// `path` prefixes error messages, e.g. "Q.coeffs[2].exp".
Complex complex_from_json(const json& j, const std::string& path);
Matrix matrix_from_json(const json& j, const std::string& path);
Point point_from_json(const json& j, const std::string& path);
MatPoly matpoly_from_json(const json& j, const std::string& path = "$");
HermPoly hermpoly_from_json(const json& j, const std::string& path = "$");
DomainSpec domain_from_json(const json& j, const std::string& path = "$");
Colligation colligation_from_json(const json& j, const std::string& path = "$");
DetRep detrep_from_json(const json& j, const std::string& path = "$");
Certificate certificate_from_json(const json& j, const std::string& path = "$");

/// Reads and parses a file; parse errors carry the byte position.
json read_json_file(const std::filesystem::path& file);
void write_json_file(const std::filesystem::path& file, const json& j);

MatPoly parse_poly(const std::filesystem::path& file);
void emit_poly(const MatPoly& p, const std::filesystem::path& file);

/// "re,im;re,im;..." with one entry per coordinate; "re" alone means im = 0.
Point parse_point(const std::string& text);

}  // namespace agler::io
