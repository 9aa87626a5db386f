#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agler/herm_poly.hpp"
#include "agler/mat_poly.hpp"

namespace agler {

/// D_P = {z : ||P_1(z) (+) ... (+) P_k(z)|| < 1}.
struct DomainSpec {
  std::size_t d = 0;
  /// P_i, of shape l_i x m_i.
  std::vector<MatPoly> blocks;
  /// Preset string ("polydisk:2", ...) or "custom".
  std::string name = "custom";
  /// Per-variable bounds |z_i| <= bounds[i] on the closed domain, when known.
  std::optional<std::vector<double>> bounds;
  /// Presets satisfy the norm-limit approximation hypothesis of the
  /// realization theorem; custom specs carry it unchecked.
  bool approximation_hypothesis_checked = false;

  /// Throws DimensionMismatch/ShapeMismatch on inconsistent blocks.
  void validate() const;
  Index total_rows() const;
  Index total_cols() const;
  /// Largest total degree over the blocks.
  int max_block_degree() const;
  /// sum_i l_i n_i and sum_i m_i n_i for a multiplicity tuple.
  Index weighted_rows(const std::vector<Index>& n) const;
  Index weighted_cols(const std::vector<Index>& n) const;
};

enum class PresetKind { kPolydisk, kCartan1, kCartan2, kCartan3 };

struct Preset {
  PresetKind kind = PresetKind::kPolydisk;
  int a = 1;
  /// Column count of cartan1; unused otherwise.
  int b = 1;
};

/// Parses "polydisk:d", "cartan1:LxM", "cartan2:m", "cartan3:m".
Preset parse_preset(const std::string& text);
std::string preset_name(const Preset& preset);

/// Cartan coordinates are numbered row-major over the independent entries
/// (all entries for type I, r <= s for type II, r < s for type III).
DomainSpec make_preset(const Preset& preset);
DomainSpec make_preset(const std::string& text);

/// Custom domain from explicit blocks.
DomainSpec make_domain(std::size_t d, std::vector<MatPoly> blocks);

/// Block diagonal P(z) = (+) P_i(z).
Matrix assembled_value(const DomainSpec& spec, const Point& z);
/// (+) (P_i(z) (x) I_{n_i}).
Matrix weighted_value(const DomainSpec& spec, const std::vector<Index>& n, const Point& z);

/// ||P(z)||, the largest singular value.
double p_norm_at(const DomainSpec& spec, const Point& z);

/// I_{m_i} - P_i^*(w) P_i(z) for every block.
std::vector<HermPoly> defect_polys(const DomainSpec& spec);

/// count points with ||P(z)|| <= 1 - margin: uniform draws from the box
/// given by spec.bounds, pulled toward 0 by bisection when outside.
/// Throws std::invalid_argument when spec.bounds is unset.
std::vector<Point> sample_interior(const DomainSpec& spec, int count, double margin,
                                   std::uint64_t seed);

}  // namespace agler
