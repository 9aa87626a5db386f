#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace agler {

/// Exponent vector of a monomial z^alpha = z_1^alpha_1 ... z_d^alpha_d.
class MultiIndex {
 public:
  MultiIndex() = default;
  /// The zero exponent in d variables.
  explicit MultiIndex(std::size_t d) : exps_(d, 0) {}
  MultiIndex(std::initializer_list<int> exps);
  explicit MultiIndex(std::vector<int> exps);

  static MultiIndex unit(std::size_t d, std::size_t i);

  std::size_t size() const { return exps_.size(); }
  int operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<int>& exponents() const { return exps_; }
  int total_degree() const;
  bool is_zero() const { return total_degree() == 0; }

  /// True when every entry of *this is <= the matching entry of other.
  bool divides(const MultiIndex& other) const;

  MultiIndex operator+(const MultiIndex& other) const;
  /// Requires other.divides(*this).
  MultiIndex operator-(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string to_string() const;

 private:
  std::vector<int> exps_;
};

/// Graded lexicographic order: total degree first, then lexicographic on
/// the exponent vector, so z_1 > z_2 > ... > z_d within a degree.
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// All monomials in d variables of total degree <= degree, ascending grlex.
std::vector<MultiIndex> monomials_up_to(std::size_t d, int degree);

}  // namespace agler
