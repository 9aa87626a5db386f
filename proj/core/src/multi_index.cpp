#include "agler/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace agler {

MultiIndex::MultiIndex(std::initializer_list<int> exps)
    : MultiIndex(std::vector<int>(exps)) {}

MultiIndex::MultiIndex(std::vector<int> exps) : exps_(std::move(exps)) {
  for (int e : exps_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative exponent");
  }
}

MultiIndex MultiIndex::unit(std::size_t d, std::size_t i) {
  if (i >= d) throw std::out_of_range("MultiIndex::unit: variable out of range");
  MultiIndex m(d);
  m.exps_[i] = 1;
  return m;
}

int MultiIndex::total_degree() const {
  return std::accumulate(exps_.begin(), exps_.end(), 0);
}

bool MultiIndex::divides(const MultiIndex& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] > other.exps_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.size() != size()) throw std::invalid_argument("MultiIndex: size mismatch");
  MultiIndex r = *this;
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!other.divides(*this)) throw std::invalid_argument("MultiIndex: difference is negative");
  MultiIndex r = *this;
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= other.exps_[i];
  return r;
}

std::string MultiIndex::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(exps_[i]);
  }
  return s + "]";
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = a.total_degree();
  const int db = b.total_degree();
  if (da != db) return da < db;
  return std::lexicographical_compare(a.exponents().begin(), a.exponents().end(),
                                      b.exponents().begin(), b.exponents().end());
}

namespace {

void enumerate(std::size_t d, std::size_t pos, int remaining, std::vector<int>& cur,
               std::vector<MultiIndex>& out) {
  if (pos + 1 == d) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    cur[pos] = e;
    enumerate(d, pos + 1, remaining - e, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> monomials_up_to(std::size_t d, int degree) {
  std::vector<MultiIndex> out;
  if (degree < 0) return out;
  if (d == 0) {
    out.emplace_back(0);
    return out;
  }
  std::vector<int> cur(d, 0);
  for (int k = 0; k <= degree; ++k) enumerate(d, 0, k, cur, out);
  std::sort(out.begin(), out.end(), GradedLex{});
  return out;
}

}  // namespace agler
