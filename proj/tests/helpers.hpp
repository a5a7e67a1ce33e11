#pragma once

#include <dirac/family.hpp>

#include <string>
#include <vector>

namespace th {

using namespace dirac;

inline Polynomial P(const std::string &s, std::size_t n, Field f = Field::rational) {
  return parse_polynomial(s, default_names(n), f);
}

inline PolyVector V(const std::vector<std::string> &comps, std::size_t n, Field f = Field::rational) {
  PolyVector v;
  for (const auto &c : comps) v.push_back(P(c, n, f));
  return v;
}

/// Section from component strings; an empty list means the zero part.
inline GenSection S(const std::vector<std::string> &vec, const std::vector<std::string> &cov, std::size_t n,
                    Field f = Field::rational) {
  GenSection s = GenSection::zero(n, n);
  if (!vec.empty()) s.vec = V(vec, n, f);
  if (!cov.empty()) s.cov = V(cov, n, f);
  return s;
}

inline Family F(const std::vector<GenSection> &frame, std::size_t n, Field f = Field::rational) {
  return Family(Space::standard(n, f), frame);
}

inline Bivector biv(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, std::string>> &wedges,
                    Field f = Field::rational) {
  std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> t;
  for (const auto &[i, j, c] : wedges) t.emplace_back(i, j, P(c, n, f));
  return Bivector::from_wedges(n, n, t);
}

inline TwoForm form(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, std::string>> &wedges,
                    Field f = Field::rational) {
  std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> t;
  for (const auto &[i, j, c] : wedges) t.emplace_back(i, j, P(c, n, f));
  return TwoForm::from_wedges(n, n, t);
}

} // namespace th
