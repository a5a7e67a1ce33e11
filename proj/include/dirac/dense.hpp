#pragma once

#include "scalar.hpp"

#include <cstddef>
#include <vector>

namespace dirac::dense {

using Vector = std::vector<Scalar>;
/// Row-major list of rows.
using Matrix = std::vector<Vector>;

struct Rref {
  Matrix rows;                      // nonzero rows of the reduced echelon form
  std::vector<std::size_t> pivots;  // pivot column of each row
};

inline Rref rref(Matrix m, std::size_t cols) {
  Rref out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    Scalar inv = m[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Scalar f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

inline std::size_t width(const Matrix &m, std::size_t fallback = 0) { return m.empty() ? fallback : m[0].size(); }

inline std::size_t rank(const Matrix &m) { return rref(m, width(m)).rows.size(); }

/// Basis of {x : m x = 0}, for an m with `cols` columns.
inline Matrix nullspace(const Matrix &m, std::size_t cols) {
  Rref e = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  Matrix basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v(cols, Scalar(0));
    v[f] = Scalar(1);
    for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.rows[k][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Canonical basis (reduced echelon rows) of the span of the given vectors of length `dim`.
inline Matrix span(const Matrix &vectors, std::size_t dim) { return rref(vectors, dim).rows; }

inline bool in_span(const Matrix &basis, const Vector &v) {
  Matrix m = basis;
  m.push_back(v);
  return rank(m) == rank(basis);
}

inline bool same_span(const Matrix &a, const Matrix &b, std::size_t dim) {
  return span(a, dim) == span(b, dim);
}

inline Vector combine(const Matrix &vectors, const Vector &coeffs, std::size_t dim) {
  Vector out(dim, Scalar(0));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    for (std::size_t j = 0; j < dim; ++j) out[j] += coeffs[k] * vectors[k][j];
  }
  return out;
}

} // namespace dirac::dense
