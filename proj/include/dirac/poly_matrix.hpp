#pragma once

#include "dense.hpp"
#include "errors.hpp"
#include "polynomial.hpp"

#include <numeric>
#include <vector>

namespace dirac {

using PolyVector = std::vector<Polynomial>;

/// Dense rectangular matrix of polynomials sharing one variable count.
class PolyMatrix {
public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t nvars)
      : rows_(rows), cols_(cols), nvars_(nvars), data_(rows * cols, Polynomial(nvars)) {}

  static PolyMatrix from_columns(const std::vector<PolyVector> &columns, std::size_t rows, std::size_t nvars) {
    PolyMatrix m(rows, columns.size(), nvars);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw DimensionMismatch("column length differs from row count");
      for (std::size_t i = 0; i < rows; ++i) m.set(i, j, columns[j][i]);
    }
    return m;
  }
  static PolyMatrix from_rows(const std::vector<PolyVector> &rows, std::size_t cols, std::size_t nvars) {
    PolyMatrix m(rows.size(), cols, nvars);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("row length differs from column count");
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }
  static PolyMatrix identity(std::size_t n, std::size_t nvars) {
    PolyMatrix m(n, n, nvars);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Polynomial::one(nvars));
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nvars() const { return nvars_; }

  const Polynomial &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Polynomial &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Polynomial p) {
    if (p.nvars() != nvars_) throw DimensionMismatch("matrix entry has wrong variable count");
    data_[i * cols_ + j] = std::move(p);
  }

  PolyVector column(std::size_t j) const {
    PolyVector v;
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }
  PolyVector row(std::size_t i) const {
    PolyVector v;
    for (std::size_t j = 0; j < cols_; ++j) v.push_back((*this)(i, j));
    return v;
  }
  PolyMatrix transpose() const {
    PolyMatrix t(cols_, rows_, nvars_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  PolyVector apply(const PolyVector &v) const {
    if (v.size() != cols_) throw DimensionMismatch("vector length differs from column count");
    PolyVector out(rows_, Polynomial(nvars_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend PolyMatrix operator*(const PolyMatrix &a, const PolyMatrix &b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
    PolyMatrix c(a.rows_, b.cols_, a.nvars_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend bool operator==(const PolyMatrix &a, const PolyMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.nvars_ == b.nvars_ && a.data_ == b.data_;
  }

  dense::Matrix evaluate(const std::vector<Scalar> &pt) const {
    dense::Matrix m(rows_, dense::Vector(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m[i][j] = (*this)(i, j).evaluate(pt);
    return m;
  }

private:
  std::size_t rows_ = 0, cols_ = 0, nvars_ = 0;
  std::vector<Polynomial> data_;
};

/// Result of fraction-free Gauss-Jordan elimination. Every pivot entry equals `pivot`
/// and every entry is, up to sign, a minor of the input, so the rational-function RREF
/// is `reduced / pivot`.
struct Echelon {
  PolyMatrix reduced;
  std::vector<std::size_t> pivot_cols;
  Polynomial pivot;
  std::size_t rank() const { return pivot_cols.size(); }
};

namespace detail {
inline Polynomial exact_quotient(const Polynomial &f, const Polynomial &g) {
  if (g.is_constant() && g.constant_term().is_one()) return f;
  auto q = divide_exact(f, g);
  if (!q) throw Error("internal error: non-exact division in fraction-free elimination");
  return std::move(*q);
}
inline std::pair<std::size_t, unsigned> pivot_cost(const Polynomial &p) { return {p.size(), p.degree()}; }
} // namespace detail

inline Echelon fraction_free_rref(PolyMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols(), n = m.nvars();
  Echelon e;
  Polynomial prev = Polynomial::one(n);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (m(i, c).is_zero()) continue;
      if (best == rows || detail::pivot_cost(m(i, c)) < detail::pivot_cost(m(best, c))) best = i;
    }
    if (best == rows) continue;
    if (best != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(best, j), m(r, j));
    const Polynomial piv = m(r, c);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Polynomial f = m(i, c);
      for (std::size_t j = 0; j < cols; ++j) {
        if (j == c) continue;
        Polynomial v = piv * m(i, j);
        if (!f.is_zero() && !m(r, j).is_zero()) v -= f * m(r, j);
        m(i, j) = detail::exact_quotient(v, prev);
      }
      m(i, c) = Polynomial(n);
    }
    prev = piv;
    e.pivot_cols.push_back(c);
    ++r;
  }
  e.pivot = prev;
  e.reduced = std::move(m);
  return e;
}

inline std::size_t generic_rank(const PolyMatrix &m) { return fraction_free_rref(m).rank(); }

inline std::size_t rank_at(const PolyMatrix &m, const std::vector<Scalar> &pt) { return dense::rank(m.evaluate(pt)); }

/// Scale a polynomial vector to a canonical representative of its line over the
/// rational function field: common monomial and detectable polynomial factors removed,
/// denominators cleared, integer content removed, leading coefficient positive real.
inline PolyVector normalize_vector(PolyVector v) {
  std::size_t first = 0;
  while (first < v.size() && v[first].is_zero()) ++first;
  if (first == v.size()) return v;
  const std::size_t n = v[first].nvars();

  Exponents common;
  for (const auto &p : v)
    for (const auto &t : p.terms()) {
      if (common.empty()) {
        common = t.exp;
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) common[k] = std::min(common[k], t.exp[k]);
    }
  if (total_degree(common) > 0) {
    Polynomial m = Polynomial::monomial(n, common, Scalar(1));
    for (auto &p : v)
      if (!p.is_zero()) p = *divide_exact(p, m);
  }

  // Remove a common non-monomial factor when one entry divides all the others.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v[k].is_zero() && v[k].degree() > 0) order.push_back(k);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::make_pair(v[a].degree(), v[a].size()) < std::make_pair(v[b].degree(), v[b].size());
    });
    for (std::size_t k : order) {
      const Polynomial g = v[k];
      PolyVector q;
      bool ok = true;
      for (const auto &p : v) {
        if (p.is_zero()) {
          q.push_back(p);
          continue;
        }
        auto d = divide_exact(p, g);
        if (!d) {
          ok = false;
          break;
        }
        q.push_back(std::move(*d));
      }
      if (ok) {
        v = std::move(q);
        changed = true;
        break;
      }
    }
  }

  mpz_class lcm_den = 1;
  for (const auto &p : v)
    for (const auto &t : p.terms()) {
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), t.coef.re().get_den_mpz_t());
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), t.coef.im().get_den_mpz_t());
    }
  if (lcm_den != 1)
    for (auto &p : v) p *= Scalar(mpq_class(lcm_den));

  auto lead = v[first].leading().coef;
  if (!lead.is_real())
    for (auto &p : v) p *= lead.conj();

  mpz_class g = 0;
  for (const auto &p : v)
    for (const auto &t : p.terms()) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.re().get_num_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.im().get_num_mpz_t());
    }
  if (sgn(v[first].leading().coef.re()) < 0) g = -g;
  if (g != 1)
    for (auto &p : v) p *= Scalar(mpq_class(1, 1) / mpq_class(g));
  return v;
}

/// Polynomial vectors spanning the kernel of `m` over the rational function field.
inline std::vector<PolyVector> generic_kernel(const PolyMatrix &m) {
  const std::size_t cols = m.cols(), n = m.nvars();
  Echelon e = fraction_free_rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<PolyVector> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    PolyVector v(cols, Polynomial(n));
    v[f] = e.pivot;
    for (std::size_t k = 0; k < e.rank(); ++k) v[e.pivot_cols[k]] = -e.reduced(k, f);
    out.push_back(normalize_vector(std::move(v)));
  }
  return out;
}

/// Column indices of the first generically independent columns, in order.
inline std::vector<std::size_t> independent_columns(const PolyMatrix &m) { return fraction_free_rref(m).pivot_cols; }

} // namespace dirac
