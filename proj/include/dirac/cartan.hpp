#pragma once

// Sections u + ξ of the generalized tangent bundle of R^n, the symmetric pairing and the
// Dorfman bracket, plus two-forms, bivectors and endomorphism fields as n x n matrices.

#include "dense.hpp"
#include "errors.hpp"
#include "poly_matrix.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace dirac {

/// A section u + ξ. `vec` holds u^j, `cov` holds ξ_j. Coefficients may live in a ring whose
/// variable count differs from the fibre dimension (sections along a submanifold).
struct GenSection {
  PolyVector vec;
  PolyVector cov;

  GenSection() = default;
  GenSection(PolyVector v, PolyVector c) : vec(std::move(v)), cov(std::move(c)) {
    if (vec.size() != cov.size()) throw DimensionMismatch("vector and covector parts differ in length");
  }

  static GenSection zero(std::size_t dim, std::size_t nvars) {
    return GenSection(PolyVector(dim, Polynomial(nvars)), PolyVector(dim, Polynomial(nvars)));
  }
  static GenSection partial(std::size_t dim, std::size_t i, std::size_t nvars) {
    GenSection s = zero(dim, nvars);
    s.vec.at(i) = Polynomial::one(nvars);
    return s;
  }
  static GenSection differential(std::size_t dim, std::size_t i, std::size_t nvars) {
    GenSection s = zero(dim, nvars);
    s.cov.at(i) = Polynomial::one(nvars);
    return s;
  }
  static GenSection from_vector_field(PolyVector u) {
    std::size_t nv = u.empty() ? 0 : u[0].nvars();
    PolyVector z(u.size(), Polynomial(nv));
    return GenSection(std::move(u), std::move(z));
  }
  static GenSection from_one_form(PolyVector xi) {
    std::size_t nv = xi.empty() ? 0 : xi[0].nvars();
    PolyVector z(xi.size(), Polynomial(nv));
    return GenSection(std::move(z), std::move(xi));
  }

  std::size_t dim() const { return vec.size(); }
  std::size_t nvars() const { return vec.empty() ? 0 : vec[0].nvars(); }

  bool is_zero() const {
    for (const auto &p : vec)
      if (!p.is_zero()) return false;
    for (const auto &p : cov)
      if (!p.is_zero()) return false;
    return true;
  }

  /// Components stacked as (u^1..u^n, ξ_1..ξ_n).
  PolyVector components() const {
    PolyVector c = vec;
    c.insert(c.end(), cov.begin(), cov.end());
    return c;
  }
  static GenSection from_components(const PolyVector &c) {
    if (c.size() % 2) throw DimensionMismatch("odd component count");
    std::size_t n = c.size() / 2;
    return GenSection(PolyVector(c.begin(), c.begin() + static_cast<long>(n)),
                      PolyVector(c.begin() + static_cast<long>(n), c.end()));
  }

  GenSection &operator+=(const GenSection &o) {
    check_dims(*this, o);
    for (std::size_t k = 0; k < dim(); ++k) {
      vec[k] += o.vec[k];
      cov[k] += o.cov[k];
    }
    return *this;
  }
  GenSection &operator-=(const GenSection &o) {
    check_dims(*this, o);
    for (std::size_t k = 0; k < dim(); ++k) {
      vec[k] -= o.vec[k];
      cov[k] -= o.cov[k];
    }
    return *this;
  }
  friend GenSection operator+(GenSection a, const GenSection &b) { return a += b; }
  friend GenSection operator-(GenSection a, const GenSection &b) { return a -= b; }
  friend GenSection operator*(const Polynomial &f, GenSection a) {
    for (auto &p : a.vec) p = f * p;
    for (auto &p : a.cov) p = f * p;
    return a;
  }
  friend GenSection operator*(const Scalar &c, GenSection a) {
    for (auto &p : a.vec) p *= c;
    for (auto &p : a.cov) p *= c;
    return a;
  }
  GenSection operator-() const { return Scalar(-1) * *this; }
  friend bool operator==(const GenSection &a, const GenSection &b) { return a.vec == b.vec && a.cov == b.cov; }

  GenSection tangent_part() const { return from_vector_field(vec); }
  GenSection cotangent_part() const { return from_one_form(cov); }

  GenSection conj() const {
    GenSection s = *this;
    for (auto &p : s.vec) p = p.conj();
    for (auto &p : s.cov) p = p.conj();
    return s;
  }

  dense::Vector evaluate(const std::vector<Scalar> &pt) const {
    dense::Vector v;
    for (const auto &p : vec) v.push_back(p.evaluate(pt));
    for (const auto &p : cov) v.push_back(p.evaluate(pt));
    return v;
  }

  static void check_dims(const GenSection &a, const GenSection &b) {
    if (a.dim() != b.dim() || a.nvars() != b.nvars()) throw DimensionMismatch("sections have different dimensions");
  }
};

/// ⟨u+ξ, v+η⟩ = ξ(v) + η(u).
inline Polynomial pairing(const GenSection &a, const GenSection &b) {
  GenSection::check_dims(a, b);
  Polynomial acc(a.nvars());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (!a.cov[j].is_zero() && !b.vec[j].is_zero()) acc += a.cov[j] * b.vec[j];
    if (!b.cov[j].is_zero() && !a.vec[j].is_zero()) acc += b.cov[j] * a.vec[j];
  }
  return acc;
}

namespace detail {
inline void require_ambient(const GenSection &a) {
  if (a.dim() != a.nvars())
    throw DimensionMismatch("bracket needs sections whose fibre dimension equals the variable count");
}
} // namespace detail

/// Derivative of f along the vector field u.
inline Polynomial directional(const PolyVector &u, const Polynomial &f) {
  Polynomial acc(f.nvars());
  if (f.is_constant()) return acc;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (!u[j].is_zero()) acc += u[j] * f.partial(j);
  return acc;
}

/// Lie bracket of vector fields.
inline PolyVector lie_bracket(const PolyVector &u, const PolyVector &v) {
  PolyVector out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(directional(u, v[k]) - directional(v, u[k]));
  return out;
}

/// ι_v dξ, with (dξ)_{jk} = ∂_j ξ_k − ∂_k ξ_j.
inline PolyVector contract_d(const PolyVector &v, const PolyVector &xi) {
  std::size_t n = xi.size();
  std::size_t nv = xi.empty() ? 0 : xi[0].nvars();
  PolyVector out(n, Polynomial(nv));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j].is_zero()) continue;
      Polynomial w = xi[k].partial(j) - xi[j].partial(k);
      if (!w.is_zero()) out[k] += v[j] * w;
    }
  return out;
}

/// ℒ_u η = ι_u dη + d(η(u)).
inline PolyVector lie_derivative_form(const PolyVector &u, const PolyVector &eta) {
  std::size_t n = eta.size();
  std::size_t nv = eta.empty() ? 0 : eta[0].nvars();
  Polynomial contraction(nv);
  for (std::size_t j = 0; j < n; ++j)
    if (!u[j].is_zero() && !eta[j].is_zero()) contraction += eta[j] * u[j];
  PolyVector out = contract_d(u, eta);
  for (std::size_t k = 0; k < n; ++k) out[k] += contraction.partial(k);
  return out;
}

/// Dorfman bracket [u+ξ, v+η] = [u,v] + ℒ_u η − ι_v dξ.
inline GenSection dorfman(const GenSection &a, const GenSection &b) {
  GenSection::check_dims(a, b);
  detail::require_ambient(a);
  PolyVector vec = lie_bracket(a.vec, b.vec);
  PolyVector cov = lie_derivative_form(a.vec, b.cov);
  PolyVector tail = contract_d(b.vec, a.cov);
  for (std::size_t k = 0; k < cov.size(); ++k) cov[k] -= tail[k];
  return GenSection(std::move(vec), std::move(cov));
}

/// Square polynomial matrix with a declared symmetry type.
class SquareField {
public:
  SquareField() = default;
  explicit SquareField(PolyMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionMismatch("square matrix expected");
  }
  std::size_t dim() const { return m_.rows(); }
  std::size_t nvars() const { return m_.nvars(); }
  const PolyMatrix &matrix() const { return m_; }
  const Polynomial &operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  bool is_antisymmetric() const {
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i; j < dim(); ++j)
        if (!(m_(i, j) + m_(j, i)).is_zero()) return false;
    return true;
  }

protected:
  PolyMatrix m_;
};

namespace detail {
inline PolyMatrix antisym_from_pairs(std::size_t n, std::size_t nvars,
                                     const std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> &terms) {
  PolyMatrix m(n, n, nvars);
  for (const auto &[i, j, c] : terms) {
    if (i >= n || j >= n) throw IndexOutOfRange("wedge index out of range");
    m(i, j) += c;
    m(j, i) -= c;
  }
  return m;
}
} // namespace detail

/// Two-form ω with ω_{ij} = ω(∂_i, ∂_j); ω^♭(u) = ι_u ω has components Σ_i u^i ω_{ij}.
class TwoForm : public SquareField {
public:
  TwoForm() = default;
  explicit TwoForm(PolyMatrix m) : SquareField(std::move(m)) {
    if (!is_antisymmetric()) throw InvalidArgument("two-form matrix is not antisymmetric");
  }
  /// Σ c · dx_i ∧ dx_j.
  static TwoForm from_wedges(std::size_t n, std::size_t nvars,
                             const std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> &terms) {
    return TwoForm(detail::antisym_from_pairs(n, nvars, terms));
  }
  PolyVector flat(const PolyVector &u) const { return m_.transpose().apply(u); }
};

/// Bivector π with π^{ij} = π(dx_i, dx_j); π^♯(ξ) = ι_ξ π has components Σ_i ξ_i π^{ij}.
class Bivector : public SquareField {
public:
  Bivector() = default;
  explicit Bivector(PolyMatrix m) : SquareField(std::move(m)) {
    if (!is_antisymmetric()) throw InvalidArgument("bivector matrix is not antisymmetric");
  }
  /// Σ c · ∂_i ∧ ∂_j.
  static Bivector from_wedges(std::size_t n, std::size_t nvars,
                              const std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> &terms) {
    return Bivector(detail::antisym_from_pairs(n, nvars, terms));
  }
  PolyVector sharp(const PolyVector &xi) const { return m_.transpose().apply(xi); }
};

/// Endomorphism field N with N(∂_j) = Σ_i N_{ij} ∂_i, i.e. column j holds N(∂_j).
class Endomorphism : public SquareField {
public:
  Endomorphism() = default;
  explicit Endomorphism(PolyMatrix m) : SquareField(std::move(m)) {}
  static Endomorphism identity(std::size_t n, std::size_t nvars) { return Endomorphism(PolyMatrix::identity(n, nvars)); }

  PolyVector apply(const PolyVector &u) const { return m_.apply(u); }
  /// Dual action on one-forms: (N*ξ)(u) = ξ(N u).
  PolyVector dual(const PolyVector &xi) const { return m_.transpose().apply(xi); }
  Endomorphism power(unsigned k) const {
    PolyMatrix r = PolyMatrix::identity(dim(), nvars());
    for (unsigned j = 0; j < k; ++j) r = r * m_;
    return Endomorphism(r);
  }
  /// (N, N*)(u + ξ) = N u + N* ξ.
  GenSection act(const GenSection &s) const { return GenSection(apply(s.vec), dual(s.cov)); }
};

} // namespace dirac
