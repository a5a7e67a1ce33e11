#pragma once

// Lagrangian and isotropic families represented by polynomial frames, with the generic
// (rational-function-field) linear algebra that underlies membership, equality, products,
// stretches and kernels.

#include "cartan.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirac {

/// Coordinate chart R^n with named coordinates, plus the coefficient field mode.
struct Space {
  std::vector<std::string> coords;
  Field field = Field::rational;

  std::size_t dim() const { return coords.size(); }
  static Space standard(std::size_t n, Field f = Field::rational) { return {default_names(n), f}; }
  friend bool operator==(const Space &, const Space &) = default;

  Polynomial parse(std::string_view text) const { return parse_polynomial(text, coords, field); }
  Polynomial zero() const { return Polynomial(dim()); }
  Polynomial one() const { return Polynomial::one(dim()); }
  Polynomial var(std::size_t i) const { return Polynomial::variable(dim(), i); }
  std::size_t index_of(const std::string &name) const {
    for (std::size_t k = 0; k < coords.size(); ++k)
      if (coords[k] == name) return k;
    throw IndexOutOfRange("unknown coordinate '" + name + "'");
  }
};

/// Human-readable section, e.g. "d/dx2 + x1*d/dx3 - dx1".
inline std::string section_text(const GenSection &s, const std::vector<std::string> &names) {
  std::string out;
  auto emit = [&](const Polynomial &c, const std::string &basis) {
    if (c.is_zero()) return;
    std::string coef = c.str(names);
    bool neg = false;
    if (c.size() == 1 && coef[0] == '-') {
      neg = true;
      coef.erase(0, 1);
    }
    std::string term;
    if (coef == "1") term = basis;
    else if (c.size() == 1) term = coef + "*" + basis;
    else term = "(" + coef + ")*" + basis;
    if (out.empty()) out = neg ? "-" + term : term;
    else out += (neg ? " - " : " + ") + term;
  };
  for (std::size_t k = 0; k < s.vec.size(); ++k) emit(s.vec[k], "d/d" + names.at(k));
  for (std::size_t k = 0; k < s.cov.size(); ++k) emit(s.cov[k], "d" + names.at(k));
  return out.empty() ? "0" : out;
}

inline void require_same_space(const Space &a, const Space &b, const char *what) {
  if (a.field != b.field) throw FieldModeError(std::string("mixed field modes in ") + what);
  if (a.coords != b.coords) throw DimensionMismatch(std::string("operands of ") + what + " live on different coordinate spaces");
}

/// 2d x k matrix whose columns are the stacked components of the sections.
inline PolyMatrix sections_matrix(const std::vector<GenSection> &frame, std::size_t dim, std::size_t nvars) {
  std::vector<PolyVector> cols;
  cols.reserve(frame.size());
  for (const auto &s : frame) {
    if (s.dim() != dim || s.nvars() != nvars) throw DimensionMismatch("section does not match the frame dimensions");
    cols.push_back(s.components());
  }
  return PolyMatrix::from_columns(cols, 2 * dim, nvars);
}

inline GenSection normalize_section(const GenSection &s) { return GenSection::from_components(normalize_vector(s.components())); }

/// First generically independent sections, in input order.
inline std::vector<GenSection> prune(const std::vector<GenSection> &frame, std::size_t dim, std::size_t nvars) {
  if (frame.empty()) return {};
  std::vector<GenSection> out;
  for (auto j : independent_columns(sections_matrix(frame, dim, nvars))) out.push_back(frame[j]);
  return out;
}

/// Row vectors w with w · s = 0 for every section s; they cut out the generic span of the frame.
inline std::vector<PolyVector> annihilator(const std::vector<GenSection> &frame, std::size_t dim, std::size_t nvars) {
  if (frame.empty()) {
    std::vector<PolyVector> all;
    for (std::size_t k = 0; k < 2 * dim; ++k) {
      PolyVector e(2 * dim, Polynomial(nvars));
      e[k] = Polynomial::one(nvars);
      all.push_back(e);
    }
    return all;
  }
  return generic_kernel(sections_matrix(frame, dim, nvars).transpose());
}

struct Membership {
  bool member = true;
  Polynomial residual;  // first nonvanishing annihilator pairing, zero when a member
};

inline Membership member_of(const std::vector<PolyVector> &annihilator_rows, const GenSection &a) {
  PolyVector comps = a.components();
  for (const auto &w : annihilator_rows) {
    Polynomial acc(a.nvars());
    for (std::size_t k = 0; k < comps.size(); ++k)
      if (!w[k].is_zero() && !comps[k].is_zero()) acc += w[k] * comps[k];
    if (!acc.is_zero()) return {false, acc};
  }
  return {true, Polynomial(a.nvars())};
}

/// A frame of sections of the generalized tangent bundle over a coordinate space. Construction
/// prunes the frame to generically independent sections.
class Family {
public:
  Family() = default;
  Family(Space space, std::vector<GenSection> frame, std::string label = {})
      : space_(std::move(space)), label_(std::move(label)) {
    frame_ = prune(frame, space_.dim(), space_.dim());
  }

  const Space &space() const { return space_; }
  std::size_t n() const { return space_.dim(); }
  const std::vector<GenSection> &frame() const { return frame_; }
  std::size_t rank() const { return frame_.size(); }
  const std::string &label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  std::vector<PolyVector> annihilator() const { return dirac::annihilator(frame_, n(), n()); }

  /// First frame pair with nonzero pairing, if any.
  std::optional<std::pair<std::size_t, std::size_t>> isotropy_defect() const {
    for (std::size_t i = 0; i < frame_.size(); ++i)
      for (std::size_t j = i; j < frame_.size(); ++j)
        if (!pairing(frame_[i], frame_[j]).is_zero()) return std::make_pair(i, j);
    return std::nullopt;
  }
  bool is_isotropic() const { return !isotropy_defect(); }
  bool is_lagrangian() const { return rank() == n() && is_isotropic(); }

  /// Throws NotLagrangian unless the frame is isotropic of generic rank n.
  const Family &require_lagrangian(const char *what) const {
    if (rank() != n())
      throw NotLagrangian(std::string(what) + ": generic rank " + std::to_string(rank()) + " differs from " +
                          std::to_string(n()));
    if (auto d = isotropy_defect())
      throw NotLagrangian(std::string(what) + ": frame sections " + std::to_string(d->first + 1) + " and " +
                          std::to_string(d->second + 1) + " pair nontrivially");
    return *this;
  }
  const Family &require_isotropic(const char *what) const {
    if (auto d = isotropy_defect())
      throw NotLagrangian(std::string(what) + ": frame sections " + std::to_string(d->first + 1) + " and " +
                          std::to_string(d->second + 1) + " pair nontrivially");
    return *this;
  }

private:
  Space space_;
  std::vector<GenSection> frame_;
  std::string label_;
};

using LagrangianFamily = Family;
using IsotropicFamily = Family;

inline Membership contains(const Family &f, const GenSection &a) {
  if (a.dim() != f.n() || a.nvars() != f.n()) throw DimensionMismatch("section does not live on the family's space");
  return member_of(f.annihilator(), a);
}

inline bool family_contains(const Family &big, const Family &small) {
  require_same_space(big.space(), small.space(), "family containment");
  auto ann = big.annihilator();
  for (const auto &s : small.frame())
    if (!member_of(ann, s).member) return false;
  return true;
}

/// Generic equality: mutual containment.
inline bool family_equal(const Family &a, const Family &b) {
  return a.rank() == b.rank() && family_contains(a, b) && family_contains(b, a);
}

/// Υ(a_i, a_j, a_k) = ⟨[a_i, a_j], a_k⟩.
inline Polynomial courant_tensor(const Family &f, std::size_t i, std::size_t j, std::size_t k) {
  const auto &fr = f.frame();
  if (i >= fr.size() || j >= fr.size() || k >= fr.size()) throw IndexOutOfRange("Courant tensor frame index out of range");
  return pairing(dorfman(fr[i], fr[j]), fr[k]);
}

struct Involutivity {
  bool involutive = true;
  /// Failing frame indices: a triple (Courant tensor) or a pair (bracket membership).
  std::vector<std::size_t> indices;
  Polynomial residual;
  bool via_courant_tensor = false;
};

/// Bracket closure. Lagrangian frames use the Courant tensor over i < j < k, which is totally
/// skew on Lagrangian families; other frames test membership of every pairwise bracket.
inline Involutivity is_involutive(const Family &f) {
  const auto &fr = f.frame();
  Involutivity out;
  out.residual = Polynomial(f.n());
  if (f.is_lagrangian()) {
    out.via_courant_tensor = true;
    for (std::size_t i = 0; i < fr.size(); ++i)
      for (std::size_t j = i + 1; j < fr.size(); ++j) {
        GenSection b = dorfman(fr[i], fr[j]);
        for (std::size_t k = j + 1; k < fr.size(); ++k) {
          Polynomial r = pairing(b, fr[k]);
          if (r.is_zero()) continue;
          out.involutive = false;
          out.indices = {i, j, k};
          if (sgn(r.leading().coef.re()) < 0 || (sgn(r.leading().coef.re()) == 0 && sgn(r.leading().coef.im()) < 0)) {
            out.indices = {j, i, k};
            r = -r;
          }
          out.residual = r;
          return out;
        }
      }
    return out;
  }
  auto ann = f.annihilator();
  for (std::size_t i = 0; i < fr.size(); ++i)
    for (std::size_t j = 0; j < fr.size(); ++j) {
      Membership m = member_of(ann, dorfman(fr[i], fr[j]));
      if (m.member) continue;
      out.involutive = false;
      out.indices = {i, j};
      out.residual = m.residual;
      return out;
    }
  return out;
}

namespace detail {
/// Sections Σ_j v_j s_j for each coefficient vector v.
inline std::vector<GenSection> combine_sections(const std::vector<PolyVector> &coeffs, const std::vector<GenSection> &frame,
                                                std::size_t dim, std::size_t nvars) {
  std::vector<GenSection> out;
  for (const auto &v : coeffs) {
    GenSection s = GenSection::zero(dim, nvars);
    for (std::size_t j = 0; j < frame.size(); ++j)
      if (!v[j].is_zero()) s += v[j] * frame[j];
    out.push_back(normalize_section(s));
  }
  return out;
}

enum class Block { tangent, cotangent };

/// Fibred product of two frames matching one block: kernel of (s,t) ↦ block(Σ s a − Σ t b),
/// mapped to Σ s a + other-block(Σ t b).
inline std::vector<GenSection> fibred_product(const Family &l, const Family &r, Block match) {
  const std::size_t n = l.n(), kl = l.rank(), kr = r.rank();
  PolyMatrix m(n, kl + kr, n);
  for (std::size_t j = 0; j < kl; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = match == Block::tangent ? l.frame()[j].vec[i] : l.frame()[j].cov[i];
  for (std::size_t j = 0; j < kr; ++j)
    for (std::size_t i = 0; i < n; ++i)
      m(i, kl + j) = -(match == Block::tangent ? r.frame()[j].vec[i] : r.frame()[j].cov[i]);
  std::vector<GenSection> out;
  for (const auto &v : generic_kernel(m)) {
    GenSection s = GenSection::zero(n, n);
    for (std::size_t j = 0; j < kl; ++j)
      if (!v[j].is_zero()) s += v[j] * l.frame()[j];
    for (std::size_t j = 0; j < kr; ++j) {
      if (v[kl + j].is_zero()) continue;
      const GenSection &b = r.frame()[j];
      s += v[kl + j] * (match == Block::tangent ? b.cotangent_part() : b.tangent_part());
    }
    out.push_back(normalize_section(s));
  }
  return out;
}

inline Family checked_product(const Family &l, std::vector<GenSection> frame, const char *what) {
  Family p(l.space(), std::move(frame));
  if (p.rank() != l.n())
    throw ProductNotGenericallyLagrangian(std::string(what) + " has generic rank " + std::to_string(p.rank()) +
                                          " instead of " + std::to_string(l.n()));
  p.require_lagrangian(what);
  return p;
}
} // namespace detail

/// L ⋆ R = { a + pr_{T*}(b) : a ∈ L, b ∈ R, pr_T(a) = pr_T(b) }.
inline Family tangent_product(const Family &l, const Family &r) {
  require_same_space(l.space(), r.space(), "tangent product");
  return detail::checked_product(l, detail::fibred_product(l, r, detail::Block::tangent), "tangent product");
}

/// L ⊛ R = { a + pr_T(b) : a ∈ L, b ∈ R, pr_{T*}(a) = pr_{T*}(b) }.
inline Family cotangent_product(const Family &l, const Family &r) {
  require_same_space(l.space(), r.space(), "cotangent product");
  return detail::checked_product(l, detail::fibred_product(l, r, detail::Block::cotangent), "cotangent product");
}

/// Generic frame of L ∩ I^⊥, as sections of L.
inline std::vector<GenSection> perp_intersection(const Family &l, const std::vector<GenSection> &iso) {
  const std::size_t n = l.n();
  if (iso.empty()) return l.frame();
  PolyMatrix m(iso.size(), l.rank(), n);
  for (std::size_t j = 0; j < iso.size(); ++j)
    for (std::size_t i = 0; i < l.rank(); ++i) m(j, i) = pairing(l.frame()[i], iso[j]);
  return detail::combine_sections(generic_kernel(m), l.frame(), n, n);
}

/// L[I] = L ∩ I^⊥ + I.
inline Family stretch(const Family &l, const Family &iso) {
  require_same_space(l.space(), iso.space(), "stretch");
  iso.require_isotropic("stretch isotropic argument");
  std::vector<GenSection> frame = perp_intersection(l, iso.frame());
  frame.insert(frame.end(), iso.frame().begin(), iso.frame().end());
  Family out(l.space(), std::move(frame));
  if (out.rank() != l.n())
    throw StretchRankDefect("stretch has generic rank " + std::to_string(out.rank()) + " instead of " + std::to_string(l.n()));
  out.require_lagrangian("stretch");
  return out;
}

namespace detail {
inline Family block_kernel(const Family &l, Block zero_block) {
  const std::size_t n = l.n();
  PolyMatrix m(n, l.rank(), n);
  for (std::size_t j = 0; j < l.rank(); ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = zero_block == Block::cotangent ? l.frame()[j].cov[i] : l.frame()[j].vec[i];
  return Family(l.space(), combine_sections(generic_kernel(m), l.frame(), n, n));
}
} // namespace detail

/// K(L) = L ∩ TM.
inline Family kernel(const Family &l) { return detail::block_kernel(l, detail::Block::cotangent); }

/// L ∩ T*M.
inline Family cokernel(const Family &l) { return detail::block_kernel(l, detail::Block::tangent); }

/// Generic span of the union of two frames.
inline Family family_sum(const Family &a, const Family &b) {
  require_same_space(a.space(), b.space(), "family sum");
  std::vector<GenSection> frame = a.frame();
  frame.insert(frame.end(), b.frame().begin(), b.frame().end());
  return Family(a.space(), std::move(frame));
}

/// ℛ_t: multiply every covector part by t.
inline Family rescale_covectors(const Scalar &t, const Family &l) {
  if (t.is_zero()) throw InvalidArgument("covector rescaling needs t != 0");
  std::vector<GenSection> frame;
  for (const auto &s : l.frame()) {
    GenSection c = s;
    for (auto &p : c.cov) p *= t;
    frame.push_back(std::move(c));
  }
  return Family(l.space(), std::move(frame));
}

/// Gauge transformation u + ξ ↦ u + ξ + ι_u ω.
inline Family gauge(const Family &l, const TwoForm &omega) {
  if (omega.dim() != l.n() || omega.nvars() != l.n()) throw DimensionMismatch("gauge two-form has wrong dimensions");
  std::vector<GenSection> frame;
  for (const auto &s : l.frame()) {
    GenSection c = s;
    PolyVector add = omega.flat(s.vec);
    for (std::size_t k = 0; k < l.n(); ++k) c.cov[k] += add[k];
    frame.push_back(std::move(c));
  }
  return Family(l.space(), std::move(frame));
}

inline GenSection conjugate(const GenSection &s, Field field) {
  if (field != Field::gaussian) throw FieldModeError("conjugate called in rational mode");
  return s.conj();
}

inline Family conjugate(const Family &l) {
  std::vector<GenSection> frame;
  for (const auto &s : l.frame()) frame.push_back(conjugate(s, l.space().field));
  return Family(l.space(), std::move(frame));
}

// ---- graph constructors ----

/// Gr(π) = { π^♯(ξ) + ξ }.
inline Family graph_of_bivector(const Space &sp, const Bivector &pi) {
  const std::size_t n = sp.dim();
  if (pi.dim() != n || pi.nvars() != n) throw DimensionMismatch("bivector has wrong dimensions");
  std::vector<GenSection> frame;
  for (std::size_t j = 0; j < n; ++j) {
    GenSection s = GenSection::differential(n, j, n);
    for (std::size_t k = 0; k < n; ++k) s.vec[k] = pi(j, k);
    frame.push_back(s);
  }
  return Family(sp, std::move(frame));
}

/// Gr(ω) = { u + ι_u ω }.
inline Family graph_of_two_form(const Space &sp, const TwoForm &omega) {
  const std::size_t n = sp.dim();
  if (omega.dim() != n || omega.nvars() != n) throw DimensionMismatch("two-form has wrong dimensions");
  std::vector<GenSection> frame;
  for (std::size_t j = 0; j < n; ++j) {
    GenSection s = GenSection::partial(n, j, n);
    for (std::size_t k = 0; k < n; ++k) s.cov[k] = omega(j, k);
    frame.push_back(s);
  }
  return Family(sp, std::move(frame));
}

/// Isotropic family spanned by the given vector fields.
inline Family distribution(const Space &sp, const std::vector<PolyVector> &fields) {
  std::vector<GenSection> frame;
  for (const auto &u : fields) {
    if (u.size() != sp.dim()) throw DimensionMismatch("vector field has wrong length");
    frame.push_back(GenSection::from_vector_field(u));
  }
  return Family(sp, std::move(frame));
}

/// Gr(F) = F ⊕ F°.
inline Family graph_of_distribution(const Space &sp, const std::vector<PolyVector> &fields,
                                    std::optional<std::size_t> declared_rank = std::nullopt) {
  const std::size_t n = sp.dim();
  Family f = distribution(sp, fields);
  if (declared_rank && *declared_rank != f.rank())
    throw RankDefect("distribution has generic rank " + std::to_string(f.rank()) + " but rank " +
                     std::to_string(*declared_rank) + " was declared");
  std::vector<GenSection> frame = f.frame();
  if (!fields.empty()) {
    PolyMatrix m(f.rank(), n, n);
    for (std::size_t i = 0; i < f.rank(); ++i)
      for (std::size_t k = 0; k < n; ++k) m(i, k) = f.frame()[i].vec[k];
    for (auto &xi : generic_kernel(m)) frame.push_back(GenSection::from_one_form(std::move(xi)));
  } else {
    for (std::size_t k = 0; k < n; ++k) frame.push_back(GenSection::differential(n, k, n));
  }
  return Family(sp, std::move(frame));
}

inline Family full_tangent(const Space &sp) {
  std::vector<GenSection> frame;
  for (std::size_t k = 0; k < sp.dim(); ++k) frame.push_back(GenSection::partial(sp.dim(), k, sp.dim()));
  return Family(sp, std::move(frame));
}

inline Family full_cotangent(const Space &sp) {
  std::vector<GenSection> frame;
  for (std::size_t k = 0; k < sp.dim(); ++k) frame.push_back(GenSection::differential(sp.dim(), k, sp.dim()));
  return Family(sp, std::move(frame));
}

namespace detail {
/// Reduced frame over the function field with pivots taken first in block `lead`; returns the
/// n x n matrix of the other block when the family is a graph over `lead` with polynomial entries.
inline std::optional<PolyMatrix> graph_matrix(const Family &l, Block lead) {
  const std::size_t n = l.n();
  if (l.rank() != n) return std::nullopt;
  PolyMatrix rows(n, 2 * n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &s = l.frame()[i];
    for (std::size_t k = 0; k < n; ++k) {
      rows(i, k) = lead == Block::cotangent ? s.cov[k] : s.vec[k];
      rows(i, n + k) = lead == Block::cotangent ? s.vec[k] : s.cov[k];
    }
  }
  Echelon e = fraction_free_rref(rows);
  for (std::size_t k = 0; k < n; ++k)
    if (k >= e.rank() || e.pivot_cols[k] != k) return std::nullopt;
  PolyMatrix out(n, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      auto q = divide_exact(e.reduced(i, n + k), e.pivot);
      if (!q) return std::nullopt;
      out(i, k) = std::move(*q);
    }
  return out;
}
} // namespace detail

/// π with L = Gr(π), when L ∩ TM = 0 and the entries are polynomial.
inline std::optional<Bivector> as_bivector(const Family &l) {
  auto m = detail::graph_matrix(l, detail::Block::cotangent);
  if (!m) return std::nullopt;
  return Bivector(*m);
}

/// ω with L = Gr(ω), when L ∩ T*M = 0 and the entries are polynomial.
inline std::optional<TwoForm> as_two_form(const Family &l) {
  auto m = detail::graph_matrix(l, detail::Block::tangent);
  if (!m) return std::nullopt;
  return TwoForm(*m);
}

} // namespace dirac
