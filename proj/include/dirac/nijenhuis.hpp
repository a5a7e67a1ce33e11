#pragma once

// Nijenhuis torsion, the Dirac-Nijenhuis compatibility bracket and left/right shifts.

#include <dirac/family.hpp>

#include <optional>
#include <string>

namespace dirac {

using EndomorphismField = Endomorphism;

inline void require_endomorphism_on(const Endomorphism &n, std::size_t dim) {
  if (n.dim() != dim || n.nvars() != dim) throw DimensionMismatch("endomorphism does not match the ambient dimension");
}

/// T(u,v) = [Nu, Nv] − N([Nu, v] + [u, Nv] − N[u, v]).
inline PolyVector torsion(const Endomorphism &n, const PolyVector &u, const PolyVector &v) {
  PolyVector nu = n.apply(u), nv = n.apply(v);
  PolyVector twisted = lie_bracket(nu, v);
  PolyVector b = lie_bracket(u, nv);
  PolyVector nuv = n.apply(lie_bracket(u, v));
  for (std::size_t k = 0; k < twisted.size(); ++k) twisted[k] += b[k] - nuv[k];
  PolyVector out = lie_bracket(nu, nv);
  PolyVector sub = n.apply(twisted);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= sub[k];
  return out;
}

inline PolyVector torsion(const Endomorphism &n, std::size_t i, std::size_t j) {
  const std::size_t d = n.dim();
  if (i >= d || j >= d) throw IndexOutOfRange("torsion index out of range");
  return torsion(n, GenSection::partial(d, i, n.nvars()).vec, GenSection::partial(d, j, n.nvars()).vec);
}

inline bool is_nijenhuis(const Endomorphism &n) {
  for (std::size_t i = 0; i < n.dim(); ++i)
    for (std::size_t j = i + 1; j < n.dim(); ++j)
      for (const auto &c : torsion(n, i, j))
        if (!c.is_zero()) return false;
  return true;
}

/// {u+ξ, v+η}_N = [v, Nu] − N[v, u] − ι_{Nu} dη + ι_u d(N*η). Mixed one-form/vector brackets
/// follow the Dorfman convention [η, w] = −ι_w dη.
inline GenSection dn_bracket(const GenSection &z, const GenSection &a, const Endomorphism &n) {
  GenSection::check_dims(z, a);
  detail::require_ambient(z);
  require_endomorphism_on(n, z.dim());
  PolyVector nu = n.apply(z.vec);
  PolyVector vec = lie_bracket(a.vec, nu);
  PolyVector tail = n.apply(lie_bracket(a.vec, z.vec));
  for (std::size_t k = 0; k < vec.size(); ++k) vec[k] -= tail[k];
  PolyVector cov = contract_d(z.vec, n.dual(a.cov));
  PolyVector minus = contract_d(nu, a.cov);
  for (std::size_t k = 0; k < cov.size(); ++k) cov[k] -= minus[k];
  return GenSection(std::move(vec), std::move(cov));
}

struct DNReport {
  bool invariant = true;       // (N, N*)(L) ⊂ L
  bool bracket_closed = true;  // {Γ(𝕋M), Γ(L)}_N ⊂ Γ(L)
  /// First failure: frame index, and for the bracket the generator index in the order
  /// ∂_1..∂_n, dx_1..dx_n.
  std::optional<std::size_t> frame_index;
  std::optional<std::size_t> generator_index;
  Polynomial residual;

  bool verdict() const { return invariant && bracket_closed; }
};

inline DNReport is_dirac_nijenhuis(const Family &l, const Endomorphism &n) {
  l.require_lagrangian("Dirac-Nijenhuis check");
  const std::size_t d = l.n();
  require_endomorphism_on(n, d);
  DNReport rep;
  rep.residual = Polynomial(d);
  auto ann = l.annihilator();
  for (std::size_t j = 0; j < l.rank(); ++j) {
    Membership m = member_of(ann, n.act(l.frame()[j]));
    if (m.member) continue;
    rep.invariant = false;
    rep.frame_index = j;
    rep.residual = m.residual;
    return rep;
  }
  // dx_i generators have no vector part, and the bracket only sees the vector part of z.
  for (std::size_t g = 0; g < d; ++g) {
    GenSection z = GenSection::partial(d, g, d);
    for (std::size_t j = 0; j < l.rank(); ++j) {
      Membership m = member_of(ann, dn_bracket(z, l.frame()[j], n));
      if (m.member) continue;
      rep.bracket_closed = false;
      rep.frame_index = j;
      rep.generator_index = g;
      rep.residual = m.residual;
      return rep;
    }
  }
  return rep;
}

enum class ShiftSide { left, right };

/// 𝔏_{N^k}(L) = (N^k, id)(L) + L ∩ TM and ℜ_{N^k}(L) = (id, (N*)^k)(L) + L ∩ T*M.
inline Family shift(const Family &l, const Endomorphism &n, unsigned k, ShiftSide side) {
  require_endomorphism_on(n, l.n());
  if (k == 0) return l;
  Endomorphism nk = n.power(k);
  std::vector<GenSection> frame;
  for (const auto &s : l.frame()) {
    GenSection t = s;
    if (side == ShiftSide::left)
      t.vec = nk.apply(s.vec);
    else
      t.cov = nk.dual(s.cov);
    frame.push_back(std::move(t));
  }
  Family extra = side == ShiftSide::left ? kernel(l) : cokernel(l);
  frame.insert(frame.end(), extra.frame().begin(), extra.frame().end());
  Family out(l.space(), std::move(frame));
  const char *name = side == ShiftSide::left ? "left shift" : "right shift";
  if (out.rank() != l.n())
    throw ShiftRankDefect(std::string(name) + " has generic rank " + std::to_string(out.rank()) + " instead of " +
                          std::to_string(l.n()));
  if (auto d = out.isotropy_defect())
    throw ShiftRankDefect(std::string(name) + " is not isotropic: frame sections " + std::to_string(d->first + 1) +
                          " and " + std::to_string(d->second + 1) + " pair nontrivially");
  return out;
}

} // namespace dirac
