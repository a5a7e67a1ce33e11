#pragma once

// Reduction through triangles M <- X -> Y: backward images along submanifolds, forward images
// under projections, Dirac reduction with its equivalence checks, witnesses, Marsden-Ratiu
// conditions for bivectors, Magri's recipe, and the kernel and Magri diamonds.

#include "coords.hpp"
#include "smoothness.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dirac {

/// Probe points for smoothness evidence. Explicit points come first, then `count` seeded ones.
struct ProbeConfig {
  std::size_t count = 12;
  std::uint64_t seed = 0;
  std::vector<ProbePoint> extra;

  std::vector<ProbePoint> points(std::size_t dim) const {
    std::vector<ProbePoint> pts;
    for (const auto &p : extra) {
      if (p.size() != dim) throw DimensionMismatch("explicit probe point has the wrong number of coordinates");
      pts.push_back(p);
    }
    ProbeSampler s(seed);
    for (auto &p : s.points(dim, count)) pts.push_back(std::move(p));
    return pts;
  }
  ProbeSampler directions() const { return ProbeSampler(seed ^ 0x9e3779b97f4a7c15ULL); }
};

/// M <- X -> Y with X a submanifold of M and p a projection out of the intrinsic chart of X.
struct Triangle {
  Submanifold x;
  Projection p;

  Triangle(Submanifold sub, Projection proj) : x(std::move(sub)), p(std::move(proj)) {
    require_same_space(p.source(), x.intrinsic(), "reduction triangle");
  }
};

// ---------------------------------------------------------------------------------------------
// Families along X: ambient sections paired with their restrictions to X.

struct AlongFamily {
  std::vector<GenSection> ambient;     // coefficients in the ambient coordinates
  std::vector<GenSection> restricted;  // same sections, coefficients in the intrinsic coordinates of X
  std::size_t rank() const { return restricted.size(); }
};

/// Keeps the sections whose restrictions are generically independent, in input order.
inline AlongFamily along(const Submanifold &x, const std::vector<GenSection> &ambient) {
  AlongFamily out;
  if (ambient.empty()) return out;
  std::vector<GenSection> res;
  for (const auto &s : ambient) res.push_back(x.restrict(s));
  for (auto j : independent_columns(sections_matrix(res, x.ambient_dim(), x.dim()))) {
    out.ambient.push_back(ambient[j]);
    out.restricted.push_back(res[j]);
  }
  return out;
}

inline AlongFamily along_combine(const Submanifold &x, const AlongFamily &base, const std::vector<PolyVector> &coeffs) {
  const std::size_t n = x.ambient_dim();
  std::vector<GenSection> amb;
  for (const auto &c : coeffs) {
    GenSection s = GenSection::zero(n, n);
    for (std::size_t i = 0; i < base.rank(); ++i)
      if (!c[i].is_zero()) s += x.extend(c[i]) * base.ambient[i];
    amb.push_back(std::move(s));
  }
  return along(x, amb);
}

inline AlongFamily along_union(const Submanifold &x, const AlongFamily &a, const AlongFamily &b) {
  std::vector<GenSection> amb = a.ambient;
  amb.insert(amb.end(), b.ambient.begin(), b.ambient.end());
  return along(x, amb);
}

/// Sections of `base` pairing to zero with every section of `iso`.
inline AlongFamily along_perp(const Submanifold &x, const AlongFamily &base, const AlongFamily &iso) {
  if (iso.rank() == 0 || base.rank() == 0) return base;
  PolyMatrix m(iso.rank(), base.rank(), x.dim());
  for (std::size_t j = 0; j < iso.rank(); ++j)
    for (std::size_t i = 0; i < base.rank(); ++i) m(j, i) = pairing(base.restricted[i], iso.restricted[j]);
  return along_combine(x, base, generic_kernel(m));
}

inline std::vector<PolyVector> along_annihilator(const Submanifold &x, const AlongFamily &f) {
  return annihilator(f.restricted, x.ambient_dim(), x.dim());
}

inline bool along_contains(const Submanifold &x, const AlongFamily &big, const AlongFamily &small) {
  auto ann = along_annihilator(x, big);
  for (const auto &s : small.restricted)
    if (!member_of(ann, s).member) return false;
  return true;
}

inline bool along_equal(const Submanifold &x, const AlongFamily &a, const AlongFamily &b) {
  return a.rank() == b.rank() && along_contains(x, a, b) && along_contains(x, b, a);
}

/// Brackets of the ambient extensions, restricted to X, must stay in the family.
inline Involutivity along_involutive(const Submanifold &x, const AlongFamily &f) {
  Involutivity out;
  out.residual = Polynomial(x.dim());
  auto ann = along_annihilator(x, f);
  for (std::size_t i = 0; i < f.rank(); ++i)
    for (std::size_t j = 0; j < f.rank(); ++j) {
      Membership m = member_of(ann, x.restrict(dorfman(f.ambient[i], f.ambient[j])));
      if (m.member) continue;
      out.involutive = false;
      out.indices = {i, j};
      out.residual = m.residual;
      return out;
    }
  return out;
}

inline AlongFamily conormal_along(const Submanifold &x) { return along(x, x.conormal_frame()); }
inline AlongFamily tangent_along(const Submanifold &x) { return along(x, x.tangent_frame()); }

/// i_*F for the fibre directions of the projection.
inline AlongFamily fibers_along(const Triangle &t) {
  std::vector<GenSection> amb;
  for (const auto &w : t.p.fiber_fields()) amb.push_back(GenSection::from_vector_field(t.x.extend(t.x.push_vector(w))));
  return along(t.x, amb);
}

/// L restricted to X; throws RankDefect when the frame of L degenerates along X.
inline AlongFamily restrict_family(const Family &l, const Submanifold &x) {
  require_same_space(l.space(), x.ambient(), "restriction to a submanifold");
  AlongFamily out = along(x, l.frame());
  if (out.rank() != l.rank())
    throw RankDefect("frame has generic rank " + std::to_string(out.rank()) + " along the submanifold instead of " +
                     std::to_string(l.rank()));
  return out;
}

/// L[I] = L ∩ I^⊥ + I along X.
inline AlongFamily stretch_along(const Submanifold &x, const AlongFamily &l, const AlongFamily &iso) {
  AlongFamily out = along_union(x, along_perp(x, l, iso), iso);
  if (out.rank() != x.ambient_dim())
    throw StretchRankDefect("stretch along the submanifold has generic rank " + std::to_string(out.rank()) +
                            " instead of " + std::to_string(x.ambient_dim()));
  return out;
}

// ---------------------------------------------------------------------------------------------
// Backward image along a submanifold.

namespace pointwise {

/// i^! of a Lagrangian fibre at the point of X with intrinsic coordinates y.
inline Matrix pullback(const Matrix &lf, const Submanifold &x, const ProbePoint &y) {
  const std::size_t n = x.ambient_dim(), d = x.dim();
  Matrix nu = evaluate(x.conormal_frame(), x.lift(y));
  Matrix eq(nu.size(), Vector(lf.size(), Scalar(0)));
  for (std::size_t j = 0; j < nu.size(); ++j)
    for (std::size_t i = 0; i < lf.size(); ++i) eq[j][i] = pairing(lf[i], nu[j], n);
  Matrix out;
  for (const auto &c : dense::nullspace(eq, lf.size())) {
    Vector a = dense::combine(lf, c, 2 * n);
    Vector v(2 * d, Scalar(0));
    for (std::size_t b = 0; b < d; ++b) {
      v[b] = a[x.base()[b]];
      v[d + b] = a[n + x.base()[b]];
      for (auto j : x.dependents()) {
        Scalar dg = x.graph_function(j).partial(b).evaluate(y);
        if (!dg.is_zero()) v[d + b] += a[n + j] * dg;
      }
    }
    out.push_back(std::move(v));
  }
  return dense::span(out, 2 * d);
}

} // namespace pointwise

struct PullbackResult {
  Family family;
  SmoothnessReport smoothness;
  bool constant_rank() const { return smoothness.constant_rank(); }
};

/// i^!L = { i^*ξ + w : i_*w + ξ ∈ L }, on the intrinsic chart of X. A probe that disagrees with
/// the pointwise construction marks the generic family as having non-constant rank.
inline PullbackResult pullback(const Family &l, const Submanifold &x, const ProbeConfig &probes = {}) {
  const std::size_t n = x.ambient_dim(), d = x.dim();
  AlongFamily la = restrict_family(l, x);
  AlongFamily tangential = along_perp(x, la, conormal_along(x));
  std::vector<GenSection> frame;
  if (d > 0)
    for (const auto &s : tangential.restricted) {
      PolyVector v;
      for (auto b : x.base()) v.push_back(s.vec[b]);
      frame.push_back(normalize_section(GenSection(std::move(v), x.pull_covector(s.cov))));
    }
  PullbackResult out{Family(x.intrinsic(), std::move(frame), l.label()), {}};
  out.family.require_lagrangian("pullback");
  ProbeSampler dirs = probes.directions();
  for (const auto &y : probes.points(d)) {
    dense::Matrix lf = pointwise::fiber(l.frame(), x.lift(y), n);
    if (lf.size() != n) {
      ProbeEvidence ev;
      ev.point = y;
      ev.note = "the input frame drops rank";
      out.smoothness.probes.push_back(std::move(ev));
      continue;
    }
    out.smoothness.probes.push_back(compare_fiber(out.family.frame(), y, pointwise::pullback(lf, x, y), d, dirs));
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Forward image under a projection.

/// F = ker p_* as an isotropic family of vector fields on the source of p.
inline Family fiber_family(const Projection &p) { return distribution(p.source(), p.fiber_fields()); }

/// p_!(L_X): L_X[F] is written in adapted coordinates, reduced to canonical row form on the base
/// components, and pushed down once every normalized coefficient is fibre-independent.
inline Family pushforward(const Family &lx, const Projection &p, std::uint64_t seed = 0) {
  require_same_space(lx.space(), p.source(), "pushforward");
  lx.require_lagrangian("pushforward source");
  const std::size_t nx = p.source().dim(), m = p.base_dim();
  if (m == 0) return Family(p.target(), {}, lx.label());

  Family lz = p.change().forward(lx);
  std::vector<GenSection> gf;
  for (std::size_t k = 0; k < nx; ++k)
    gf.push_back(k < m ? GenSection::differential(nx, k, nx) : GenSection::partial(nx, k, nx));
  Family s = cotangent_product(lz, Family(p.adapted(), std::move(gf)));

  PolyMatrix rows(s.rank(), 2 * m, nx);
  for (std::size_t i = 0; i < s.rank(); ++i)
    for (std::size_t k = 0; k < m; ++k) {
      rows(i, k) = s.frame()[i].vec[k];
      rows(i, m + k) = s.frame()[i].cov[k];
    }
  Echelon e = fraction_free_rref(rows);
  if (e.rank() != m) throw Error("internal error: stretched family has base rank " + std::to_string(e.rank()));

  const Polynomial &den = e.pivot;
  const auto &names = p.adapted().coords;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < 2 * m; ++c) {
      const Polynomial &a = e.reduced(i, c);
      if (a.is_zero()) continue;
      for (std::size_t f = m; f < nx; ++f) {
        if ((a.partial(f) * den - a * den.partial(f)).is_zero()) continue;
        std::string coef;
        if (auto q = divide_exact(a, den)) coef = q->str(names);
        else coef = "(" + a.str(names) + ")/(" + den.str(names) + ")";
        throw NotProjectable("coefficient " + coef + " depends on the fibre coordinate " + names[f], coef);
      }
    }

  // Fibre-independent quotients may be evaluated on any fibre slice where the denominator survives.
  std::vector<Scalar> fiber_values(nx - m, Scalar(0));
  auto images_for = [&](const std::vector<Scalar> &vals) {
    std::vector<Polynomial> images;
    for (std::size_t k = 0; k < nx; ++k)
      images.push_back(k < m ? Polynomial::variable(m, k) : Polynomial::constant(m, vals[k - m]));
    return images;
  };
  std::vector<Polynomial> images = images_for(fiber_values);
  ProbeSampler sampler(seed);
  for (int tries = 0; den.compose(images, m).is_zero(); ++tries) {
    if (tries == 256) throw Error("internal error: no fibre slice keeps the pivot nonzero");
    fiber_values = sampler.point(nx - m);
    images = images_for(fiber_values);
  }

  std::vector<GenSection> frame;
  for (std::size_t i = 0; i < m; ++i) {
    GenSection g = GenSection::zero(m, m);
    for (std::size_t k = 0; k < m; ++k) {
      g.vec[k] = e.reduced(i, k).compose(images, m);
      g.cov[k] = e.reduced(i, m + k).compose(images, m);
    }
    frame.push_back(normalize_section(g));
  }
  Family out(p.target(), std::move(frame), lx.label());
  out.require_lagrangian("pushforward");
  return out;
}

/// p^!(L_Y) = { u + p^*η : p_*u + η ∈ L_Y } on the source of p.
inline Family pullback_submersion(const Family &ly, const Projection &p) {
  require_same_space(ly.space(), p.target(), "pullback along a projection");
  const std::size_t nx = p.source().dim(), m = p.base_dim();
  std::vector<Polynomial> images;
  for (std::size_t k = 0; k < m; ++k) images.push_back(Polynomial::variable(nx, k));
  std::vector<GenSection> frame;
  for (const auto &s : ly.frame()) {
    GenSection z = GenSection::zero(nx, nx);
    for (std::size_t k = 0; k < m; ++k) {
      z.vec[k] = s.vec[k].compose(images, nx);
      z.cov[k] = s.cov[k].compose(images, nx);
    }
    frame.push_back(std::move(z));
  }
  for (std::size_t f = m; f < nx; ++f) frame.push_back(GenSection::partial(nx, f, nx));
  return p.change().backward(Family(p.adapted(), std::move(frame), ly.label()));
}

// ---------------------------------------------------------------------------------------------
// Dirac reduction.

struct ReductionReport {
  PullbackResult pulled;                 // i^!L
  Family stretched;                      // i^!L[F]
  Involutivity stretched_involutivity;
  AlongFamily along_stretch;             // L[I] along X, I = i_*F + N*X
  Involutivity along_involutivity;
  std::optional<Family> reduced;         // p_! i^! L
  std::string failure;                   // set when the pushforward is not projectable
  std::string failure_coefficient;
  Involutivity reduced_involutivity;
  bool round_trip = false;               // p^!(L_Y) equals i^!L[F]

  bool reducible() const { return reduced && reduced_involutivity.involutive; }
  /// Reducibility, involutivity of i^!L[F], and involutivity of L[I] along X all coincide.
  bool criteria_agree() const {
    return reducible() == along_involutivity.involutive && along_involutivity.involutive == stretched_involutivity.involutive;
  }
};

inline ReductionReport dirac_reduce(const Family &l, const Triangle &t, const ProbeConfig &probes = {}) {
  ReductionReport r;
  r.pulled = pullback(l, t.x, probes);
  r.stretched = stretch(r.pulled.family, fiber_family(t.p));
  r.stretched_involutivity = is_involutive(r.stretched);
  AlongFamily iso = along_union(t.x, fibers_along(t), conormal_along(t.x));
  r.along_stretch = stretch_along(t.x, restrict_family(l, t.x), iso);
  r.along_involutivity = along_involutive(t.x, r.along_stretch);
  try {
    r.reduced = pushforward(r.pulled.family, t.p, probes.seed);
  } catch (const NotProjectable &e) {
    r.failure = e.what();
    r.failure_coefficient = e.coefficient;
    return r;
  }
  r.reduced_involutivity = is_involutive(*r.reduced);
  r.round_trip = family_equal(pullback_submersion(*r.reduced, t.p), r.stretched);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Witnesses.

struct WitnessReport {
  bool wit1 = false, wit2 = false, wit3 = false;
  SmoothnessReport wit1_evidence;  // probes of L[I] along X
  Involutivity wit2_certificate;   // bracket failure of L[E] ∩ N*X^⊥ along X
  Polynomial wit3_residual;        // first nonzero conormal pairing of L ∩ E^⊥, on X
  bool passed() const { return wit1 && wit2 && wit3; }
};

inline AlongFamily vector_fields_along(const Submanifold &x, const std::vector<PolyVector> &fields) {
  std::vector<GenSection> amb;
  for (const auto &u : fields) {
    if (u.size() != x.ambient_dim()) throw DimensionMismatch("vector field has wrong length");
    amb.push_back(GenSection::from_vector_field(u));
  }
  return along(x, amb);
}

/// Checks the three witness conditions for an adapted E (ambient vector fields along X).
inline WitnessReport check_witness(const Family &l, const Triangle &t, const std::vector<PolyVector> &e,
                                   const ProbeConfig &probes = {}) {
  const Submanifold &x = t.x;
  const std::size_t n = x.ambient_dim();
  AlongFamily ea = vector_fields_along(x, e);
  AlongFamily nu = conormal_along(x);
  AlongFamily fib = fibers_along(t);
  AlongFamily etx = along_perp(x, ea, nu);
  if (!along_equal(x, etx, fib))
    throw NotAdapted("E meets TX in generic rank " + std::to_string(etx.rank()) + " but does not match the rank " +
                     std::to_string(fib.rank()) + " fibres of the projection");

  AlongFamily la = restrict_family(l, x);
  WitnessReport w;
  w.wit3_residual = Polynomial(x.dim());

  AlongFamily iso = along_union(x, fib, nu);
  AlongFamily li = stretch_along(x, la, iso);
  ProbeSampler dirs = probes.directions();
  for (const auto &y : probes.points(x.dim())) {
    dense::Matrix lf = pointwise::fiber(l.frame(), x.lift(y), n);
    if (lf.size() != n) {
      ProbeEvidence ev;
      ev.point = y;
      ev.note = "the input frame drops rank";
      w.wit1_evidence.probes.push_back(std::move(ev));
      continue;
    }
    dense::Matrix fibre = pointwise::stretch(lf, pointwise::fiber(iso.restricted, y, n), n);
    w.wit1_evidence.probes.push_back(compare_fiber(li.restricted, y, fibre, n, dirs));
  }
  w.wit1 = w.wit1_evidence.constant_rank();

  AlongFamily dfam = along_perp(x, stretch_along(x, la, ea), nu);
  w.wit2_certificate = along_involutive(x, dfam);
  w.wit2 = w.wit2_certificate.involutive;

  w.wit3 = true;
  AlongFamily lperp = along_perp(x, la, ea);
  for (const auto &s : lperp.restricted) {
    for (const auto &c : nu.restricted) {
      Polynomial r = pairing(s, c);
      if (r.is_zero()) continue;
      w.wit3 = false;
      w.wit3_residual = r;
      break;
    }
    if (!w.wit3) break;
  }
  return w;
}

// ---------------------------------------------------------------------------------------------
// Marsden-Ratiu conditions for a bivector.

struct MRReport {
  bool mr1 = false, mr1prime = false, mr2 = false;
  Involutivity mr2_certificate;
  bool passed() const { return mr1 && mr2; }
};

/// MR1: π^♯(E°) ⊂ TX + E. MR1′: π^♯(E°) ⊂ TX. MR2: { π^♯ξ + ξ : ξ ∈ E° } is involutive along X.
inline MRReport check_MR(const Bivector &pi, const Submanifold &x, const std::vector<PolyVector> &e) {
  const std::size_t n = x.ambient_dim(), d = x.dim();
  if (pi.dim() != n || pi.nvars() != n) throw DimensionMismatch("bivector has wrong dimensions");
  std::vector<PolyVector> eann;
  if (e.empty()) {
    for (std::size_t k = 0; k < n; ++k) {
      PolyVector xi(n, Polynomial(d));
      xi[k] = Polynomial::one(d);
      eann.push_back(std::move(xi));
    }
  } else {
    PolyMatrix rows(e.size(), n, d);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i].size() != n) throw DimensionMismatch("vector field has wrong length");
      for (std::size_t k = 0; k < n; ++k) rows(i, k) = x.restrict(e[i][k]);
    }
    eann = generic_kernel(rows);
  }

  PolyMatrix pr(n, n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pr(i, j) = x.restrict(pi(i, j));
  const PolyMatrix prt = pr.transpose();

  AlongFamily tx = tangent_along(x);
  AlongFamily txe = along_union(x, tx, vector_fields_along(x, e));
  auto ann_txe = along_annihilator(x, txe);
  AlongFamily nu = conormal_along(x);

  MRReport r;
  r.mr1 = r.mr1prime = true;
  for (const auto &xi : eann) {
    GenSection v = GenSection::from_vector_field(prt.apply(xi));
    if (!member_of(ann_txe, v).member) r.mr1 = false;
    for (const auto &c : nu.restricted)
      if (!pairing(v, c).is_zero()) r.mr1prime = false;
  }

  std::vector<GenSection> amb;
  for (const auto &xi : eann) {
    PolyVector ext = x.extend(xi);
    amb.push_back(GenSection(pi.sharp(ext), ext));
  }
  r.mr2_certificate = along_involutive(x, along(x, amb));
  r.mr2 = r.mr2_certificate.involutive;
  return r;
}

// ---------------------------------------------------------------------------------------------
// Split condition: L ∩ N*X along X.

struct SplitReport {
  AlongFamily intersection;
  SmoothnessReport smoothness;
  bool constant_rank() const { return smoothness.constant_rank(); }
};

inline SplitReport split_check(const Family &l, const Submanifold &x, const ProbeConfig &probes = {}) {
  const std::size_t n = x.ambient_dim(), d = x.dim();
  AlongFamily la = restrict_family(l, x);
  PolyMatrix m(n + d, la.rank(), d);
  for (std::size_t i = 0; i < la.rank(); ++i) {
    const GenSection &s = la.restricted[i];
    for (std::size_t k = 0; k < n; ++k) m(k, i) = s.vec[k];
    PolyVector pc = x.pull_covector(s.cov);
    for (std::size_t b = 0; b < d; ++b) m(n + b, i) = pc[b];
  }
  SplitReport r;
  r.intersection = along_combine(x, la, generic_kernel(m));
  ProbeSampler dirs = probes.directions();
  for (const auto &y : probes.points(d)) {
    dense::Matrix lf = pointwise::fiber(l.frame(), x.lift(y), n);
    if (lf.size() != n) {
      ProbeEvidence ev;
      ev.point = y;
      ev.note = "the input frame drops rank";
      r.smoothness.probes.push_back(std::move(ev));
      continue;
    }
    dense::Matrix eq(n + d, dense::Vector(lf.size(), Scalar(0)));
    for (std::size_t i = 0; i < lf.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) eq[k][i] = lf[i][k];
      for (std::size_t b = 0; b < d; ++b) {
        Scalar c = lf[i][n + x.base()[b]];
        for (auto j : x.dependents()) c += lf[i][n + j] * x.graph_function(j).partial(b).evaluate(y);
        eq[n + b][i] = c;
      }
    }
    dense::Matrix fibre;
    for (const auto &c : dense::nullspace(eq, lf.size())) fibre.push_back(dense::combine(lf, c, 2 * n));
    r.smoothness.probes.push_back(compare_fiber(r.intersection.restricted, y, dense::span(fibre, 2 * n), n, dirs));
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Magri's recipe.

/// 𝒩(L, R) = L ⋆ (R ⊛ ℛ_{-1}(L)).
inline Family magri_N(const Family &l, const Family &r) {
  return tangent_product(l, cotangent_product(r, rescale_covectors(Scalar(-1), l)));
}

/// E_L = K(𝒩(L, R)).
inline Family magri_kernel(const Family &l, const Family &r) { return kernel(magri_N(l, r)); }

inline std::vector<PolyVector> vector_parts(const Family &f) {
  std::vector<PolyVector> out;
  for (const auto &s : f.frame()) out.push_back(s.vec);
  return out;
}

/// 𝒨(L, R) = Gr(K(𝒩(L, R))).
inline Family magri_M(const Family &l, const Family &r) {
  return graph_of_distribution(l.space(), vector_parts(magri_kernel(l, r)));
}

/// π_L^♯(ker π_R^♯) as a distribution.
inline Family magri_original(const Space &sp, const Bivector &pl, const Bivector &pr) {
  std::vector<PolyVector> fields;
  for (const auto &xi : generic_kernel(pr.matrix().transpose())) fields.push_back(pl.sharp(xi));
  return distribution(sp, fields);
}

// ---------------------------------------------------------------------------------------------
// Diamonds.

enum class DiamondKind { kernel, magri };

/// Coordinates j with ∂_j in D; throws unless they span D.
inline std::vector<std::size_t> coordinate_directions(const Family &dist) {
  const std::size_t n = dist.n();
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < n; ++j)
    if (contains(dist, GenSection::partial(n, j, n)).member) s.push_back(j);
  if (s.size() == dist.rank()) return s;
  std::vector<GenSection> coords;
  for (auto j : s) coords.push_back(GenSection::partial(n, j, n));
  Family spanned(dist.space(), coords);
  for (const auto &g : dist.frame())
    if (!contains(spanned, g).member) {
      std::string text = section_text(g, dist.space().coords);
      throw NotCoordinateSpanned("distribution generator " + text + " is not a combination of coordinate directions", text);
    }
  throw Error("internal error: coordinate directions do not span the distribution");
}

struct DiamondVertex {
  std::string name;
  std::vector<std::string> coords;
  Family l, r;
  ConcurrenceReport concurrence;  // weak
};

struct DiamondReport {
  Family dl, dr, dlr;                  // K(L), K(R), K(L) + K(R) or E_L, E_R, E_L + E_R
  std::array<DiamondVertex, 4> vertices;  // M, M_L, M_R, M_LR
  bool side_poisson = false;           // L on M_L and R on M_R have no kernel
  bool bottom_poisson = false;         // both structures on M_LR have no kernel

  const DiamondVertex &top() const { return vertices[0]; }
  const DiamondVertex &left() const { return vertices[1]; }
  const DiamondVertex &right() const { return vertices[2]; }
  const DiamondVertex &bottom() const { return vertices[3]; }
  bool all_concur() const {
    for (const auto &v : vertices)
      if (!v.concurrence.weak) return false;
    return true;
  }
  bool passed() const { return all_concur() && side_poisson && bottom_poisson; }
};

inline DiamondReport diamond(const Family &l0, const Family &r0, DiamondKind kind,
                             const std::optional<LinearChange> &change = std::nullopt) {
  require_same_space(l0.space(), r0.space(), "diamond");
  const Family l = change ? change->forward(l0) : l0;
  const Family r = change ? change->forward(r0) : r0;
  DiamondReport rep;
  rep.dl = kind == DiamondKind::kernel ? kernel(l) : magri_kernel(l, r);
  rep.dr = kind == DiamondKind::kernel ? kernel(r) : magri_kernel(r, l);
  rep.dlr = family_sum(rep.dl, rep.dr);

  const std::size_t n = l.n();
  auto vertex = [&](std::string name, const Family *dist) {
    DiamondVertex v;
    v.name = std::move(name);
    if (!dist) {
      v.coords = l.space().coords;
      v.l = l;
      v.r = r;
    } else {
      std::vector<std::size_t> drop = coordinate_directions(*dist);
      std::vector<bool> dropped(n, false);
      for (auto j : drop) dropped[j] = true;
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < n; ++j)
        if (!dropped[j]) keep.push_back(j);
      Projection p = Projection::keep(l.space(), keep);
      v.coords = p.target().coords;
      v.l = pushforward(l, p);
      v.r = pushforward(r, p);
    }
    v.concurrence = concur(v.l, v.r, ConcurMode::weak);
    return v;
  };
  rep.vertices = {vertex("M", nullptr), vertex("M_L", &rep.dl), vertex("M_R", &rep.dr), vertex("M_LR", &rep.dlr)};
  rep.side_poisson = kernel(rep.left().l).rank() == 0 && kernel(rep.right().r).rank() == 0;
  rep.bottom_poisson = kernel(rep.bottom().l).rank() == 0 && kernel(rep.bottom().r).rank() == 0;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Simultaneous witnesses and the complement scheme.

struct CommonWitnessReport {
  ConcurrenceReport input;  // weak concurrence of L and R
  WitnessReport wl, wr;
  std::optional<ReductionReport> rl, rr;
  std::optional<ConcurrenceReport> reduced;  // weak concurrence of the reductions

  bool witnesses() const { return wl.passed() && wr.passed(); }
  /// Weakly concurring inputs with a common witness must reduce to weakly concurring structures.
  bool conclusion_holds() const {
    if (!(input.weak && witnesses())) return true;
    return reduced && reduced->weak;
  }
};

inline CommonWitnessReport check_common_witness(const Family &l, const Family &r, const Triangle &t,
                                                const std::vector<PolyVector> &e, const ProbeConfig &probes = {}) {
  CommonWitnessReport rep;
  rep.input = concur(l, r, ConcurMode::weak);
  rep.wl = check_witness(l, t, e, probes);
  rep.wr = check_witness(r, t, e, probes);
  if (!rep.witnesses()) return rep;
  rep.rl = dirac_reduce(l, t, probes);
  rep.rr = dirac_reduce(r, t, probes);
  if (rep.rl->reduced && rep.rr->reduced) rep.reduced = concur(*rep.rl->reduced, *rep.rr->reduced, ConcurMode::weak);
  return rep;
}

struct ComplementReport {
  AlongFamily stretched;              // L[N*X] along X
  AlongFamily complement;
  bool decomposes = false;            // L[N*X] = C ⊕ N*X
  Involutivity complement_involutivity;
};

inline ComplementReport check_complement(const Family &l, const Submanifold &x, const std::vector<GenSection> &c) {
  ComplementReport rep;
  AlongFamily nu = conormal_along(x);
  rep.stretched = stretch_along(x, restrict_family(l, x), nu);
  rep.complement = along(x, c);
  AlongFamily sum = along_union(x, rep.complement, nu);
  rep.decomposes = sum.rank() == rep.complement.rank() + nu.rank() && along_equal(x, sum, rep.stretched);
  rep.complement_involutivity = along_involutive(x, rep.complement);
  return rep;
}

struct ComplementSchemeReport {
  ComplementReport cl, cr;
  ConcurrenceReport induced;  // weak concurrence of i^!L and i^!R
};

inline ComplementSchemeReport check_complement_scheme(const Family &l, const Family &r, const Submanifold &x,
                                                      const std::vector<GenSection> &cl, const std::vector<GenSection> &cr) {
  ComplementSchemeReport rep;
  rep.cl = check_complement(l, x, cl);
  rep.cr = check_complement(r, x, cr);
  ProbeConfig none;
  none.count = 0;
  rep.induced = concur(pullback(l, x, none).family, pullback(r, x, none).family, ConcurMode::weak);
  return rep;
}

} // namespace dirac
