#pragma once

// Pointwise subspace algebra on evaluated fibres, probe-based smoothness evidence for generic
// frames, and the concurrence check built on both.

#include "family.hpp"
#include "probe.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dirac {

namespace pointwise {

using dense::Matrix;
using dense::Vector;

inline Matrix evaluate(const std::vector<GenSection> &frame, const ProbePoint &pt) {
  Matrix m;
  for (const auto &s : frame) m.push_back(s.evaluate(pt));
  return m;
}

/// Reduced row basis of the evaluated span.
inline Matrix fiber(const std::vector<GenSection> &frame, const ProbePoint &pt, std::size_t dim) {
  return dense::span(evaluate(frame, pt), 2 * dim);
}

inline Scalar pairing(const Vector &a, const Vector &b, std::size_t n) {
  Scalar acc(0);
  for (std::size_t j = 0; j < n; ++j) acc += a[n + j] * b[j] + b[n + j] * a[j];
  return acc;
}

enum class Match { tangent, cotangent };

/// { a + other(b) : block(a) = block(b) } for the two subspaces.
inline Matrix product(const Matrix &a, const Matrix &b, std::size_t n, Match match) {
  const std::size_t ka = a.size(), kb = b.size();
  const std::size_t off = match == Match::tangent ? 0 : n;
  Matrix eq(n, Vector(ka + kb, Scalar(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ka; ++j) eq[i][j] = a[j][off + i];
    for (std::size_t j = 0; j < kb; ++j) eq[i][ka + j] = -b[j][off + i];
  }
  Matrix out;
  for (const auto &v : dense::nullspace(eq, ka + kb)) {
    Vector s(2 * n, Scalar(0));
    for (std::size_t j = 0; j < ka; ++j)
      for (std::size_t c = 0; c < 2 * n; ++c) s[c] += v[j] * a[j][c];
    const std::size_t keep = match == Match::tangent ? n : 0;
    for (std::size_t j = 0; j < kb; ++j)
      for (std::size_t c = keep; c < keep + n; ++c) s[c] += v[ka + j] * b[j][c];
    out.push_back(std::move(s));
  }
  return dense::span(out, 2 * n);
}

inline Matrix perp_intersection(const Matrix &l, const Matrix &iso, std::size_t n) {
  if (iso.empty()) return dense::span(l, 2 * n);
  Matrix eq(iso.size(), Vector(l.size(), Scalar(0)));
  for (std::size_t j = 0; j < iso.size(); ++j)
    for (std::size_t i = 0; i < l.size(); ++i) eq[j][i] = pairing(l[i], iso[j], n);
  Matrix out;
  for (const auto &v : dense::nullspace(eq, l.size())) out.push_back(dense::combine(l, v, 2 * n));
  return dense::span(out, 2 * n);
}

inline Matrix stretch(const Matrix &l, const Matrix &iso, std::size_t n) {
  Matrix all = perp_intersection(l, iso, n);
  all.insert(all.end(), iso.begin(), iso.end());
  return dense::span(all, 2 * n);
}

/// Intersection with TM (cotangent block zero) or T*M (tangent block zero).
inline Matrix block_kernel(const Matrix &l, std::size_t n, bool tangent_kernel) {
  const std::size_t off = tangent_kernel ? n : 0;
  Matrix eq(n, Vector(l.size(), Scalar(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l.size(); ++j) eq[i][j] = l[j][off + i];
  Matrix out;
  for (const auto &v : dense::nullspace(eq, l.size())) out.push_back(dense::combine(l, v, 2 * n));
  return dense::span(out, 2 * n);
}

inline bool contained(const Matrix &small, const Matrix &big) {
  for (const auto &v : small)
    if (!dense::in_span(big, v)) return false;
  return true;
}

} // namespace pointwise

/// Limit of the span of a frame along the line x = p + t·d as t → 0. The frame must be
/// generically independent along the line.
inline dense::Matrix line_limit(const std::vector<GenSection> &frame, const ProbePoint &p, const std::vector<Scalar> &dir) {
  if (frame.empty()) return {};
  const std::size_t nv = frame[0].nvars();
  std::vector<Polynomial> images;
  for (std::size_t k = 0; k < nv; ++k)
    images.push_back(Polynomial::constant(1, p[k]) + Polynomial::variable(1, 0) * dir[k]);
  std::vector<PolyVector> cols;
  for (const auto &s : frame) {
    PolyVector c;
    for (const auto &q : s.components()) c.push_back(q.compose(images, 1));
    cols.push_back(std::move(c));
  }
  const std::size_t len = cols[0].size();
  {
    PolyMatrix m = PolyMatrix::from_columns(cols, len, 1);
    std::vector<PolyVector> kept;
    for (auto j : independent_columns(m)) kept.push_back(cols[j]);
    cols = std::move(kept);
  }
  const Polynomial t = Polynomial::variable(1, 0);
  const ProbePoint origin{Scalar(0)};
  for (int guard = 0; guard < 10000; ++guard) {
    dense::Matrix at0;
    for (const auto &c : cols) {
      dense::Vector v;
      for (const auto &q : c) v.push_back(q.evaluate(origin));
      at0.push_back(std::move(v));
    }
    dense::Matrix eq(len, dense::Vector(cols.size(), Scalar(0)));
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) eq[i][j] = at0[j][i];
    dense::Matrix rel = dense::nullspace(eq, cols.size());
    if (rel.empty()) return dense::span(at0, len);
    const dense::Vector &c = rel.front();
    std::size_t j = 0;
    while (c[j].is_zero()) ++j;
    PolyVector merged(len, Polynomial(1));
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (!c[i].is_zero())
        for (std::size_t r = 0; r < len; ++r) merged[r] += cols[i][r] * c[i];
    for (auto &q : merged) {
      auto d = divide_exact(q, t);
      if (!d) throw Error("internal error: line limit relation does not vanish at t = 0");
      q = std::move(*d);
    }
    cols[j] = std::move(merged);
  }
  throw Error("internal error: line limit did not stabilize");
}

enum class ProbeStatus { agrees, limit_agrees, differs, skipped };

inline const char *probe_status_name(ProbeStatus s) {
  switch (s) {
  case ProbeStatus::agrees: return "agrees";
  case ProbeStatus::limit_agrees: return "limit_agrees";
  case ProbeStatus::differs: return "differs";
  case ProbeStatus::skipped: return "skipped";
  }
  return "?";
}

struct ProbeEvidence {
  ProbePoint point;
  ProbeStatus status = ProbeStatus::skipped;
  std::size_t frame_rank = 0;  // rank of the generic frame evaluated at the point
  std::size_t fiber_dim = 0;   // dimension of the pointwise construction
  std::string note;
};

struct SmoothnessReport {
  std::vector<ProbeEvidence> probes;

  bool constant_rank() const {
    for (const auto &p : probes)
      if (p.status == ProbeStatus::differs) return false;
    return true;
  }
  const ProbeEvidence *first_failure() const {
    for (const auto &p : probes)
      if (p.status == ProbeStatus::differs) return &p;
    return nullptr;
  }
  std::size_t count(ProbeStatus s) const {
    std::size_t c = 0;
    for (const auto &p : probes) c += p.status == s;
    return c;
  }
};

/// Compares the generic frame (generically independent) at `pt` with the pointwise
/// construction `fib`, falling back to a line limit where the frame drops rank.
inline ProbeEvidence compare_fiber(const std::vector<GenSection> &frame, const ProbePoint &pt, const dense::Matrix &fib,
                                   std::size_t dim, ProbeSampler &directions) {
  ProbeEvidence ev;
  ev.point = pt;
  dense::Matrix at = pointwise::fiber(frame, pt, dim);
  ev.frame_rank = at.size();
  ev.fiber_dim = fib.size();
  if (!pointwise::contained(at, fib)) {
    ev.status = ProbeStatus::differs;
    ev.note = "generic frame leaves the pointwise fibre";
    return ev;
  }
  if (at.size() == frame.size()) {
    ev.status = at.size() == fib.size() ? ProbeStatus::agrees : ProbeStatus::differs;
    if (ev.status == ProbeStatus::differs) ev.note = "pointwise fibre is larger than the generic rank";
    return ev;
  }
  std::vector<Scalar> dir;
  for (std::size_t k = 0; k < pt.size(); ++k) dir.push_back(Scalar(directions.small_nonzero()));
  dense::Matrix lim = line_limit(frame, pt, dir);
  if (lim.size() == fib.size() && pointwise::contained(lim, fib)) {
    ev.status = ProbeStatus::limit_agrees;
    ev.note = "frame drops rank but its limit matches";
  } else {
    ev.status = ProbeStatus::differs;
    ev.note = "limit of nearby fibres differs from the pointwise fibre";
  }
  return ev;
}

enum class ConcurMode { weak, full };

struct ConcurrenceReport {
  std::optional<Family> product;
  std::string product_error;  // set when the product is not generically Lagrangian
  Involutivity involutivity;
  std::optional<SmoothnessReport> smoothness;
  bool weak = false;
  bool concurrent = false;  // verdict for the requested mode
};

/// Pointwise evidence that a generic product matches the set-theoretic product of the fibres.
inline SmoothnessReport product_smoothness(const Family &l, const Family &r, const Family &p, pointwise::Match match,
                                           const std::vector<ProbePoint> &probes, std::uint64_t seed) {
  SmoothnessReport rep;
  ProbeSampler dirs(seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t n = l.n();
  for (const auto &pt : probes) {
    dense::Matrix lf = pointwise::fiber(l.frame(), pt, n), rf = pointwise::fiber(r.frame(), pt, n);
    if (lf.size() != l.rank() || rf.size() != r.rank()) {
      ProbeEvidence ev;
      ev.point = pt;
      ev.note = "an input frame drops rank";
      rep.probes.push_back(std::move(ev));
      continue;
    }
    rep.probes.push_back(compare_fiber(p.frame(), pt, pointwise::product(lf, rf, n, match), n, dirs));
  }
  return rep;
}

/// L and R concur weakly when L ⊛ R is generically Lagrangian and involutive; full concurrence
/// also requires probe evidence that the product has constant rank.
inline ConcurrenceReport concur(const Family &l, const Family &r, ConcurMode mode, const std::vector<ProbePoint> &probes = {},
                                std::uint64_t seed = 0) {
  l.require_lagrangian("concurrence left operand");
  r.require_lagrangian("concurrence right operand");
  ConcurrenceReport rep;
  try {
    rep.product = cotangent_product(l, r);
  } catch (const ProductNotGenericallyLagrangian &e) {
    rep.product_error = e.what();
    return rep;
  }
  rep.involutivity = is_involutive(*rep.product);
  rep.weak = rep.involutivity.involutive;
  if (mode == ConcurMode::weak) {
    rep.concurrent = rep.weak;
    return rep;
  }
  rep.smoothness = product_smoothness(l, r, *rep.product, pointwise::Match::cotangent, probes, seed);
  rep.concurrent = rep.weak && rep.smoothness->constant_rank();
  return rep;
}

} // namespace dirac
