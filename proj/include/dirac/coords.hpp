#pragma once

// Linear changes of coordinates, projections onto coordinate subsets or linear forms, and
// submanifolds given as affine slices or polynomial graphs.

#include "family.hpp"
#include "probe.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dirac {

/// z = Q x. Sections and polynomials are transported in both directions.
class LinearChange {
public:
  LinearChange() = default;
  LinearChange(Space source, dense::Matrix q, std::vector<std::string> target_names)
      : source_(std::move(source)), q_(std::move(q)) {
    const std::size_t n = source_.dim();
    if (q_.size() != n || target_names.size() != n) throw DimensionMismatch("coordinate change must be square");
    for (const auto &row : q_)
      if (row.size() != n) throw DimensionMismatch("coordinate change must be square");
    std::set<std::string> seen(target_names.begin(), target_names.end());
    if (seen.size() != n) throw InvalidArgument("coordinate names after the change are not distinct");
    target_ = Space{std::move(target_names), source_.field};
    dense::Matrix aug;
    for (std::size_t i = 0; i < n; ++i) {
      dense::Vector r = q_[i];
      for (std::size_t k = 0; k < n; ++k) r.push_back(Scalar(i == k ? 1 : 0));
      aug.push_back(std::move(r));
    }
    dense::Rref e = dense::rref(aug, 2 * n);
    if (n > 0 && (e.pivots.size() < n || e.pivots[n - 1] != n - 1))
      throw InvalidArgument("coordinate change is not invertible");
    qinv_.assign(n, dense::Vector(n, Scalar(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) qinv_[i][k] = e.rows[i][n + k];
    to_target_images_ = images(qinv_, n);
    to_source_images_ = images(q_, n);
  }

  static LinearChange identity(const Space &sp) {
    dense::Matrix q(sp.dim(), dense::Vector(sp.dim(), Scalar(0)));
    for (std::size_t i = 0; i < sp.dim(); ++i) q[i][i] = Scalar(1);
    return LinearChange(sp, q, sp.coords);
  }

  const Space &source() const { return source_; }
  const Space &target() const { return target_; }
  const dense::Matrix &matrix() const { return q_; }
  const dense::Matrix &inverse() const { return qinv_; }

  Polynomial to_target(const Polynomial &f) const { return f.compose(to_target_images_, dim()); }
  Polynomial to_source(const Polynomial &g) const { return g.compose(to_source_images_, dim()); }

  GenSection forward(const GenSection &s) const {
    const std::size_t n = dim();
    GenSection out = GenSection::zero(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        if (!q_[k][i].is_zero() && !s.vec[i].is_zero()) out.vec[k] += s.vec[i] * q_[k][i];
        if (!qinv_[i][k].is_zero() && !s.cov[i].is_zero()) out.cov[k] += s.cov[i] * qinv_[i][k];
      }
    for (auto &p : out.vec) p = to_target(p);
    for (auto &p : out.cov) p = to_target(p);
    return out;
  }

  GenSection backward(const GenSection &s) const {
    const std::size_t n = dim();
    GenSection out = GenSection::zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (!qinv_[i][k].is_zero() && !s.vec[k].is_zero()) out.vec[i] += s.vec[k] * qinv_[i][k];
        if (!q_[k][i].is_zero() && !s.cov[k].is_zero()) out.cov[i] += s.cov[k] * q_[k][i];
      }
    for (auto &p : out.vec) p = to_source(p);
    for (auto &p : out.cov) p = to_source(p);
    return out;
  }

  Family forward(const Family &l) const {
    require_same_space(l.space(), source_, "coordinate change");
    std::vector<GenSection> frame;
    for (const auto &s : l.frame()) frame.push_back(normalize_section(forward(s)));
    return Family(target_, std::move(frame), l.label());
  }
  Family backward(const Family &l) const {
    require_same_space(l.space(), target_, "coordinate change");
    std::vector<GenSection> frame;
    for (const auto &s : l.frame()) frame.push_back(normalize_section(backward(s)));
    return Family(source_, std::move(frame), l.label());
  }

  /// ∂/∂z_k written in source coordinates: column k of Q^{-1}.
  dense::Vector target_direction(std::size_t k) const {
    dense::Vector v;
    for (std::size_t i = 0; i < dim(); ++i) v.push_back(qinv_[i][k]);
    return v;
  }

  std::size_t dim() const { return source_.dim(); }

private:
  static std::vector<Polynomial> images(const dense::Matrix &m, std::size_t n) {
    std::vector<Polynomial> out;
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial p(n);
      for (std::size_t k = 0; k < n; ++k)
        if (!m[i][k].is_zero()) p += Polynomial::variable(n, k) * m[i][k];
      out.push_back(std::move(p));
    }
    return out;
  }

  Space source_, target_;
  dense::Matrix q_, qinv_;
  std::vector<Polynomial> to_target_images_, to_source_images_;
};

/// Submersion onto the first `base_dim` coordinates after a linear change; the remaining
/// adapted coordinates parametrize the (affine, connected) fibres.
class Projection {
public:
  Projection() = default;
  Projection(LinearChange change, std::size_t base_dim) : change_(std::move(change)), m_(base_dim) {
    if (m_ > change_.dim()) throw DimensionMismatch("projection target is larger than its source");
    std::vector<std::string> names(change_.target().coords.begin(), change_.target().coords.begin() + static_cast<long>(m_));
    target_ = Space{std::move(names), change_.source().field};
  }

  /// Keep the listed coordinates, in the given order.
  static Projection keep(const Space &source, const std::vector<std::size_t> &kept) {
    const std::size_t n = source.dim();
    std::vector<bool> used(n, false);
    std::vector<std::size_t> order;
    for (auto k : kept) {
      if (k >= n) throw IndexOutOfRange("projection keeps an unknown coordinate");
      if (used[k]) throw InvalidArgument("projection keeps a coordinate twice");
      used[k] = true;
      order.push_back(k);
    }
    for (std::size_t k = 0; k < n; ++k)
      if (!used[k]) order.push_back(k);
    dense::Matrix q;
    std::vector<std::string> names;
    for (auto k : order) {
      dense::Vector row(n, Scalar(0));
      row[k] = Scalar(1);
      q.push_back(std::move(row));
      names.push_back(source.coords[k]);
    }
    return Projection(LinearChange(source, q, names), kept.size());
  }

  /// Target coordinates given by linear forms; fibre coordinates are completed from the
  /// source coordinates in order.
  static Projection linear(const Space &source, const std::vector<std::pair<std::string, dense::Vector>> &forms) {
    const std::size_t n = source.dim();
    dense::Matrix q;
    std::vector<std::string> names;
    for (const auto &[name, row] : forms) {
      if (row.size() != n) throw DimensionMismatch("linear form has wrong length");
      q.push_back(row);
      names.push_back(name);
    }
    if (dense::rank(q) != q.size()) throw InvalidArgument("projection forms are linearly dependent");
    for (std::size_t k = 0; k < n && q.size() < n; ++k) {
      dense::Vector e(n, Scalar(0));
      e[k] = Scalar(1);
      dense::Matrix trial = q;
      trial.push_back(e);
      if (dense::rank(trial) == trial.size()) {
        q = std::move(trial);
        names.push_back(source.coords[k]);
      }
    }
    return Projection(LinearChange(source, q, names), forms.size());
  }

  const Space &source() const { return change_.source(); }
  const Space &target() const { return target_; }
  const Space &adapted() const { return change_.target(); }
  const LinearChange &change() const { return change_; }
  std::size_t base_dim() const { return m_; }
  std::size_t fiber_dim() const { return change_.dim() - m_; }

  /// Constant vector fields spanning the fibres, in source coordinates.
  std::vector<PolyVector> fiber_fields() const {
    const std::size_t n = change_.dim();
    std::vector<PolyVector> out;
    for (std::size_t f = m_; f < n; ++f) {
      dense::Vector v = change_.target_direction(f);
      PolyVector u;
      for (const auto &c : v) u.push_back(Polynomial::constant(n, c));
      out.push_back(std::move(u));
    }
    return out;
  }

private:
  LinearChange change_;
  std::size_t m_ = 0;
  Space target_;
};

/// Submanifold X ⊂ R^n: a graph x_j = g_j(x_B) over the base coordinates B. Affine slices are
/// graphs of constants and the whole space has no dependents. Intrinsic coordinates are x_B.
class Submanifold {
public:
  Submanifold() = default;

  static Submanifold whole(const Space &sp) { return graph(sp, {}); }

  static Submanifold slice(const Space &sp, const std::map<std::size_t, Scalar> &fixed) {
    std::map<std::size_t, Polynomial> dep;
    for (const auto &[j, c] : fixed) dep.emplace(j, Polynomial::constant(sp.dim(), c));
    return graph(sp, dep);
  }

  /// `dependents` are polynomials in the ambient variables that may involve base coordinates only.
  static Submanifold graph(const Space &sp, const std::map<std::size_t, Polynomial> &dependents) {
    Submanifold x;
    const std::size_t n = sp.dim();
    x.ambient_ = sp;
    std::vector<bool> dep(n, false);
    for (const auto &[j, g] : dependents) {
      if (j >= n) throw IndexOutOfRange("submanifold constrains an unknown coordinate");
      if (g.nvars() != n) throw DimensionMismatch("graph function has wrong variable count");
      dep[j] = true;
    }
    std::vector<std::size_t> slot(n, 0);
    for (std::size_t k = 0; k < n; ++k)
      if (!dep[k]) {
        slot[k] = x.base_.size();
        x.base_.push_back(k);
      }
    const std::size_t d = x.base_.size();
    std::vector<Polynomial> to_intrinsic(n, Polynomial(d));
    for (std::size_t k = 0; k < n; ++k)
      if (!dep[k]) to_intrinsic[k] = Polynomial::variable(d, slot[k]);
    x.dep_.assign(n, std::nullopt);
    for (const auto &[j, g] : dependents) {
      for (std::size_t k = 0; k < n; ++k)
        if (dep[k] && g.depends_on(k))
          throw InvalidArgument("graph function for " + sp.coords[j] + " involves a constrained coordinate");
      x.dep_[j] = g.compose(to_intrinsic, d);
    }
    for (std::size_t k = 0; k < n; ++k) x.embedding_.push_back(dep[k] ? *x.dep_[k] : to_intrinsic[k]);
    std::vector<std::string> names;
    for (auto b : x.base_) names.push_back(sp.coords[b]);
    x.intrinsic_ = Space{std::move(names), sp.field};
    for (std::size_t b = 0; b < d; ++b) x.to_ambient_.push_back(Polynomial::variable(n, x.base_[b]));
    return x;
  }

  const Space &ambient() const { return ambient_; }
  const Space &intrinsic() const { return intrinsic_; }
  std::size_t dim() const { return base_.size(); }
  std::size_t ambient_dim() const { return ambient_.dim(); }
  const std::vector<std::size_t> &base() const { return base_; }
  bool is_whole() const { return base_.size() == ambient_.dim(); }
  std::vector<std::size_t> dependents() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < dep_.size(); ++k)
      if (dep_[k]) out.push_back(k);
    return out;
  }
  /// g_j in intrinsic variables.
  const Polynomial &graph_function(std::size_t j) const { return *dep_.at(j); }

  Polynomial restrict(const Polynomial &f) const { return f.compose(embedding_, dim()); }
  PolyVector restrict(const PolyVector &v) const {
    PolyVector out;
    for (const auto &p : v) out.push_back(restrict(p));
    return out;
  }
  GenSection restrict(const GenSection &s) const { return GenSection(restrict(s.vec), restrict(s.cov)); }

  /// Extension of an intrinsic function, constant along the dependent directions.
  Polynomial extend(const Polynomial &h) const { return h.compose(to_ambient_, ambient_dim()); }
  PolyVector extend(const PolyVector &v) const {
    PolyVector out;
    for (const auto &p : v) out.push_back(extend(p));
    return out;
  }
  GenSection extend(const GenSection &s) const { return GenSection(extend(s.vec), extend(s.cov)); }

  ProbePoint lift(const ProbePoint &y) const {
    ProbePoint x;
    for (const auto &p : embedding_) x.push_back(p.evaluate(y));
    return x;
  }

  /// i_* w for intrinsic components w (intrinsic ring), as ambient components.
  PolyVector push_vector(const PolyVector &w) const {
    const std::size_t n = ambient_dim(), d = dim();
    PolyVector out(n, Polynomial(d));
    for (std::size_t b = 0; b < d; ++b) {
      if (w[b].is_zero()) continue;
      out[base_[b]] += w[b];
      for (std::size_t j = 0; j < n; ++j)
        if (dep_[j]) {
          Polynomial dg = dep_[j]->partial(b);
          if (!dg.is_zero()) out[j] += w[b] * dg;
        }
    }
    return out;
  }

  /// {∂_b + Σ_j ∂_b g_j ∂_j}, with ambient coefficients.
  std::vector<GenSection> tangent_frame() const {
    const std::size_t n = ambient_dim(), d = dim();
    std::vector<GenSection> out;
    for (std::size_t b = 0; b < d; ++b) {
      GenSection s = GenSection::partial(n, base_[b], n);
      for (std::size_t j = 0; j < n; ++j)
        if (dep_[j]) s.vec[j] = extend(dep_[j]->partial(b));
      out.push_back(std::move(s));
    }
    return out;
  }

  /// {dx_j − dg_j}, with ambient coefficients.
  std::vector<GenSection> conormal_frame() const {
    const std::size_t n = ambient_dim(), d = dim();
    std::vector<GenSection> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (!dep_[j]) continue;
      GenSection s = GenSection::differential(n, j, n);
      for (std::size_t b = 0; b < d; ++b) s.cov[base_[b]] = -extend(dep_[j]->partial(b));
      out.push_back(std::move(s));
    }
    return out;
  }

  /// Intrinsic covector i^*ξ for ambient components ξ (intrinsic ring).
  PolyVector pull_covector(const PolyVector &xi) const {
    const std::size_t n = ambient_dim(), d = dim();
    PolyVector out;
    for (std::size_t b = 0; b < d; ++b) {
      Polynomial c = xi[base_[b]];
      for (std::size_t j = 0; j < n; ++j)
        if (dep_[j] && !xi[j].is_zero()) {
          Polynomial dg = dep_[j]->partial(b);
          if (!dg.is_zero()) c += xi[j] * dg;
        }
      out.push_back(std::move(c));
    }
    return out;
  }

private:
  Space ambient_, intrinsic_;
  std::vector<std::size_t> base_;
  std::vector<std::optional<Polynomial>> dep_;
  std::vector<Polynomial> embedding_;   // ambient coordinates as intrinsic polynomials
  std::vector<Polynomial> to_ambient_;  // intrinsic coordinates as ambient polynomials
};

} // namespace dirac
