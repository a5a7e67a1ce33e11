#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace dirac {

/// Coefficient field of a computation: the rationals or the Gaussian rationals.
enum class Field { rational, gaussian };

inline const char *field_name(Field f) { return f == Field::rational ? "rational" : "gaussian"; }

/// Exact element of Q(i). Rational-mode values simply keep a zero imaginary part.
class Scalar {
public:
  Scalar() = default;
  Scalar(int v) : re_(v) {}
  Scalar(long v) : re_(v) {}
  Scalar(long num, long den) : re_(num, den) {
    if (den == 0) throw std::domain_error("zero denominator");
    re_.canonicalize();
  }
  explicit Scalar(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar imaginary_unit() { return Scalar(mpq_class(0), mpq_class(1)); }

  const mpq_class &re() const { return re_; }
  const mpq_class &im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero scalar");
    if (is_real()) return Scalar(mpq_class(1) / re_);
    mpq_class n = norm();
    return Scalar(re_ / n, -im_ / n);
  }

  Scalar &operator+=(const Scalar &o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
  }
  Scalar &operator-=(const Scalar &o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
  }
  Scalar &operator*=(const Scalar &o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Scalar &operator/=(const Scalar &o) {
    if (o.is_real()) {
      if (sgn(o.re_) == 0) throw std::domain_error("division by zero scalar");
      re_ /= o.re_;
      if (sgn(im_) != 0) im_ /= o.re_;
      return *this;
    }
    return *this *= o.inverse();
  }

  friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }
  Scalar operator-() const { return Scalar(-re_, -im_); }

  friend bool operator==(const Scalar &a, const Scalar &b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Scalar &a, const Scalar &b) { return !(a == b); }

  /// Parseable text in the polynomial grammar, e.g. `-3/2`, `i`, `1 + 2*i`.
  std::string str() const {
    if (is_real()) return re_.get_str();
    std::string out;
    if (sgn(re_) != 0) out = re_.get_str();
    mpq_class a = abs(im_);
    std::string mag = (a == 1) ? "i" : a.get_str() + "*i";
    if (out.empty())
      out = (sgn(im_) < 0 ? "-" : "") + mag;
    else
      out += (sgn(im_) < 0 ? " - " : " + ") + mag;
    return out;
  }

private:
  mpq_class re_{0};
  mpq_class im_{0};
};

} // namespace dirac
