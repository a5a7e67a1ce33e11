#pragma once

#include "errors.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirac {

using Exponents = std::vector<std::uint32_t>;

inline unsigned total_degree(const Exponents &e) {
  unsigned d = 0;
  for (auto x : e) d += x;
  return d;
}

/// Graded-lexicographic order with x1 > x2 > ... ; `a` strictly above `b`.
struct GrlexGreater {
  bool operator()(const Exponents &a, const Exponents &b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

inline bool divides(const Exponents &a, const Exponents &b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

/// Sparse multivariate polynomial over Q(i) in canonical grlex-descending term order.
class Polynomial {
public:
  struct Term {
    Exponents exp;
    Scalar coef;
  };

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : n_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Scalar &c) {
    Polynomial p(nvars);
    if (!c.is_zero()) p.terms_.push_back({Exponents(nvars, 0), c});
    return p;
  }
  static Polynomial one(std::size_t nvars) { return constant(nvars, Scalar(1)); }
  static Polynomial variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw IndexOutOfRange("variable index " + std::to_string(i + 1) + " out of range");
    Exponents e(nvars, 0);
    e[i] = 1;
    Polynomial p(nvars);
    p.terms_.push_back({std::move(e), Scalar(1)});
    return p;
  }
  static Polynomial monomial(std::size_t nvars, Exponents e, const Scalar &c) {
    if (e.size() != nvars) throw DimensionMismatch("exponent vector length differs from variable count");
    Polynomial p(nvars);
    if (!c.is_zero()) p.terms_.push_back({std::move(e), c});
    return p;
  }

  std::size_t nvars() const { return n_; }
  const std::vector<Term> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].exp) == 0); }
  Scalar constant_term() const {
    if (!terms_.empty() && total_degree(terms_.back().exp) == 0) return terms_.back().coef;
    return Scalar(0);
  }
  unsigned degree() const { return terms_.empty() ? 0 : total_degree(terms_.front().exp); }
  const Term &leading() const { return terms_.front(); }

  bool has_imaginary() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term &t) { return !t.coef.is_real(); });
  }
  bool depends_on(std::size_t i) const {
    return std::any_of(terms_.begin(), terms_.end(), [i](const Term &t) { return t.exp[i] != 0; });
  }

  Polynomial &operator+=(const Polynomial &o) { return *this = combine(*this, o, false); }
  Polynomial &operator-=(const Polynomial &o) { return *this = combine(*this, o, true); }
  Polynomial &operator*=(const Polynomial &o) { return *this = *this * o; }
  Polynomial &operator*=(const Scalar &c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto &t : terms_) t.coef *= c;
    return *this;
  }

  friend Polynomial operator+(const Polynomial &a, const Polynomial &b) { return combine(a, b, false); }
  friend Polynomial operator-(const Polynomial &a, const Polynomial &b) { return combine(a, b, true); }
  friend Polynomial operator*(Polynomial a, const Scalar &c) { return a *= c; }
  friend Polynomial operator*(const Scalar &c, Polynomial a) { return a *= c; }
  Polynomial operator-() const { return *this * Scalar(-1); }

  friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
    check_same(a, b);
    Polynomial out(a.n_);
    if (a.is_zero() || b.is_zero()) return out;
    if (a.terms_.size() == 1 || b.terms_.size() == 1) {
      const Polynomial &m = a.terms_.size() == 1 ? a : b;
      const Polynomial &p = a.terms_.size() == 1 ? b : a;
      out.terms_.reserve(p.terms_.size());
      for (const auto &t : p.terms_) out.terms_.push_back({add_exp(t.exp, m.terms_[0].exp), t.coef * m.terms_[0].coef});
      return out;
    }
    std::map<Exponents, Scalar, GrlexGreater> acc;
    for (const auto &s : a.terms_)
      for (const auto &t : b.terms_) {
        auto [it, fresh] = acc.try_emplace(add_exp(s.exp, t.exp), s.coef * t.coef);
        if (!fresh) it->second += s.coef * t.coef;
      }
    for (auto &[e, c] : acc)
      if (!c.is_zero()) out.terms_.push_back({e, c});
    return out;
  }

  friend bool operator==(const Polynomial &a, const Polynomial &b) {
    if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
      if (a.terms_[k].exp != b.terms_[k].exp || a.terms_[k].coef != b.terms_[k].coef) return false;
    return true;
  }
  friend bool operator!=(const Polynomial &a, const Polynomial &b) { return !(a == b); }

  Polynomial pow(unsigned k) const {
    Polynomial result = one(n_), base = *this;
    while (k) {
      if (k & 1u) result *= base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return result;
  }

  Scalar evaluate(const std::vector<Scalar> &pt) const {
    if (pt.size() != n_) throw DimensionMismatch("evaluation point has wrong length");
    Scalar acc(0);
    for (const auto &t : terms_) {
      Scalar m = t.coef;
      for (std::size_t k = 0; k < n_; ++k)
        for (std::uint32_t e = 0; e < t.exp[k]; ++e) m *= pt[k];
      acc += m;
    }
    return acc;
  }

  Polynomial partial(std::size_t i) const {
    if (i >= n_) throw IndexOutOfRange("partial derivative index " + std::to_string(i + 1) + " out of range");
    Polynomial out(n_);
    for (const auto &t : terms_) {
      if (t.exp[i] == 0) continue;
      Term d{t.exp, t.coef * Scalar(static_cast<long>(t.exp[i]))};
      --d.exp[i];
      out.terms_.push_back(std::move(d));
    }
    // Differentiation in one variable keeps grlex order among surviving terms.
    return out;
  }

  Polynomial conj() const {
    Polynomial out = *this;
    for (auto &t : out.terms_) t.coef = t.coef.conj();
    return out;
  }

  /// Replace variable k by images[k]; all images share `target_nvars` variables.
  Polynomial compose(const std::vector<Polynomial> &images, std::size_t target_nvars) const {
    if (images.size() != n_) throw DimensionMismatch("composition needs one image per variable");
    for (const auto &img : images)
      if (img.nvars() != target_nvars) throw DimensionMismatch("composition images have mismatched variable counts");
    std::vector<std::vector<Polynomial>> powers(n_);
    auto power_of = [&](std::size_t k, std::uint32_t e) -> const Polynomial & {
      auto &cache = powers[k];
      if (cache.empty()) cache.push_back(one(target_nvars));
      while (cache.size() <= e) cache.push_back(cache.back() * images[k]);
      return cache[e];
    };
    Polynomial acc(target_nvars);
    for (const auto &t : terms_) {
      Polynomial m = constant(target_nvars, t.coef);
      for (std::size_t k = 0; k < n_; ++k)
        if (t.exp[k]) m *= power_of(k, t.exp[k]);
      acc += m;
    }
    return acc;
  }

  /// Partial substitution within the same ring; unassigned variables stay.
  Polynomial substitute(const std::map<std::size_t, Polynomial> &assignment) const {
    std::vector<Polynomial> images;
    images.reserve(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      auto it = assignment.find(k);
      if (it == assignment.end()) {
        images.push_back(variable(n_, k));
      } else {
        if (it->second.nvars() != n_) throw DimensionMismatch("substituted polynomial has wrong variable count");
        images.push_back(it->second);
      }
    }
    return compose(images, n_);
  }

  /// Grammar text with the given variable names (default x1..xn).
  std::string str(const std::vector<std::string> &names = {}) const {
    if (terms_.empty()) return "0";
    std::string out;
    auto emit = [&](const mpq_class &c, const std::string &mono, bool imag) {
      if (sgn(c) == 0) return;
      bool neg = sgn(c) < 0;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      mpq_class mag = abs(c);
      std::vector<std::string> factors;
      if (mag != 1) factors.push_back(mag.get_str());
      if (imag) factors.push_back("i");
      if (!mono.empty()) factors.push_back(mono);
      if (factors.empty()) factors.push_back("1");
      for (std::size_t k = 0; k < factors.size(); ++k) out += (k ? "*" : "") + factors[k];
    };
    for (const auto &t : terms_) {
      std::string mono;
      for (std::size_t k = 0; k < n_; ++k) {
        if (t.exp[k] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += k < names.size() ? names[k] : "x" + std::to_string(k + 1);
        if (t.exp[k] > 1) mono += "^" + std::to_string(t.exp[k]);
      }
      emit(t.coef.re(), mono, false);
      emit(t.coef.im(), mono, true);
    }
    return out;
  }

private:
  static void check_same(const Polynomial &a, const Polynomial &b) {
    if (a.n_ != b.n_)
      throw DimensionMismatch("variable-count mismatch: " + std::to_string(a.n_) + " vs " + std::to_string(b.n_));
  }
  static Exponents add_exp(const Exponents &a, const Exponents &b) {
    Exponents e(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) e[k] = a[k] + b[k];
    return e;
  }
  static Polynomial combine(const Polynomial &a, const Polynomial &b, bool subtract) {
    check_same(a, b);
    Polynomial out(a.n_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    GrlexGreater gt;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && gt(a.terms_[i].exp, b.terms_[j].exp))) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || gt(b.terms_[j].exp, a.terms_[i].exp)) {
        out.terms_.push_back({b.terms_[j].exp, subtract ? -b.terms_[j].coef : b.terms_[j].coef});
        ++j;
      } else {
        Scalar c = subtract ? a.terms_[i].coef - b.terms_[j].coef : a.terms_[i].coef + b.terms_[j].coef;
        if (!c.is_zero()) out.terms_.push_back({a.terms_[i].exp, std::move(c)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::size_t n_ = 0;
  std::vector<Term> terms_;
};

/// Quotient f/g when g divides f exactly, otherwise nullopt.
inline std::optional<Polynomial> divide_exact(const Polynomial &f, const Polynomial &g) {
  if (g.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (f.nvars() != g.nvars()) throw DimensionMismatch("variable-count mismatch in division");
  std::size_t n = f.nvars();
  if (g.is_constant()) return f * g.constant_term().inverse();
  Polynomial q(n), r = f;
  const auto &lg = g.leading();
  Scalar lc_inv = lg.coef.inverse();
  while (!r.is_zero()) {
    const auto &lr = r.leading();
    if (!divides(lg.exp, lr.exp)) return std::nullopt;
    Exponents e(n);
    for (std::size_t k = 0; k < n; ++k) e[k] = lr.exp[k] - lg.exp[k];
    Polynomial t = Polynomial::monomial(n, std::move(e), lr.coef * lc_inv);
    q += t;
    r -= t * g;
  }
  return q;
}

/// Recursive-descent parser for the polynomial grammar: signed rational literals `a` or `a/b`,
/// the imaginary unit `i` (Gaussian mode), declared variable names, `+ - *`, and `^` with a
/// non-negative integer literal exponent. Multiplication is always explicit.
class PolynomialParser {
public:
  PolynomialParser(std::string_view text, const std::vector<std::string> &names, Field field)
      : s_(text), names_(names), field_(field) {}

  Polynomial parse() {
    skip_ws();
    if (pos_ == s_.size()) fail("empty polynomial");
    Polynomial acc(names_.size());
    bool first = true;
    while (true) {
      skip_ws();
      bool neg = false;
      if (peek() == '+' || peek() == '-') {
        neg = peek() == '-';
        ++pos_;
        skip_ws();
      } else if (!first) {
        break;
      }
      Polynomial t = term();
      acc += neg ? -t : t;
      first = false;
      skip_ws();
      if (pos_ == s_.size()) break;
      if (peek() != '+' && peek() != '-') fail(std::string("unexpected character '") + peek() + "'");
    }
    if (pos_ != s_.size()) fail(std::string("unexpected character '") + peek() + "'");
    return acc;
  }

private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(msg + " at column " + std::to_string(pos_ + 1), pos_ + 1);
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (true) {
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      skip_ws();
      acc *= factor();
    }
    return acc;
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Polynomial factor() {
    std::size_t n = names_.size();
    Polynomial base(n);
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num(digits());
      mpz_class den(1);
      skip_ws();
      if (peek() == '/') {
        ++pos_;
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected denominator digits");
        den = mpz_class(digits());
        if (den == 0) fail("zero denominator");
      }
      mpq_class q(num, den);
      q.canonicalize();
      base = Polynomial::constant(n, Scalar(q));
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "i") {
        if (field_ != Field::gaussian) {
          pos_ = start;
          fail("imaginary unit 'i' is only allowed in gaussian mode");
        }
        base = Polynomial::constant(n, Scalar::imaginary_unit());
      } else {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) {
          pos_ = start;
          fail("unknown variable '" + name + "'");
        }
        base = Polynomial::variable(n, static_cast<std::size_t>(it - names_.begin()));
      }
    } else if (c == '\0') {
      fail("unexpected end of input");
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("exponent must be a non-negative integer literal");
      std::string e = digits();
      if (e.size() > 4) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(std::stoul(e)));
    }
    return base;
  }

  std::string_view s_;
  const std::vector<std::string> &names_;
  Field field_;
  std::size_t pos_ = 0;
};

inline std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back("x" + std::to_string(k + 1));
  return v;
}

inline Polynomial parse_polynomial(std::string_view text, const std::vector<std::string> &names,
                                   Field field = Field::rational) {
  return PolynomialParser(text, names, field).parse();
}

/// Convenience for code and tests: variables x1..xn.
inline Polynomial parse_polynomial(std::string_view text, std::size_t nvars, Field field = Field::rational) {
  auto names = default_names(nvars);
  return PolynomialParser(text, names, field).parse();
}

} // namespace dirac
