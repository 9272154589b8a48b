#pragma once

// Sparse Laurent polynomials in the parameter alphabet {q, t, h, z} with
// exact coefficients. Terms are kept sorted by exponent vector in descending
// lexicographic order with no zero coefficients, so equality is syntactic.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "opera/rational.hpp"

namespace opera {

inline constexpr std::size_t kNumVars = 4;

enum class Var : std::uint8_t { q = 0, t = 1, h = 2, z = 3 };

inline constexpr std::array<const char*, kNumVars> kVarNames = {"q", "t", "h", "z"};

using Exponents = std::array<std::int32_t, kNumVars>;

inline Exponents unit_exponent(Var v, std::int32_t e = 1) {
  Exponents x{};
  x[static_cast<std::size_t>(v)] = e;
  return x;
}

inline Exponents operator+(Exponents a, const Exponents& b) {
  for (std::size_t i = 0; i < kNumVars; ++i) a[i] += b[i];
  return a;
}

inline Exponents operator-(Exponents a, const Exponents& b) {
  for (std::size_t i = 0; i < kNumVars; ++i) a[i] -= b[i];
  return a;
}

inline bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < kNumVars; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

template <class Coeff>
class SparsePoly {
 public:
  struct Term {
    Exponents exp;
    Coeff coeff;
    bool operator==(const Term&) const = default;
  };

  SparsePoly() = default;
  explicit SparsePoly(Coeff c) {
    if (c != 0) terms_.push_back({Exponents{}, std::move(c)});
  }
  SparsePoly(const Exponents& e, Coeff c) {
    if (c != 0) terms_.push_back({e, std::move(c)});
  }

  static SparsePoly variable(Var v) { return SparsePoly(unit_exponent(v), Coeff(1)); }

  // Builds from arbitrary terms: sorts, merges, drops zeros.
  static SparsePoly from_terms(std::vector<Term> terms) {
    SparsePoly p;
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exp == Exponents{});
  }
  bool is_monomial() const { return terms_.size() == 1; }
  Coeff constant_value() const {
    for (const auto& t : terms_)
      if (t.exp == Exponents{}) return t.coeff;
    return Coeff(0);
  }
  bool is_one() const { return terms_.size() == 1 && terms_[0].exp == Exponents{} && terms_[0].coeff == 1; }

  const Term& leading() const { return terms_.front(); }
  const Coeff& leading_coeff() const { return terms_.front().coeff; }

  std::int32_t degree(Var v) const {
    std::int32_t d = 0;
    bool first = true;
    for (const auto& t : terms_) {
      auto e = t.exp[static_cast<std::size_t>(v)];
      if (first || e > d) d = e;
      first = false;
    }
    return d;
  }

  Exponents min_exponents() const {
    Exponents m{};
    bool first = true;
    for (const auto& t : terms_) {
      for (std::size_t i = 0; i < kNumVars; ++i)
        m[i] = first ? t.exp[i] : std::min(m[i], t.exp[i]);
      first = false;
    }
    return m;
  }

  bool contains(Var v) const {
    for (const auto& t : terms_)
      if (t.exp[static_cast<std::size_t>(v)] != 0) return true;
    return false;
  }

  bool operator==(const SparsePoly& o) const { return terms_ == o.terms_; }

  SparsePoly operator-() const {
    SparsePoly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  SparsePoly& operator+=(const SparsePoly& o) { return *this = merge(*this, o, false); }
  SparsePoly& operator-=(const SparsePoly& o) { return *this = merge(*this, o, true); }
  friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) { return merge(a, b, false); }
  friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) { return merge(a, b, true); }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b * a.terms_[0].coeff;
    if (b.is_constant()) return a * b.terms_[0].coeff;
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) out.push_back({x.exp + y.exp, x.coeff * y.coeff});
    return from_terms(std::move(out));
  }

  friend SparsePoly operator*(const SparsePoly& a, const Coeff& c) {
    if (c == 0) return {};
    SparsePoly r = a;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }
  SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

  // Multiplies by the Laurent monomial x^shift.
  SparsePoly shifted(const Exponents& shift) const {
    SparsePoly r = *this;
    for (auto& t : r.terms_) t.exp = t.exp + shift;
    return r;
  }

  // Exact division; nullopt if b does not divide a. Coefficient division must
  // be exact in the coefficient domain (checked for integer coefficients).
  static std::optional<SparsePoly> divide_exact(const SparsePoly& a, const SparsePoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.is_zero()) return SparsePoly{};
    if (b.is_monomial()) {
      SparsePoly r;
      r.terms_.reserve(a.size());
      for (const auto& t : a.terms_) {
        auto c = div_coeff(t.coeff, b.terms_[0].coeff);
        if (!c) return std::nullopt;
        r.terms_.push_back({t.exp - b.terms_[0].exp, *c});
      }
      return r;
    }
    SparsePoly rem = a;
    std::vector<Term> quot;
    const auto& lb = b.terms_[0];
    while (!rem.is_zero()) {
      const auto& lr = rem.terms_[0];
      if (!divides(lb.exp, lr.exp)) return std::nullopt;
      auto c = div_coeff(lr.coeff, lb.coeff);
      if (!c) return std::nullopt;
      Term qt{lr.exp - lb.exp, *c};
      SparsePoly step;
      step.terms_.reserve(b.size());
      for (const auto& t : b.terms_) step.terms_.push_back({t.exp + qt.exp, t.coeff * qt.coeff});
      rem -= step;
      quot.push_back(std::move(qt));
    }
    return from_terms(std::move(quot));
  }

  // Evaluates variable v at value; the result no longer contains v.
  SparsePoly evaluate(Var v, const Coeff& value) const {
    const auto vi = static_cast<std::size_t>(v);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Exponents e = t.exp;
      auto k = e[vi];
      e[vi] = 0;
      if (k < 0) {
        if (value == 0) throw std::domain_error("evaluation of a negative power at zero");
        out.push_back({e, t.coeff / power(value, -k)});
      } else {
        out.push_back({e, t.coeff * power(value, k)});
      }
    }
    return from_terms(std::move(out));
  }

  // Coefficient of v^k as a polynomial in the remaining variables.
  SparsePoly coefficient(Var v, std::int32_t k) const {
    const auto vi = static_cast<std::size_t>(v);
    std::vector<Term> out;
    for (const auto& t : terms_)
      if (t.exp[vi] == k) {
        Exponents e = t.exp;
        e[vi] = 0;
        out.push_back({e, t.coeff});
      }
    return from_terms(std::move(out));
  }

  static Coeff power(const Coeff& base, std::int64_t k) {
    Coeff r(1), b(base);
    while (k > 0) {
      if (k & 1) r *= b;
      b *= b;
      k >>= 1;
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : terms_) {
      Coeff c = t.coeff;
      bool neg = c < 0;
      if (neg) c = -c;
      if (first) {
        if (neg) s += "-";
      } else {
        s += neg ? " - " : " + ";
      }
      first = false;
      bool unit = (c == 1);
      bool is_const = (t.exp == Exponents{});
      if (!unit || is_const) s += c.get_str();
      bool need_star = !unit || is_const;
      for (std::size_t i = 0; i < kNumVars; ++i) {
        if (t.exp[i] == 0) continue;
        if (need_star) s += "*";
        s += kVarNames[i];
        if (t.exp[i] != 1) s += "^" + std::to_string(t.exp[i]);
        need_star = true;
      }
    }
    return s;
  }

 private:
  std::vector<Term> terms_;

  static bool exp_greater(const Exponents& a, const Exponents& b) { return a > b; }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.exp > b.exp; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().exp == t.exp) {
        out.back().coeff += t.coeff;
      } else {
        if (!out.empty() && out.back().coeff == 0) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
    terms_ = std::move(out);
  }

  static SparsePoly merge(const SparsePoly& a, const SparsePoly& b, bool subtract) {
    SparsePoly r;
    r.terms_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j >= b.size() || (i < a.size() && a.terms_[i].exp > b.terms_[j].exp)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i >= a.size() || b.terms_[j].exp > a.terms_[i].exp) {
        r.terms_.push_back(b.terms_[j++]);
        if (subtract) r.terms_.back().coeff = -r.terms_.back().coeff;
      } else {
        Coeff c = subtract ? Coeff(a.terms_[i].coeff - b.terms_[j].coeff) : Coeff(a.terms_[i].coeff + b.terms_[j].coeff);
        if (c != 0) r.terms_.push_back({a.terms_[i].exp, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  static std::optional<Coeff> div_coeff(const Coeff& a, const Coeff& b) {
    if constexpr (std::is_same_v<Coeff, Integer>) {
      if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) return std::nullopt;
      Integer q;
      mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      return q;
    } else {
      return Coeff(a / b);
    }
  }
};

using QPoly = SparsePoly<Rational>;
using ZPoly = SparsePoly<Integer>;

// Greatest common divisor over Q, returned monic (leading coefficient 1 in
// descending lex order). gcd(0, 0) = 0. Inputs must be genuine polynomials
// (no negative exponents).
QPoly poly_gcd(const QPoly& a, const QPoly& b);

// Integer-coefficient gcd, primitive with positive leading coefficient.
ZPoly poly_gcd(const ZPoly& a, const ZPoly& b);

// Scales a rational polynomial to a primitive integer polynomial with positive
// leading coefficient: p = scale * result.
std::pair<ZPoly, Rational> to_primitive_integer(const QPoly& p);
QPoly to_rational(const ZPoly& p);

}  // namespace opera
