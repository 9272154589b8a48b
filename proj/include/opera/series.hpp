#pragma once

// Truncated Laurent series in one formal variable over a commutative
// coefficient ring C. The coefficient ring must provide +, -, *, unary -,
// ==, is_zero(), and explicit construction from Rational. Inversion of a
// leading coefficient goes through invert_coefficient(const C&), found by ADL.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "opera/param_rational.hpp"
#include "opera/rational.hpp"

namespace opera {

class SeriesError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline ParamRational invert_coefficient(const ParamRational& c) { return c.inverse(); }

// a + b eps with eps^2 = 0. Used for first-order expansions around a point.
template <class C>
struct Dual {
  C a{};
  C b{};

  Dual() = default;
  explicit Dual(const Rational& r) : a(r), b() {}
  Dual(C a_, C b_) : a(std::move(a_)), b(std::move(b_)) {}

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  bool operator==(const Dual&) const = default;
  Dual operator-() const { return {-a, -b}; }
  friend Dual operator+(const Dual& x, const Dual& y) { return {x.a + y.a, x.b + y.b}; }
  friend Dual operator-(const Dual& x, const Dual& y) { return {x.a - y.a, x.b - y.b}; }
  friend Dual operator*(const Dual& x, const Dual& y) { return {x.a * y.a, x.a * y.b + x.b * y.a}; }
  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  friend Dual invert_coefficient(const Dual& x) {
    C ia = invert_coefficient(x.a);
    return {ia, -(x.b * ia * ia)};
  }
  friend Dual operator/(const Dual& x, const Dual& y) { return x * invert_coefficient(y); }
};

template <class C>
class TruncatedSeries {
 public:
  // The zero series O(var^order).
  TruncatedSeries(char var, int order) : var_(var), order_(order) {}

  static TruncatedSeries constant(char var, int order, const C& c) {
    TruncatedSeries s(var, order);
    s.set(0, c);
    return s;
  }
  static TruncatedSeries monomial(char var, int order, int k, const C& c) {
    TruncatedSeries s(var, order);
    s.set(k, c);
    return s;
  }

  char variable() const { return var_; }
  int order() const { return order_; }
  const std::map<int, C>& coefficients() const { return coeffs_; }

  C coeff(int k) const {
    if (k >= order_) throw SeriesError("coefficient beyond truncation order requested");
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? C() : it->second;
  }

  // Terms at or above the order are dropped.
  void set(int k, C c) {
    if (k >= order_) return;
    if (c.is_zero())
      coeffs_.erase(k);
    else
      coeffs_[k] = std::move(c);
  }
  void add(int k, const C& c) {
    if (k >= order_ || c.is_zero()) return;
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) {
      coeffs_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  bool is_zero() const { return coeffs_.empty(); }
  // Lowest exponent carrying a nonzero coefficient; order() for the zero series.
  int valuation() const { return coeffs_.empty() ? order_ : coeffs_.begin()->first; }

  bool operator==(const TruncatedSeries& o) const {
    return var_ == o.var_ && order_ == o.order_ && coeffs_ == o.coeffs_;
  }

  TruncatedSeries truncate(int order) const {
    if (order > order_) throw SeriesError("truncation order cannot be widened");
    TruncatedSeries r(var_, order);
    for (const auto& [k, c] : coeffs_)
      if (k < order) r.coeffs_.emplace(k, c);
    return r;
  }

  TruncatedSeries operator-() const {
    TruncatedSeries r = *this;
    for (auto& [k, c] : r.coeffs_) c = -c;
    return r;
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_var(a, b);
    TruncatedSeries r = a.truncate(std::min(a.order_, b.order_));
    for (const auto& [k, c] : b.coeffs_) r.add(k, c);
    return r;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_var(a, b);
    const int va = a.valuation(), vb = b.valuation();
    const int order = std::min({a.order_, b.order_, a.order_ + vb, b.order_ + va});
    TruncatedSeries r(a.var_, order);
    for (const auto& [i, x] : a.coeffs_)
      for (const auto& [j, y] : b.coeffs_) {
        if (i + j >= order) break;
        r.add(i + j, x * y);
      }
    return r;
  }

  TruncatedSeries scaled(const C& c) const {
    TruncatedSeries r(var_, order_);
    for (const auto& [k, x] : coeffs_) r.set(k, x * c);
    return r;
  }
  TruncatedSeries scaled(const Rational& c) const { return scaled(C(c)); }

  // d/dvar; the order drops by one.
  TruncatedSeries derivative() const {
    TruncatedSeries r(var_, order_ - 1);
    for (const auto& [k, x] : coeffs_)
      if (k != 0) r.set(k - 1, x * C(Rational(k)));
    return r;
  }

  TruncatedSeries pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    TruncatedSeries r = constant(var_, order_, C(Rational(1)));
    TruncatedSeries b = *this;
    bool first = true;
    while (k > 0) {
      if (k & 1) {
        r = first ? b : r * b;
        first = false;
      }
      k >>= 1;
      if (k > 0) b = b * b;
    }
    return r;
  }

  // Multiplicative inverse. A leading term c var^v yields order N - 2v.
  TruncatedSeries inverse() const {
    if (is_zero()) throw SeriesError("inverse of a zero series");
    const int v = valuation();
    const int n = order_ - v;  // relative precision
    const C inv0 = invert_coefficient(coeffs_.begin()->second);
    // Work with the unit part u = this / var^v, known to relative precision n.
    std::map<int, C> b;
    b[0] = inv0;
    for (int m = 1; m < n; ++m) {
      C acc{};
      for (int k = 1; k <= m; ++k) {
        auto it = coeffs_.find(v + k);
        if (it == coeffs_.end()) continue;
        auto jt = b.find(m - k);
        if (jt == b.end()) continue;
        acc += it->second * jt->second;
      }
      if (!acc.is_zero()) b[m] = -(acc * inv0);
    }
    TruncatedSeries r(var_, n - v);
    for (auto& [k, c] : b) r.set(k - v, c);
    return r;
  }

  // exp(s) for s with no terms of exponent <= 0.
  TruncatedSeries exp() const {
    if (!coeffs_.empty() && coeffs_.begin()->first <= 0)
      throw SeriesError("series_exp requires a series with zero constant term");
    TruncatedSeries r(var_, order_);
    if (order_ <= 0) return r;
    std::map<int, C> e;
    e[0] = C(Rational(1));
    for (int n = 1; n < order_; ++n) {
      C acc{};
      for (const auto& [k, sk] : coeffs_) {
        if (k > n) break;
        auto it = e.find(n - k);
        if (it == e.end()) continue;
        acc += sk * it->second * C(Rational(k));
      }
      if (!acc.is_zero()) e[n] = acc * C(Rational(1, n));
    }
    for (auto& [k, c] : e) r.set(k, c);
    return r;
  }

  // this(g) for g with valuation >= 1 (or this a polynomial of nonnegative
  // exponents with only finitely many terms, which always holds).
  TruncatedSeries compose(const TruncatedSeries& g) const {
    if (!coeffs_.empty() && coeffs_.begin()->first < 0)
      throw SeriesError("composition of a series with negative exponents");
    if (!g.is_zero() && g.valuation() < 1)
      throw SeriesError("composition requires an inner series without constant term");
    const int vg = g.is_zero() ? g.order_ : g.valuation();
    // Terms k of this contribute at order >= k * vg; precision of g^k is
    // g.order + (k-1) vg, and the outer truncation bounds k < order_.
    int order = g.order_;
    if (vg > 0) order = std::min(order, order_ * vg);
    TruncatedSeries r(g.var_, order);
    TruncatedSeries gk = constant(g.var_, order, C(Rational(1)));
    int prev = 0;
    for (const auto& [k, c] : coeffs_) {
      while (prev < k) {
        gk = gk * g;
        ++prev;
      }
      if (gk.valuation() >= order) break;
      TruncatedSeries term = gk.scaled(c).truncate(std::min(order, gk.order_));
      for (const auto& [j, x] : term.coeffs_) r.add(j, x);
    }
    return r;
  }

 private:
  char var_;
  int order_;
  std::map<int, C> coeffs_;

  static void check_var(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.var_ != b.var_) throw SeriesError("series in different variables");
  }
};

// Monomial c * z^z_exp * q^q_exp * t^t_exp appearing in a q-Pochhammer symbol.
struct PochhammerArg {
  Rational coeff;
  int z_exp = 0;
  int q_exp = 0;
  int t_exp = 0;
};

// (a; b)_inf = prod_{n>=0} (1 - a b^n) as a series in z truncated at order.
TruncatedSeries<ParamRational> q_pochhammer_series(const PochhammerArg& a, const PochhammerArg& b, int order);

}  // namespace opera
