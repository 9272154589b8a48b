#include "opera/param_rational.hpp"

#include <stdexcept>

namespace opera {
namespace {

Exponents exp_min(const Exponents& a, const Exponents& b) {
  Exponents m{};
  for (std::size_t i = 0; i < kNumVars; ++i) m[i] = std::min(a[i], b[i]);
  return m;
}

QPoly exact(const QPoly& a, const QPoly& b) {
  auto r = QPoly::divide_exact(a, b);
  if (!r) throw std::logic_error("inexact polynomial division in rational normalization");
  return *r;
}

QPoly poly_derivative(const QPoly& p, Var v) {
  const auto vi = static_cast<std::size_t>(v);
  std::vector<QPoly::Term> out;
  for (const auto& t : p.terms()) {
    if (t.exp[vi] == 0) continue;
    Exponents e = t.exp;
    e[vi] -= 1;
    out.push_back({e, t.coeff * t.exp[vi]});
  }
  return QPoly::from_terms(std::move(out));
}

ParamRational poly_substitute(const QPoly& p, Var v, const ParamRational& value) {
  const auto vi = static_cast<std::size_t>(v);
  ParamRational out;
  for (const auto& t : p.terms()) {
    Exponents e = t.exp;
    long k = e[vi];
    e[vi] = 0;
    out += ParamRational::monomial(t.coeff, e) * value.pow(k);
  }
  return out;
}

}  // namespace

ParamRational::ParamRational(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

ParamRational ParamRational::monomial(const Rational& c, const Exponents& e) {
  Exponents pos{}, neg{};
  for (std::size_t i = 0; i < kNumVars; ++i) {
    if (e[i] >= 0)
      pos[i] = e[i];
    else
      neg[i] = -e[i];
  }
  ParamRational r;
  r.num_ = QPoly(pos, c);
  r.den_ = QPoly(neg, Rational(1));
  return r;
}

void ParamRational::make_monic() {
  if (den_.leading_coeff() != 1) {
    Rational s = 1 / den_.leading_coeff();
    num_ = num_ * s;
    den_ = den_ * s;
  }
}

void ParamRational::normalize() {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = QPoly(Rational(1));
    return;
  }
  Exponents m = exp_min(num_.min_exponents(), den_.min_exponents());
  if (m != Exponents{}) {
    num_ = num_.shifted(Exponents{} - m);
    den_ = den_.shifted(Exponents{} - m);
  }
  if (!den_.is_constant()) {
    QPoly g = poly_gcd(num_, den_);
    if (!g.is_one()) {
      num_ = exact(num_, g);
      den_ = exact(den_, g);
    }
  }
  make_monic();
}

Rational ParamRational::constant_value() const {
  if (!is_constant()) throw std::domain_error("rational function is not constant: " + to_string());
  return num_.constant_value() / den_.constant_value();
}

ParamRational ParamRational::operator-() const {
  ParamRational r = *this;
  r.num_ = -r.num_;
  return r;
}

ParamRational& ParamRational::operator+=(const ParamRational& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    if (num_.is_zero()) {
      den_ = QPoly(Rational(1));
      return *this;
    }
    QPoly g = poly_gcd(num_, den_);
    if (!g.is_one()) {
      num_ = exact(num_, g);
      den_ = exact(den_, g);
    }
    return *this;
  }
  // Henrici: for reduced a/b + c/d with g = gcd(b, d), the sum
  // (a d' + c b') / (b d') has gcd(numerator, g) as its only common factor.
  QPoly g = poly_gcd(den_, o.den_);
  if (g.is_one()) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    if (num_.is_zero()) den_ = QPoly(Rational(1));
    return *this;
  }
  QPoly b1 = exact(den_, g), d1 = exact(o.den_, g);
  QPoly t = num_ * d1 + o.num_ * b1;
  if (t.is_zero()) return *this = ParamRational();
  QPoly g2 = poly_gcd(t, g);
  num_ = exact(t, g2);
  den_ = b1 * exact(o.den_, g2);
  make_monic();
  return *this;
}

ParamRational& ParamRational::operator-=(const ParamRational& o) { return *this += -o; }

ParamRational& ParamRational::operator*=(const ParamRational& o) {
  if (is_zero() || o.is_zero()) return *this = ParamRational();
  if (den_.is_one() && o.den_.is_one()) {
    num_ *= o.num_;
    return *this;
  }
  QPoly a = num_, b = den_, c = o.num_, d = o.den_;
  QPoly g1 = (d.is_one()) ? QPoly(Rational(1)) : poly_gcd(a, d);
  QPoly g2 = (b.is_one()) ? QPoly(Rational(1)) : poly_gcd(c, b);
  if (!g1.is_one()) {
    a = exact(a, g1);
    d = exact(d, g1);
  }
  if (!g2.is_one()) {
    c = exact(c, g2);
    b = exact(b, g2);
  }
  num_ = a * c;
  den_ = b * d;
  make_monic();
  return *this;
}

ParamRational ParamRational::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero rational function");
  ParamRational r;
  r.num_ = den_;
  r.den_ = num_;
  r.make_monic();
  return r;
}

ParamRational& ParamRational::operator/=(const ParamRational& o) { return *this *= o.inverse(); }

ParamRational ParamRational::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  ParamRational r(1), b = *this;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

ParamRational ParamRational::evaluate(Var v, const Rational& value) const {
  QPoly d = den_.evaluate(v, value);
  if (d.is_zero()) throw std::domain_error("rational function has a pole at the evaluation point");
  return ParamRational(num_.evaluate(v, value), d);
}

ParamRational ParamRational::substitute(Var v, const ParamRational& value) const {
  ParamRational d = poly_substitute(den_, v, value);
  if (d.is_zero()) throw std::domain_error("rational function has a pole at the substituted value");
  return poly_substitute(num_, v, value) / d;
}

ParamRational ParamRational::derivative(Var v) const {
  QPoly n = poly_derivative(num_, v) * den_ - num_ * poly_derivative(den_, v);
  return ParamRational(n, den_ * den_);
}

std::string ParamRational::to_string() const {
  if (den_.is_one()) return num_.to_string();
  auto wrap = [](const QPoly& p) { return p.size() == 1 ? p.to_string() : "(" + p.to_string() + ")"; };
  return wrap(num_) + "/" + wrap(den_);
}

std::string poly_to_latex(const QPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    bool is_const = (t.exp == Exponents{});
    if (c != 1 || is_const) {
      if (c.get_den() == 1)
        s += c.get_num().get_str();
      else
        s += "\\frac{" + c.get_num().get_str() + "}{" + c.get_den().get_str() + "}";
    }
    for (std::size_t i = 0; i < kNumVars; ++i) {
      if (t.exp[i] == 0) continue;
      s += kVarNames[i];
      if (t.exp[i] != 1) s += "^{" + std::to_string(t.exp[i]) + "}";
    }
  }
  return s;
}

std::string ParamRational::to_latex() const {
  if (den_.is_one()) return poly_to_latex(num_);
  return "\\frac{" + poly_to_latex(num_) + "}{" + poly_to_latex(den_) + "}";
}

}  // namespace opera
