#pragma once

#include <string>

#include "opera/rational.hpp"
#include "opera/sparse_poly.hpp"

namespace opera {

// Exact rational function in the formal parameters q, t, h (and z, which is
// only used for Baxter-type substitutions). Always stored reduced: numerator
// and denominator are coprime polynomials and the denominator is monic in
// descending lex order, so equality is syntactic.
class ParamRational {
 public:
  ParamRational() : den_(Rational(1)) {}
  ParamRational(long n) : num_(Rational(n)), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
  ParamRational(const Rational& r) : num_(r), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
  ParamRational(QPoly num, QPoly den);
  explicit ParamRational(QPoly num) : num_(std::move(num)), den_(Rational(1)) { normalize(); }

  static ParamRational variable(Var v) { return ParamRational(QPoly::variable(v)); }
  // c * q^e_q t^e_t h^e_h z^e_z with possibly negative exponents.
  static ParamRational monomial(const Rational& c, const Exponents& e);

  const QPoly& numerator() const { return num_; }
  const QPoly& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  // True when free of q, t, h, z.
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const;
  bool contains(Var v) const { return num_.contains(v) || den_.contains(v); }
  bool is_polynomial() const { return den_.is_constant(); }

  ParamRational operator-() const;
  ParamRational& operator+=(const ParamRational& o);
  ParamRational& operator-=(const ParamRational& o);
  ParamRational& operator*=(const ParamRational& o);
  ParamRational& operator/=(const ParamRational& o);
  friend ParamRational operator+(ParamRational a, const ParamRational& b) { return a += b; }
  friend ParamRational operator-(ParamRational a, const ParamRational& b) { return a -= b; }
  friend ParamRational operator*(ParamRational a, const ParamRational& b) { return a *= b; }
  friend ParamRational operator/(ParamRational a, const ParamRational& b) { return a /= b; }

  bool operator==(const ParamRational& o) const { return num_ == o.num_ && den_ == o.den_; }

  ParamRational inverse() const;
  ParamRational pow(long k) const;

  // Replaces variable v by a value.
  ParamRational evaluate(Var v, const Rational& value) const;
  ParamRational substitute(Var v, const ParamRational& value) const;
  ParamRational derivative(Var v) const;

  std::string to_string() const;
  std::string to_latex() const;

 private:
  QPoly num_;
  QPoly den_;

  void normalize();
  void make_monic();
};

std::string poly_to_latex(const QPoly& p);

}  // namespace opera
