#pragma once

// Differential polynomials in fields u_1..u_m and their derivatives u_{i,k},
// optionally times integer powers of the independent-variable symbol z.

#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "opera/param_rational.hpp"

namespace opera {

struct JetVar {
  int field = 1;  // >= 1
  int order = 0;  // derivative order >= 0
  auto operator<=>(const JetVar&) const = default;
};

// Monomial prod u_{i,k}^{e} * z^{z_power}. Factors sorted by JetVar, exponents > 0.
class JetMonomial {
 public:
  JetMonomial() = default;
  static JetMonomial of(JetVar v, int e = 1);
  static JetMonomial z_power(int k);

  const std::vector<std::pair<JetVar, int>>& factors() const { return factors_; }
  int z() const { return z_; }
  int degree() const;
  int exponent(JetVar v) const;
  bool is_one() const { return factors_.empty() && z_ == 0; }

  JetMonomial operator*(const JetMonomial& o) const;
  // Removes one power of v; v must be present.
  JetMonomial divided_by(JetVar v) const;
  JetMonomial with_z(int k) const {
    JetMonomial m = *this;
    m.z_ = k;
    return m;
  }

  // Degree first, then factor list, then z power.
  std::strong_ordering operator<=>(const JetMonomial& o) const;
  bool operator==(const JetMonomial& o) const = default;

 private:
  std::vector<std::pair<JetVar, int>> factors_;
  int z_ = 0;
};

class DiffOp;

// How fields are rendered. Text output in the default style is accepted back by
// the parser.
struct FieldNames {
  std::string letter = "u";
  bool indexed = true;  // u1_0 versus u
  bool primes = false;  // u'' versus u_2
  static FieldNames grammar() { return {}; }
  static FieldNames single(std::string l) { return {std::move(l), false, true}; }
  static FieldNames multi(std::string l) { return {std::move(l), true, true}; }
};

class JetPolynomial {
 public:
  using TermMap = std::map<JetMonomial, ParamRational>;

  JetPolynomial() = default;
  explicit JetPolynomial(const ParamRational& c);
  explicit JetPolynomial(const Rational& c) : JetPolynomial(ParamRational(c)) {}

  static JetPolynomial var(int field, int order = 0);
  static JetPolynomial z_power(int k);
  static JetPolynomial monomial(const JetMonomial& m, const ParamRational& c);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  ParamRational constant_value() const;  // coefficient of the unit monomial
  ParamRational coefficient(const JetMonomial& m) const;

  std::set<int> fields() const;
  int max_order(int field) const;  // -1 if absent
  bool has_z() const;
  int degree() const;               // max total degree in jet variables; -1 for 0
  bool is_homogeneous_linear() const;

  JetPolynomial operator-() const;
  JetPolynomial& operator+=(const JetPolynomial& o);
  JetPolynomial& operator-=(const JetPolynomial& o);
  JetPolynomial& operator*=(const JetPolynomial& o) { return *this = *this * o; }
  friend JetPolynomial operator+(JetPolynomial a, const JetPolynomial& b) { return a += b; }
  friend JetPolynomial operator-(JetPolynomial a, const JetPolynomial& b) { return a -= b; }
  friend JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b);
  friend JetPolynomial operator*(const JetPolynomial& a, const ParamRational& c);
  friend JetPolynomial operator*(const ParamRational& c, const JetPolynomial& a) { return a * c; }
  bool operator==(const JetPolynomial& o) const = default;

  JetPolynomial pow(unsigned k) const;

  // D with D(u_{i,k}) = u_{i,k+1}, D(z) = 1.
  JetPolynomial total_derivative() const;
  JetPolynomial total_derivative(int times) const;
  JetPolynomial partial(JetVar v) const;
  JetPolynomial partial_z() const;
  // sum_k (-D)^k d/du_{i,k}
  JetPolynomial euler(int field) const;
  // sum_k (d/du_{i,k}) d^k
  DiffOp frechet(int field) const;

  // u_{i,k} -> D^k(assignment[i]); throws if a field is not assigned.
  JetPolynomial substitute(const std::map<int, JetPolynomial>& assignment) const;
  // Applies a map to every coefficient.
  template <class F>
  JetPolynomial map_coefficients(F&& f) const {
    JetPolynomial r;
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  std::string to_string(const FieldNames& names = FieldNames::grammar()) const;
  std::string to_latex(const FieldNames& names = FieldNames::single("u")) const;

  void add_term(const JetMonomial& m, const ParamRational& c);

 private:
  TermMap terms_;
};

JetPolynomial invert_coefficient(const JetPolynomial& c);

// Linear differential operator sum_k a_k d^k with JetPolynomial coefficients.
class DiffOp {
 public:
  using CoeffMap = std::map<int, JetPolynomial>;

  DiffOp() = default;
  static DiffOp multiplication(const JetPolynomial& a) { return term(0, a); }
  static DiffOp term(int order, const JetPolynomial& a);
  static DiffOp derivative(int order = 1) { return term(order, JetPolynomial(Rational(1))); }

  const CoeffMap& coefficients() const { return coeffs_; }
  JetPolynomial coeff(int k) const;
  bool is_zero() const { return coeffs_.empty(); }
  int order() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  JetPolynomial apply(const JetPolynomial& p) const;
  DiffOp adjoint() const;

  DiffOp operator-() const;
  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o) { return *this += -o; }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b);  // composition
  friend DiffOp operator*(const DiffOp& a, const ParamRational& c);
  bool operator==(const DiffOp& o) const = default;

  template <class F>
  DiffOp map_coefficients(F&& f) const {
    DiffOp r;
    for (const auto& [k, c] : coeffs_) r.add(k, f(c));
    return r;
  }

  std::string to_string(const FieldNames& names = FieldNames::grammar()) const;
  std::string to_latex(const FieldNames& names = FieldNames::single("u")) const;

  void add(int order, const JetPolynomial& a);

 private:
  CoeffMap coeffs_;
};

// ---- expression grammar ----

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return msg_; }

 private:
  std::string msg_;
  int line_;
  int column_;
};

// Grammar: sums/products/powers of rationals, u<i>_<k>, u<i> with primes,
// z, q, t, h; '/' only by expressions free of jet variables and z; integer
// exponents, negative only on expressions free of jet variables.
JetPolynomial parse_jet(const std::string& text);

}  // namespace opera
