#pragma once

// q-characters of type A: Laurent polynomials in Y_{i, a q^k} with integer
// coefficients, the substitution from q-Miura symbols and the forgetful map.

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "opera/qlattice.hpp"

namespace opera {

// Y_{i, a q^k} with the base point a fixed; keyed by (i, k).
using YVar = std::pair<int, int>;

class YMonomial {
 public:
  YMonomial() = default;
  static YMonomial of(int i, int k, int e = 1);
  const std::map<YVar, int>& powers() const { return p_; }
  YMonomial operator*(const YMonomial& o) const;
  YMonomial inverse() const;
  YMonomial shifted(int k) const;
  auto operator<=>(const YMonomial&) const = default;
  std::string to_string(bool latex = false) const;

 private:
  std::map<YVar, int> p_;  // exponents nonzero
};

class YPolynomial {
 public:
  YPolynomial() = default;
  explicit YPolynomial(long c);
  static YPolynomial monomial(const YMonomial& m, const mpz_class& c = 1);
  static YPolynomial y(int i, int k, int e = 1) { return monomial(YMonomial::of(i, k, e)); }

  const std::map<YMonomial, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  YPolynomial& operator+=(const YPolynomial& o);
  friend YPolynomial operator+(YPolynomial a, const YPolynomial& b) { return a += b; }
  friend YPolynomial operator*(const YPolynomial& a, const YPolynomial& b);
  // Negative powers only for monomials.
  YPolynomial pow(int e) const;
  // a -> a q^k
  YPolynomial shifted(int k) const;
  bool operator==(const YPolynomial&) const = default;
  std::string to_string(bool latex = false) const;

 private:
  std::map<YMonomial, mpz_class> terms_;
  void add(const YMonomial& m, const mpz_class& c);
};

// Laurent polynomial in y_1..y_l; exponent vectors have length l.
class CharPolynomial {
 public:
  explicit CharPolynomial(int rank) : rank_(rank) {}
  int rank() const { return rank_; }
  const std::map<std::vector<int>, mpz_class>& terms() const { return terms_; }
  void add(const std::vector<int>& exps, const mpz_class& c);
  bool operator==(const CharPolynomial&) const = default;
  std::string to_string(bool latex = false) const;

 private:
  int rank_;
  std::map<std::vector<int>, mpz_class> terms_;
};

// Lambda_i(z a q^(2s)) -> Y_{i, a q^(2s-i+1)} Y_{i-1, a q^(2s-i+2)}^-1 with
// Y_0 = Y_n = 1. Throws std::out_of_range for i outside 1..n and
// std::invalid_argument for other symbols or non-integer coefficients.
YPolynomial substitute_lambda(const SymbolPoly& p, int n);

// Y_{i,a} -> y_i on sl_n, rank n - 1.
CharPolynomial forgetful(const YPolynomial& p, int n);

// Y_{a q^k} + Y_{a q^(k+2)}^-1
YPolynomial qchar_eval_sl2(int k = 0);

// Image of t_1 of the q-Miura expansion.
YPolynomial qchar_fundamental(int n);

}  // namespace opera
