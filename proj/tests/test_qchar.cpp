#include <random>

#include "doctest.h"
#include "opera/hampoisson.hpp"
#include "opera/qchar.hpp"

using namespace opera;

namespace {

// Weights of the first fundamental sl_n module in the fundamental-weight basis:
// omega_1, omega_1 - alpha_1, ..., read off the Cartan matrix rows.
CharPolynomial fundamental_character_oracle(int n) {
  CartanData c = CartanData::type_a(n - 1);
  std::vector<int> w(n - 1, 0);
  w[0] = 1;
  CharPolynomial r(n - 1);
  r.add(w, 1);
  for (int i = 0; i < n - 1; ++i) {
    for (int j = 0; j < n - 1; ++j) w[j] -= c.cartan[i][j];
    r.add(w, 1);
  }
  return r;
}

}  // namespace

TEST_CASE("Lambda to Y substitution") {
  CHECK(substitute_lambda(SymbolPoly::lambda(1), 2) == YPolynomial::y(1, 0));
  CHECK(substitute_lambda(SymbolPoly::lambda(1), 3) == YPolynomial::y(1, 0));
  // Lambda_2(z q^2) for sl_3: Y_{2, a q} Y_{1, a q^2}^-1
  CHECK(substitute_lambda(SymbolPoly::lambda(2, 1), 3) == YPolynomial::y(2, 1) * YPolynomial::y(1, 2, -1));
  CHECK_THROWS_AS(substitute_lambda(SymbolPoly::lambda(3), 2), std::out_of_range);
  CHECK_THROWS_AS(substitute_lambda(SymbolPoly::lambda(0), 2), std::out_of_range);
  CHECK_THROWS_AS(substitute_lambda(SymbolPoly::symbol({SymbolKind::T, 1, Point::z, 0}), 2), std::invalid_argument);
  CHECK_THROWS_AS(substitute_lambda(SymbolPoly(ParamRational(Rational(1, 2))), 2), std::invalid_argument);
}

TEST_CASE("sl_2 evaluation module") {
  YPolynomial chi = qchar_eval_sl2();
  CHECK(chi == YPolynomial::y(1, 0) + YPolynomial::y(1, 2, -1));
  CHECK(chi.to_string() == "Y_{1,a} + Y_{1,aq^2}^-1");
  CHECK(qchar_fundamental(2) == chi);
  CharPolynomial y(1);
  y.add({1}, 1);
  y.add({-1}, 1);
  CHECK(forgetful(chi, 2) == y);
  CHECK(forgetful(chi, 2).to_string() == "y^-1 + y");
  CHECK(qchar_eval_sl2(2) == YPolynomial::y(1, 2) + YPolynomial::y(1, 4, -1));
  CharPolynomial one(1);
  one.add({0}, 1);
  CHECK(forgetful(YPolynomial(1), 2) == one);
}

TEST_CASE("first fundamental q-characters") {
  CHECK(qchar_fundamental(3) ==
        YPolynomial::y(1, 0) + YPolynomial::y(2, 1) * YPolynomial::y(1, 2, -1) + YPolynomial::y(2, 3, -1));
  for (int n = 2; n <= 4; ++n) {
    YPolynomial chi = qchar_fundamental(n);
    CHECK(chi.terms().size() == static_cast<size_t>(n));
    CharPolynomial ch = forgetful(chi, n);
    CHECK(ch.terms().size() == static_cast<size_t>(n));
    CHECK(ch == fundamental_character_oracle(n));
  }
}

TEST_CASE("substitution is multiplicative") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> idx(1, 3), sh(-2, 2), ex(-2, 2);
  auto random_monomial = [&] {
    SymbolPoly m(ParamRational(1));
    for (int k = 0; k < 3; ++k) m = m * SymbolPoly::lambda(idx(rng), sh(rng), ex(rng) == 0 ? 1 : ex(rng));
    return m;
  };
  for (int trial = 0; trial < 50; ++trial) {
    SymbolPoly a = random_monomial(), b = random_monomial();
    CHECK(substitute_lambda(a * b, 3) == substitute_lambda(a, 3) * substitute_lambda(b, 3));
    SymbolPoly s = a + b;
    CHECK(substitute_lambda(s * s, 3) == substitute_lambda(s, 3) * substitute_lambda(s, 3));
  }
}
