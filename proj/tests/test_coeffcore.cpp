#include <random>

#include "doctest.h"
#include "opera/param_rational.hpp"
#include "opera/series.hpp"

using namespace opera;

namespace {

const ParamRational q = ParamRational::variable(Var::q);
const ParamRational t = ParamRational::variable(Var::t);
const ParamRational h = ParamRational::variable(Var::h);

QPoly qp(std::initializer_list<std::pair<int, long>> terms) {
  std::vector<QPoly::Term> v;
  for (auto [e, c] : terms) v.push_back({unit_exponent(Var::q, e), Rational(c)});
  return QPoly::from_terms(v);
}

ParamRational random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), ex(0, 2), nterms(1, 3);
  ParamRational p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Exponents e{ex(rng), ex(rng), ex(rng) / 2, 0};
    p += ParamRational::monomial(Rational(coef(rng)), e);
  }
  return p;
}

ParamRational random_rational(std::mt19937& rng) {
  ParamRational d = random_poly(rng);
  while (d.is_zero()) d = random_poly(rng);
  return random_poly(rng) / d;
}

}  // namespace

TEST_CASE("normalization reduces common factors") {
  ParamRational r(qp({{2, 1}, {0, -1}}), qp({{1, 1}, {0, -1}}));
  CHECK(r == q + ParamRational(1));
  CHECK(r.denominator().is_one());
  ParamRational a = (q + t) / (q - t);
  CHECK(a + ParamRational(0) == a);
  // Laurent input is cleared into a polynomial quotient.
  ParamRational b = q.pow(-2) * (q + ParamRational(1));
  CHECK(b.numerator() == qp({{1, 1}, {0, 1}}));
  CHECK(b.denominator() == qp({{2, 1}}));
}

TEST_CASE("sign and scale normalization makes equality syntactic") {
  ParamRational a(qp({{1, -2}}), qp({{2, -4}, {0, 6}}));
  ParamRational b(qp({{1, 1}}), qp({{2, 2}, {0, -3}}));
  CHECK(a == b);
  CHECK(a.denominator().leading_coeff() == 1);
}

TEST_CASE("tanh-type cancellation at n = 3") {
  const int n = 3;
  ParamRational qn = q.pow(n), qm = q.pow(-n);
  ParamRational s = (qn - qm) / (qn + qm) + (qm - qn) / (qm + qn);
  CHECK(s.is_zero());
  // Oracle: cross multiplication of the raw Laurent numerators and denominators.
  QPoly n1 = qp({{n, 1}, {-n, -1}}), d1 = qp({{n, 1}, {-n, 1}});
  QPoly n2 = qp({{-n, 1}, {n, -1}}), d2 = qp({{-n, 1}, {n, 1}});
  CHECK((n1 * d2 + n2 * d1).is_zero());
}

TEST_CASE("division by zero is an error") {
  CHECK_THROWS_AS(q / ParamRational(0), std::domain_error);
  CHECK_THROWS_AS(ParamRational(0).inverse(), std::domain_error);
}

TEST_CASE("ring axioms on randomized triples") {
  std::mt19937 rng(12345);
  for (int i = 0; i < 40; ++i) {
    ParamRational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a - a == ParamRational(0));
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}

TEST_CASE("multivariate gcd recovers planted factors") {
  std::mt19937 rng(777);
  for (int i = 0; i < 30; ++i) {
    QPoly a = random_poly(rng).numerator(), b = random_poly(rng).numerator(), c = random_poly(rng).numerator();
    if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
    QPoly g = poly_gcd(a * c, b * c);
    CHECK(QPoly::divide_exact(g, c * Rational(1 / c.leading_coeff())).has_value());
    auto x = QPoly::divide_exact(a * c, g);
    auto y = QPoly::divide_exact(b * c, g);
    REQUIRE(x.has_value());
    REQUIRE(y.has_value());
    CHECK(poly_gcd(*x, *y).is_one());
  }
}

TEST_CASE("substitution and evaluation") {
  ParamRational f = (q * q - t) / (q + h);
  CHECK(f.evaluate(Var::t, Rational(1)) == (q * q - ParamRational(1)) / (q + h));
  CHECK(f.substitute(Var::t, q * q).is_zero());
  CHECK_THROWS(f.evaluate(Var::q, Rational(0)).substitute(Var::h, ParamRational(0)));
  CHECK(q.pow(3).derivative(Var::q) == ParamRational(3) * q * q);
}

TEST_CASE("series_exp") {
  using S = TruncatedSeries<ParamRational>;
  S zero('h', 5);
  CHECK(zero.exp() == S::constant('h', 5, ParamRational(1)));
  // exp(h t) to order h^3 (t plays the role of a free symbol w).
  S s = S::monomial('h', 4, 1, t);
  S e = s.exp();
  CHECK(e.coeff(0) == ParamRational(1));
  CHECK(e.coeff(1) == t);
  CHECK(e.coeff(2) == t * t * ParamRational(Rational(1, 2)));
  CHECK(e.coeff(3) == t.pow(3) * ParamRational(Rational(1, 6)));
  CHECK_THROWS_AS(S::constant('h', 4, ParamRational(1)).exp(), SeriesError);
}

TEST_CASE("exp(s) exp(-s) = 1 and exp(s + u) = exp(s) exp(u)") {
  using S = TruncatedSeries<ParamRational>;
  const int N = 9;
  S s('z', N);
  s.set(1, h);
  s.set(2, h * h);
  S prod = s.exp() * (-s).exp();
  CHECK(prod == S::constant('z', N, ParamRational(1)));
  S u('z', N);
  u.set(1, q);
  u.set(3, t / (q + ParamRational(1)));
  CHECK((s + u).exp() == s.exp() * u.exp());
}

TEST_CASE("truncation orders are explicit") {
  using S = TruncatedSeries<ParamRational>;
  S a = S::monomial('z', 5, 1, q);
  S b = S::monomial('z', 7, 2, t);
  CHECK((a + b).order() == 5);
  CHECK((a * b).order() == 5);  // never wider than either operand
  CHECK_THROWS_AS(a.truncate(8), SeriesError);
  S inv = (S::constant('z', 6, ParamRational(1)) - a).inverse();
  for (int k = 0; k < 5; ++k) CHECK(inv.coeff(k) == q.pow(k));
  S c = S::monomial('z', 6, 1, ParamRational(1)) + S::monomial('z', 6, 2, ParamRational(1));
  S ci = c.inverse();  // 1/(z + z^2), order 6 - 2
  CHECK(ci.order() == 4);
  CHECK((ci * c).coeff(0) == ParamRational(1));
}

TEST_CASE("composition and derivative") {
  using S = TruncatedSeries<ParamRational>;
  S g = S::monomial('x', 6, 1, ParamRational(1)) + S::monomial('x', 6, 2, ParamRational(1));
  S f = S::monomial('x', 6, 2, ParamRational(1));
  S fg = f.compose(g);  // (x + x^2)^2
  CHECK(fg.coeff(2) == ParamRational(1));
  CHECK(fg.coeff(3) == ParamRational(2));
  CHECK(fg.coeff(4) == ParamRational(1));
  CHECK(fg.coeff(5).is_zero());
  CHECK(fg.derivative().coeff(2) == ParamRational(6));
  CHECK_THROWS_AS(f.compose(S::constant('x', 6, ParamRational(1))), SeriesError);
}

TEST_CASE("q-Pochhammer trivial cases") {
  auto s = q_pochhammer_series({1, 1, 0, 0}, {0, 0, 0, 0}, 5);  // (z; 0)
  CHECK(s.coeff(0) == ParamRational(1));
  CHECK(s.coeff(1) == ParamRational(-1));
  CHECK(s.coefficients().size() == 2);
  auto one = q_pochhammer_series({0, 1, 0, 0}, {1, 0, 4, 4}, 5);
  CHECK(one == TruncatedSeries<ParamRational>::constant('z', 5, ParamRational(1)));
  CHECK_THROWS_AS(q_pochhammer_series({1, 1, 0, 0}, {1, 0, 0, 0}, 5), SeriesError);
  CHECK_THROWS_AS(q_pochhammer_series({1, -1, 0, 0}, {1, 1, 0, 0}, 5), SeriesError);
}

TEST_CASE("q-Pochhammer (z; z) matches Euler pentagonal numbers") {
  const int N = 30;
  auto s = q_pochhammer_series({1, 1, 0, 0}, {1, 1, 0, 0}, N);
  // Oracle: (z; z)_inf = sum_k (-1)^k z^(k(3k-1)/2) over k in Z.
  std::map<int, int> expected;
  for (int k = -6; k <= 6; ++k) {
    int e = k * (3 * k - 1) / 2;
    if (e < N) expected[e] += (k % 2 == 0) ? 1 : -1;
  }
  for (int e = 0; e < N; ++e) CHECK(s.coeff(e) == ParamRational(expected[e]));
}

TEST_CASE("q-Pochhammer with parameter ratio") {
  // (z q^2; q^4 t^4): first coefficients from the Euler expansion.
  auto s = q_pochhammer_series({1, 1, 2, 0}, {1, 0, 4, 4}, 3);
  ParamRational b = q.pow(4) * t.pow(4);
  CHECK(s.coeff(1) == -(q * q) / (ParamRational(1) - b));
  CHECK(s.coeff(2) == q.pow(4) * b / ((ParamRational(1) - b) * (ParamRational(1) - b * b)));

  // Oracle: multiply the first K factors of (z q^2; q^4)_inf and compare with
  // each coefficient up to q-adic precision 4K.
  const int K = 6, N = 5;
  auto r = q_pochhammer_series({1, 1, 2, 0}, {1, 0, 4, 0}, N);
  std::vector<QPoly> prod(N);
  prod[0] = QPoly(Rational(1));
  for (int n = 0; n < K; ++n) {
    QPoly c = qp({{2 + 4 * n, -1}});
    for (int k = N - 1; k >= 1; --k) prod[k] = prod[k] + prod[k - 1] * c;
  }
  for (int k = 0; k < N; ++k) {
    const ParamRational& rk = r.coeff(k);
    QPoly diff = rk.numerator() - prod[k] * rk.denominator();
    for (const auto& term : diff.terms()) CHECK(term.exp[0] >= 4 * K);
  }
}

TEST_CASE("q-Pochhammer shift identity (a; b) = (1 - a)(ab; b)") {
  const int N = 7;
  for (auto [a, b] : std::vector<std::pair<PochhammerArg, PochhammerArg>>{
           {{1, 1, 2, 0}, {1, 0, 4, 4}}, {{1, 1, 0, 0}, {1, 1, 0, 0}}, {{2, 1, 1, -1}, {1, 2, 1, 0}}}) {
    auto lhs = q_pochhammer_series(a, b, N);
    PochhammerArg ab{a.coeff * b.coeff, a.z_exp + b.z_exp, a.q_exp + b.q_exp, a.t_exp + b.t_exp};
    auto rest = q_pochhammer_series(ab, b, N);
    auto one_minus_a = q_pochhammer_series(a, {0, 0, 0, 0}, N);
    CHECK(lhs == one_minus_a * rest);
  }
}
