#include <random>

#include "doctest.h"
#include "opera/qlattice.hpp"
#include "test_util.hpp"

using namespace opera;

namespace {

ParamRational q(int k = 1) { return ParamRational::variable(Var::q).pow(k); }
SymbolPoly L(int i, int shift = 0, int e = 1, Point p = Point::z) { return SymbolPoly::lambda(i, shift, e, p); }
SymbolPoly C(long c) { return SymbolPoly(ParamRational(c)); }
QDiffOp Dk(int k = 1) { return q_shift_operator(k); }
QDiffOp M(const SymbolPoly& a, int k = 0) { return QDiffOp::term(k, a); }

SymbolPoly random_symbols(std::mt19937& rng, Point p = Point::z) {
  std::uniform_int_distribution<int> coef(-2, 2), shift(-1, 1), idx(1, 2), expo(-1, 1);
  SymbolPoly s;
  for (int i = 0; i < 3; ++i) {
    SymbolPoly m(ParamRational(coef(rng)));
    for (int j = 0; j < 2; ++j) m = m * L(idx(rng), shift(rng), expo(rng) == 0 ? 1 : expo(rng), p);
    s += m;
  }
  return s;
}

DistributionExpr random_distribution(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 2), shift(-2, 2), dir(0, 1);
  DistributionExpr e;
  for (int i = 0; i < 6; ++i) {
    SymbolPoly c = random_symbols(rng, Point::z) * random_symbols(rng, Point::w);
    Point num = dir(rng) ? Point::w : Point::z;
    Point den = num == Point::w ? Point::z : Point::w;
    e += DistributionExpr::atom(static_cast<AtomKind>(kind(rng)), num, den, shift(rng), c, shift(rng));
  }
  return e;
}

}  // namespace

TEST_CASE("q-difference composition") {
  CHECK(q_compose(Dk(), M(L(1))) == M(L(1, 1), 1));
  CHECK(q_compose(Dk() + M(L(1)), Dk() + M(L(2))) == Dk(2) + M(L(1) + L(2, 1), 1) + M(L(1) * L(2)));
  QDiffOp a = Dk(2) + M(L(1, -1), 1);
  CHECK(q_compose(M(C(1)), a) == a);
  CHECK(q_compose(QDiffOp::term(-1, C(1), 3), M(L(1))) == QDiffOp::truncated(-1, 3, {{-1, L(1, -1)}}));
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    QDiffOp x = M(random_symbols(rng), 1) + M(random_symbols(rng));
    QDiffOp y = M(random_symbols(rng), 2) - QDiffOp::term(-1, random_symbols(rng), 4) + M(random_symbols(rng));
    QDiffOp z = M(random_symbols(rng), 1) + QDiffOp::term(-2, random_symbols(rng), 4);
    CHECK(q_compose(q_compose(x, y), z) == q_compose(x, q_compose(y, z)));
  }
}

TEST_CASE("q-Miura factorization") {
  QMiura m2 = q_miura_expand(2);
  REQUIRE(m2.t.size() == 1);
  CHECK(impose_product_constraint(m2.t[0], 2) == L(1) + L(1, 1, -1));
  CHECK(impose_product_constraint(m2.constant, 2) == C(1));
  QMiura m3 = q_miura_expand(3);
  CHECK(m3.t[0] == L(1) + L(2, 1) + L(3, 2));
  CHECK(m3.t[1] == L(1) * L(3, 1) + L(2, 1) * L(3, 1) + L(1) * L(2));
  for (int n = 1; n <= 4; ++n) {
    SymbolPoly prod = C(1);
    for (int i = 1; i <= n; ++i) prod = prod * L(i);
    QMiura m = q_miura_expand(n);
    CHECK(m.constant == prod);
    CHECK(impose_product_constraint(m.constant, n) == C(1));
    CHECK(m.product.coeff(n) == C(1));
  }
  CHECK(impose_product_constraint(L(1) * L(3, 2), 3) == L(1) * L(1, 2, -1) * L(2, 2, -1));
}

TEST_CASE("q-KdV Lax flows") {
  // n = 2, m = 1: rho + S rho = t gives dt = t (rho - S rho) = 2 t rho - t^2.
  QLaxFlow f = q_root_lax(2, 1, 3);
  const SymbolPoly t = SymbolPoly::symbol({SymbolKind::T, 1, Point::z, 0});
  const SymbolPoly rho = SymbolPoly::symbol({SymbolKind::Root, 1, Point::z, 0});
  REQUIRE(f.rhs.size() == 1);
  CHECK(f.rhs[0] == C(2) * t * rho - t * t);
  CHECK(f.relations.relations().at(1) == t);
  // R^2 = L to the certified depth.
  QLaxFlow g = q_root_lax(2, 1, 5);
  QDiffOp r2 = g.root.pow(2).map_coefficients([&](const SymbolPoly& c) { return g.relations.reduce(c); });
  CHECK(r2.coeff(2) == C(1));
  CHECK(r2.coeff(1) == t);
  CHECK(r2.coeff(0) == C(1));
  CHECK(r2.coeff(-1).is_zero());
  CHECK(r2.coeff(-2).is_zero());
  // Shape preservation for further flows.
  CHECK_NOTHROW(q_root_lax(2, 3, 4));
  CHECK_NOTHROW(q_root_lax(3, 1, 2));
  CHECK_NOTHROW(q_root_lax(3, 2, 3));
  // Constant coefficients: L = D^2 + 1 has a constant root and no flow.
  QLaxFlow zero = q_root_lax(2, 1, 4, std::vector<SymbolPoly>{SymbolPoly()});
  CHECK(zero.rhs[0].is_zero());
  CHECK(zero.relations.relations().empty());
  QLaxFlow zero3 = q_root_lax(3, 2, 4, std::vector<SymbolPoly>{SymbolPoly(), SymbolPoly()});
  CHECK(zero3.rhs[0].is_zero());
  CHECK(zero3.rhs[1].is_zero());
  CHECK_THROWS_AS(q_root_lax(2, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(q_root_lax(2, 3, 3), QDepthExhausted);
}

TEST_CASE("distribution normalization") {
  // f(w/z) + f(z/w) = 0
  DistributionExpr odd = DistributionExpr::atom(AtomKind::F, Point::w, Point::z, 0, C(1)) +
                         DistributionExpr::atom(AtomKind::F, Point::z, Point::w, 0, C(1));
  CHECK(odd.is_zero());
  // f(x q^2) - f(x q^-2) = delta(x q^2) + delta(x q^-2) - 2 delta(x)
  DistributionExpr diff = DistributionExpr::atom(AtomKind::F, Point::w, Point::z, 1, C(1)) -
                          DistributionExpr::atom(AtomKind::F, Point::w, Point::z, -1, C(1));
  NormalizedDistribution nd = dist_normalize(diff, 12);
  DistributionExpr expect = DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, 1, C(1)) +
                            DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, -1, C(1)) -
                            DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, 0, C(2));
  CHECK(nd.normal == expect);
  REQUIRE(nd.table.size() == 1);
  for (int n = -12; n <= 12; ++n) CHECK(nd.table[0].coefficients.at(n) == (q(n) - q(-n)) * (q(n) - q(-n)));
  // delta(w/z) Lambda(z) Lambda(w)^-1 = delta(w/z)
  DistributionExpr col = DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, 0, L(1) * L(1, 0, -1, Point::w));
  CHECK(dist_canonical(col) == DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, 0, C(1)));
  // delta(w q^2 / z): z = w q^2.
  DistributionExpr col2 = DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, 1, L(1, -1) * L(1, 0, -1, Point::w));
  CHECK(dist_canonical(col2) == DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, 1, C(1)));
}

TEST_CASE("normalization is idempotent, confluent and coefficient-preserving") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    DistributionExpr a = random_distribution(rng), b = random_distribution(rng);
    DistributionExpr na = dist_canonical(a);
    CHECK(dist_canonical(na) == na);
    DistributionExpr whole = dist_canonical(a + b);
    CHECK(dist_canonical(na + b) == whole);
    CHECK(dist_canonical(dist_canonical(b) + a) == whole);
  }
  // Without collapses the coefficient sequences are unchanged.
  for (int trial = 0; trial < 10; ++trial) {
    DistributionExpr e;
    std::uniform_int_distribution<int> kind(0, 2), shift(-3, 3);
    for (int i = 0; i < 5; ++i)
      e += DistributionExpr::atom(static_cast<AtomKind>(kind(rng)), Point::w, Point::z, shift(rng), C(shift(rng)), shift(rng));
    DistributionExpr n = dist_canonical(e);
    DistributionExpr::Group before, after;
    if (!e.is_zero()) before = e.groups().begin()->second;
    if (!n.is_zero()) after = n.groups().begin()->second;
    CHECK(coefficient_sequence(before, 8) == coefficient_sequence(after, 8));
  }
}

TEST_CASE("q-Poisson bracket of t") {
  TBracketReport r = verify_t_bracket(12);
  CHECK(r.passed());
  CHECK(r.residual.normal.is_zero());
  // The bracket vanishes at q = 1 coefficient-wise.
  for (const auto& row : r.lhs.table)
    for (const auto& [n, c] : row.coefficients) CHECK(c.evaluate(Var::q, Rational(1)).is_zero());
  // Antisymmetry of the Lambda bracket.
  DistributionExpr ab = lambda_bracket(L(1), Point::z, L(1, 0, 1, Point::w), Point::w);
  DistributionExpr ba = lambda_bracket(L(1, 0, 1, Point::w), Point::w, L(1), Point::z);
  CHECK((ab + ba).is_zero());
  // A wrong delta sign is detected.
  auto t_at = [](Point p) { return SymbolPoly::lambda(1, 0, 1, p) + SymbolPoly::lambda(1, 1, -1, p); };
  const SymbolPoly pre(q() - q(-1));
  DistributionExpr lhs = lambda_bracket(t_at(Point::z), Point::z, t_at(Point::w), Point::w);
  DistributionExpr wrong = DistributionExpr::atom(AtomKind::F, Point::w, Point::z, 0, pre * t_at(Point::z) * t_at(Point::w));
  CHECK_FALSE(dist_normalize(lhs - wrong, 4).nonzero().empty());
}

TEST_CASE("classical limit") {
  TruncatedSeries<JetPolynomial> t = classical_limit(4);
  CHECK(t.coeff(0) == opera::testing::J("2"));
  CHECK(t.coeff(1).is_zero());
  // 4 (phi^2 - z phi_z), phi = u z
  CHECK(t.coeff(2) == opera::testing::J("4*z^2*u^2 - 4*z*u - 4*z^2*u'"));
  CHECK(t.coeff(2).substitute({{1, JetPolynomial()}}).is_zero());
  CHECK_THROWS_AS(classical_limit(2), std::invalid_argument);
}

TEST_CASE("Baxter substitution") {
  const ParamRational z = ParamRational::variable(Var::z);
  CHECK(baxter_substitute(ParamRational(1)).t == ParamRational(2));
  ParamRational Q = ParamRational(1) - z;
  CHECK(baxter_substitute(Q).t == (ParamRational(1) - z * q(2)) / Q + (ParamRational(1) - z * q(-2)) / Q);
  CHECK(baxter_substitute(Q).lambda == (ParamRational(1) - z * q(-2)) / Q);
  CHECK_NOTHROW(baxter_substitute(z * z - ParamRational(3) * z * q() + ParamRational(2)));
  CHECK_THROWS_AS(baxter_substitute(ParamRational()), std::invalid_argument);
}

TEST_CASE("deformed structure function") {
  // t = 1: (z; q^4) = (1 - z)(z q^4; q^4) cancels the prefactor.
  TruncatedSeries<ParamRational> one = deformed_structure_function(20, ParamRational(1));
  CHECK(one.coeff(0) == ParamRational(1));
  for (int k = 1; k < 20; ++k) CHECK(one.coeff(k).is_zero());
  TruncatedSeries<ParamRational> full = deformed_structure_function(4);
  CHECK(full.coeff(0) == ParamRational(1));
  for (int k = 0; k < 4; ++k) CHECK(full.coeff(k).evaluate(Var::t, Rational(1)) == one.coeff(k));
  // Specialization commutes with expansion at t = q.
  TruncatedSeries<ParamRational> tq = deformed_structure_function(4, q());
  for (int k = 0; k < 4; ++k) CHECK(full.coeff(k).substitute(Var::t, q()) == tq.coeff(k));
  // First order in t - 1, checked against the exact t-derivative.
  std::vector<ParamRational> g = structure_function_t_derivative(13);
  for (int k = 0; k < 4; ++k) CHECK(g[k] == full.coeff(k).derivative(Var::t).evaluate(Var::t, Rational(1)));
  // Antisymmetrized sequence equals 2 times the f coefficients on |n| <= 12.
  for (int n = -12; n <= 12; ++n) {
    ParamRational a = n > 0 ? g[n] : (n < 0 ? -g[-n] : ParamRational());
    CHECK(a == ParamRational(2) * f_coefficient(n));
  }
  CHECK(deformed_relation_prefactor().evaluate(Var::t, Rational(1)).is_zero());
  CHECK_FALSE(deformed_relation_prefactor().is_zero());
}
