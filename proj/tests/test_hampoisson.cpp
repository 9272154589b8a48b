#include "doctest.h"
#include "opera/hampoisson.hpp"
#include "opera/oper.hpp"
#include "test_util.hpp"

using namespace opera;
using opera::testing::J;

namespace {

DiffOp D(int k = 1) { return DiffOp::derivative(k); }
DiffOp Mul(const std::string& s) { return DiffOp::multiplication(J(s)); }

DiffOp random_diffop(std::mt19937& rng, int order) {
  DiffOp d;
  for (int k = 0; k <= order; ++k) d.add(k, opera::testing::random_jet(rng, 2, 2, 2, 2));
  return d;
}

ModeExpr virasoro_expected(int n, int m) {
  ModeExpr e;
  e.add_mode(1, n + m, ParamRational(n - m));
  if (n == -m) e.central = ParamRational(make_rational(-(n * n * n - n), 2));
  return e;
}

}  // namespace

TEST_CASE("Cartan data of type A") {
  CartanData c = CartanData::type_a(3);
  CHECK(c.cartan == std::vector<std::vector<int>>{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}});
  CHECK(c.rho_vee == std::vector<Rational>{make_rational(3, 2), Rational(2), make_rational(3, 2)});
  CHECK(c.dual_coxeter == 4);
  // Leading principal minors 2, 3, 4.
  CHECK(c.inner[0][0] == 2);
  CHECK(c.inner[0][0] * c.inner[1][1] - c.inner[0][1] * c.inner[1][0] == 3);
  CHECK(CartanData::type_a(1).rho_vee == std::vector<Rational>{make_rational(1, 2)});
}

TEST_CASE("adjoints") {
  CHECK(D().adjoint() == -D());
  CHECK((Mul("u") * D()).adjoint() == -(Mul("u") * D()) - Mul("u'"));
  DiffOp vir = virasoro_operator().entry(0, 0);
  CHECK(vir == D(3) * ParamRational(make_rational(1, 2)) - Mul("2*u") * D() - Mul("u'"));
  CHECK(vir.adjoint() == -vir);
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    DiffOp p = random_diffop(rng, 3), q = random_diffop(rng, 2);
    CHECK(p.adjoint().adjoint() == p);
    CHECK((p * q).adjoint() == q.adjoint() * p.adjoint());
  }
  CHECK_THROWS_AS(HamiltonianOperator::scalar(Mul("u") * D()), std::invalid_argument);
}

TEST_CASE("Heisenberg operators") {
  CHECK(heisenberg_operator(CartanData::type_a(1)) == HamiltonianOperator::scalar(D() * ParamRational(make_rational(-1, 2))));
  HamiltonianOperator a2 = heisenberg_operator(CartanData::type_a(2));
  CHECK(a2.entry(0, 0) == D() * ParamRational(make_rational(-1, 2)));
  CHECK(a2.entry(0, 1) == D() * ParamRational(make_rational(1, 4)));
  CHECK(miura_heisenberg_operator(2) == heisenberg_operator(CartanData::type_a(1)));
  // Root coordinates w_i = alpha_i(u)/2 with u_1 = -u_2 - u_3.
  Pushforward p = pushforward_structure({J("-u1 - 1/2*u2"), J("1/2*u1 - 1/2*u2")}, miura_heisenberg_operator(3));
  CHECK(p.rewritten);
  CHECK(p.op == a2);
  // {u_{1,0}, u_{1,m}} = 0.
  for (int m = -5; m <= 5; ++m) CHECK(mode_bracket_entry(a2, {1, 1}, 1, 0, 1, m).is_zero());
}

TEST_CASE("Miura pushforward of the Heisenberg structure") {
  Pushforward p = pushforward_structure(miura_field_map(2), miura_heisenberg_operator(2));
  CHECK(p.rewritten);
  CHECK(p.op == virasoro_operator());
  // Identity and scaling.
  HamiltonianOperator vir = virasoro_operator();
  Pushforward id = pushforward_structure({J("u")}, vir, {2});
  CHECK(id.rewritten);
  CHECK(id.op == vir);
  HamiltonianOperator h = miura_heisenberg_operator(2);
  CHECK(pushforward_structure({J("3*u")}, h).op == HamiltonianOperator::scalar(h.entry(0, 0) * ParamRational(9)));
  // v = u^2 rewrites: -2 u d u = -2 v d - v'.
  Pushforward sq = pushforward_structure({J("u^2")}, h);
  CHECK(sq.rewritten);
  CHECK(sq.op.entry(0, 0) == Mul("-2*u") * D() - Mul("u'"));
  // An inhomogeneous target is left in source fields.
  Pushforward bad = pushforward_structure({J("u^2 + u")}, h);
  CHECK_FALSE(bad.rewritten);
  CHECK(bad.op.entry(0, 0) == Mul("-1/2*(2*u + 1)^2") * D() - Mul("(2*u + 1)*u'"));
}

TEST_CASE("second structures for n = 3, 4 are skew and local in the v fields") {
  for (int n = 3; n <= 4; ++n) {
    Pushforward p = pushforward_structure(miura_field_map(n), miura_heisenberg_operator(n));
    CHECK(p.rewritten);
    for (int a = 0; a < n - 1; ++a)
      for (int b = 0; b < n - 1; ++b) CHECK(p.op.entry(a, b).adjoint() == -p.op.entry(b, a));
  }
  // n = 3 leading entry: the v1-v1 block is a multiple of the Virasoro operator.
  Pushforward p3 = pushforward_structure(miura_field_map(3), miura_heisenberg_operator(3));
  CHECK(p3.op.entry(0, 0).order() == 3);
}

TEST_CASE("mode brackets reproduce Virasoro and Heisenberg") {
  ModeBracketTable vir = mode_bracket(virasoro_operator(), {2}, 8);
  for (int n = -8; n <= 8; ++n)
    for (int m = -8; m <= 8; ++m) CHECK(vir.at(1, n, 1, m) == virasoro_expected(n, m));
  CHECK(vir.is_skew_symmetric());
  ModeBracketTable heis = mode_bracket(miura_heisenberg_operator(2), {1}, 8);
  for (int n = -8; n <= 8; ++n)
    for (int m = -8; m <= 8; ++m) {
      ModeExpr e;
      if (n == -m) e.central = ParamRational(make_rational(n, 2));
      CHECK(heis.at(1, n, 1, m) == e);
    }
  CHECK(heis.is_skew_symmetric());
  ModeBracketTable zero = mode_bracket(HamiltonianOperator::scalar(DiffOp()), {2}, 3);
  for (const auto& [k, e] : zero.entries()) CHECK(e.is_zero());
  CHECK_THROWS_AS(mode_bracket_entry(HamiltonianOperator::scalar(Mul("u^2") * D() + Mul("u*u'")), {1}, 1, 0, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("central term from the linear part of the mode Miura map") {
  // v_n = sum u_a u_b + (n+1) u_n.
  ModeBracketTable heis = mode_bracket(miura_heisenberg_operator(2), {1}, 8);
  for (int n = -8; n <= 8; ++n)
    for (int m = -8; m <= 8; ++m) {
      ParamRational c = heis.at(1, n, 1, m).central * ParamRational((n + 1) * (m + 1));
      CHECK(c == virasoro_expected(n, m).central);
    }
}

TEST_CASE("Jacobi identity for the Virasoro mode table") {
  ModeBracketTable vir = mode_bracket(virasoro_operator(), {2}, 6);
  CHECK(vir.jacobi_violations().empty());
  // A skew operator that is not Poisson: u d^3 + d^3 u.
  HamiltonianOperator bad = HamiltonianOperator::scalar(Mul("u") * D(3) + D(3) * Mul("u"));
  CHECK(mode_bracket(bad, {1}, 2).jacobi_violations().empty() == false);
}

TEST_CASE("Hamiltonian flows") {
  HamiltonianOperator h = miura_heisenberg_operator(2);
  CHECK(hamiltonian_flow(h, J("u^2")) == std::vector<JetPolynomial>{J("-u'")});
  CHECK(hamiltonian_flow(h, J("u*u'"))[0].is_zero());
  CHECK(hamiltonian_flow(virasoro_operator(), J("1/2*u^2"))[0] == J("1/2*u''' - 3*u*u'"));
}

TEST_CASE("Miura map intertwines mKdV and KdV flows") {
  // m = 1: mKdV is 1/2 u', and (2u - d)(1/2 u') = 1/2 (2 u u' - u'').
  Intertwining i1 = mkdv_kdv_intertwining(2, 1, 3);
  REQUIRE(i1.constant);
  CHECK(*i1.constant == ParamRational(make_rational(1, 2)));
  // m = 3: D_mu P_H D_mu^* (3/4 v) = (3/8) v''' - (9/4) v v' against 1/4 v''' - 3/2 v v'.
  Intertwining i3 = mkdv_kdv_intertwining(2, 3, 5);
  REQUIRE(i3.constant);
  CHECK(*i3.constant == ParamRational(make_rational(3, 2)));
  // D_mu^* (3/4 v) = 3/2 u^3 - 3/4 u'', then -1/2 d.
  CHECK(mkdv_flow(2, 3, 5)[0] == J("3/8*u''' - 9/4*u^2*u'"));
  // Frozen regression values: c = m/n across ranks.
  for (auto [n, m, depth] : std::vector<std::tuple<int, int, int>>{{2, 5, 7}, {3, 1, 3}, {3, 2, 4}, {3, 4, 6}, {4, 1, 3}, {4, 3, 5}}) {
    Intertwining r = mkdv_kdv_intertwining(n, m, depth);
    REQUIRE(r.constant);
    CHECK(*r.constant == ParamRational(make_rational(m, n)));
  }
}
