#include "doctest.h"
#include "opera/psdo.hpp"
#include "test_util.hpp"

using namespace opera;
using opera::testing::J;

namespace {

PseudoDiffOp P(int k, const std::string& a, std::optional<int> depth = std::nullopt) {
  return PseudoDiffOp::term(k, J(a), depth);
}

PseudoDiffOp random_operator(std::mt19937& rng, int top, int depth, int nfields) {
  std::map<int, JetPolynomial> c;
  for (int k = top; k > top - depth; --k) c[k] = opera::testing::random_jet(rng, nfields, 2, 2, 2);
  return PseudoDiffOp::truncated(top, depth, c);
}

}  // namespace

TEST_CASE("composition by the Leibniz rule") {
  CHECK(compose(P(1, "1"), P(0, "u")) == P(1, "u") + P(0, "u'"));
  // d^-1 u: verify by applying d on the left.
  PseudoDiffOp inv = compose(P(-1, "1", 6), P(0, "u"));
  CHECK(inv.depth() == 6);
  CHECK(inv.coeff(-1) == J("u"));
  CHECK(inv.coeff(-2) == J("-u'"));
  CHECK(inv.coeff(-3) == J("u''"));
  PseudoDiffOp back = compose(P(1, "1"), inv);
  CHECK(back.coeff(0) == J("u"));
  for (int k = back.floor(); k < 0; ++k) CHECK(back.coeff(k).is_zero());
  // Miura product.
  CHECK(compose(P(1, "1") - P(0, "u"), P(1, "1") + P(0, "u")) == P(2, "1") - P(0, "u^2 - u'"));
}

TEST_CASE("depth bookkeeping") {
  PseudoDiffOp a = PseudoDiffOp::truncated(1, 4, {{1, J("1")}, {-1, J("u")}});
  PseudoDiffOp b = PseudoDiffOp::truncated(2, 6, {{2, J("1")}});
  CHECK(compose(a, b).depth() == 4);
  CHECK((a + b).depth() == 5);  // floors -2 and -3, top 2
  CHECK_THROWS_AS(a.coeff(-3), DepthExhausted);
  CHECK_NOTHROW((void)a.residue());
  CHECK_THROWS_AS(a.with_depth(2).residue(), DepthExhausted);
  CHECK_NOTHROW((void)a.positive_part());
  CHECK_THROWS_AS(PseudoDiffOp::term(-1, J("1")), std::invalid_argument);
  CHECK_THROWS_AS(a.with_depth(5), DepthExhausted);
}

TEST_CASE("square roots") {
  CHECK(nth_root(P(2, "1"), 2, 5) == PseudoDiffOp::truncated(1, 5, {{1, J("1")}}));
  PseudoDiffOp L = P(2, "1") - P(0, "u");
  PseudoDiffOp R = nth_root(L, 2, 6);
  // Oracle: squaring the ansatz d + a d^-1 + b d^-2 + c d^-3 gives
  // 2a = -v, a' + 2b = 0, b' + 2c + a^2 = 0.
  CHECK(R.coeff(0).is_zero());
  CHECK(R.coeff(-1) == J("-1/2*u"));
  CHECK(R.coeff(-2) == J("1/4*u'"));
  CHECK(R.coeff(-3) == J("-1/8*u'' - 1/8*u^2"));
  PseudoDiffOp R2 = compose(R, R);
  CHECK(R2 == L.with_depth(6));
  CHECK(R.residue() == J("-1/2*u"));
  CHECK(P(2, "1").residue().is_zero());
  CHECK_THROWS_AS(nth_root(P(2, "2"), 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(nth_root(P(2, "1") + P(1, "u"), 2, 4), std::invalid_argument);
}

TEST_CASE("positive part and residue") {
  PseudoDiffOp A = PseudoDiffOp::truncated(1, 4, {{1, J("1")}, {0, J("u")}, {-1, J("u^2")}});
  CHECK(A.positive_part() == P(1, "1") + P(0, "u"));
  CHECK(A.residue() == J("u^2"));
}

TEST_CASE("n-th roots reproduce L for randomized coefficients") {
  std::mt19937 rng(4242);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      PseudoDiffOp L = P(n, "1");
      for (int k = 0; k <= n - 2; ++k) L = L + PseudoDiffOp::term(k, opera::testing::random_jet(rng, 2, 1, 2, 2));
      const int depth = 5;
      PseudoDiffOp R = nth_root(L, n, depth);
      PseudoDiffOp Rn = R.pow(n);
      CHECK(Rn.depth() == depth);
      for (int k = n; k > n - depth; --k) CHECK(Rn.coeff(k) == L.coeff(k));
    }
  }
}

TEST_CASE("residue of a commutator is a total derivative") {
  std::mt19937 rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    PseudoDiffOp A = random_operator(rng, 1, 5, 2);
    PseudoDiffOp B = random_operator(rng, 1, 5, 2);
    JetPolynomial r = (compose(A, B) - compose(B, A)).residue();
    CHECK(r.euler(1).is_zero());
    CHECK(r.euler(2).is_zero());
  }
}

TEST_CASE("KdV flows in Lax form") {
  // m = 1 is translation.
  LaxFlow f1 = lax_rhs(2, 1, 3);
  REQUIRE(f1.rhs.size() == 1);
  CHECK(f1.rhs[0] == J("u'"));
  // m = 3: oracle is the hand-derived (L^{3/2})_+ = d^3 - 3/2 v d - 3/4 v'
  // commuted with L by exact differential-operator arithmetic.
  DiffOp A = DiffOp::derivative(3) - DiffOp::term(1, J("3/2*u")) - DiffOp::multiplication(J("3/4*u'"));
  DiffOp L = DiffOp::derivative(2) - DiffOp::multiplication(J("u"));
  DiffOp C = A * L - L * A;
  LaxFlow f3 = lax_rhs(2, 3, 8);
  CHECK(f3.commutator == C);
  CHECK(f3.commutator.order() == 0);
  CHECK(f3.rhs[0] == J("1/4*u''' - 3/2*u*u'"));
  CHECK_THROWS_AS(lax_rhs(2, 2, 8), std::invalid_argument);
  CHECK_THROWS_AS(lax_rhs(2, 3, 3), DepthExhausted);
}

TEST_CASE("Boussinesq flow n = 3, m = 2") {
  // Oracle: R = d - (v1/3) d^-1 + ..., so (L^{2/3})_+ = d^2 - 2/3 v1.
  DiffOp A = DiffOp::derivative(2) - DiffOp::multiplication(J("2/3*u1"));
  DiffOp L = DiffOp::derivative(3) - DiffOp::term(1, J("u1")) - DiffOp::multiplication(J("u2"));
  DiffOp C = A * L - L * A;
  LaxFlow f = lax_rhs(3, 2, 6);
  CHECK(f.commutator == C);
  REQUIRE(f.rhs.size() == 2);
  CHECK(f.rhs[0] == -C.coeff(1));
  CHECK(f.rhs[1] == -C.coeff(0));
  CHECK(f.rhs[0] == J("2*u2_1 - u1_2"));
  CHECK(f.rhs[1] == J("2/3*u1_0*u1_1 + u2_2 - 2/3*u1_3"));
}

TEST_CASE("Lax commutators have order at most n - 2") {
  for (int n = 2; n <= 4; ++n)
    for (int m = 1; m <= 5; ++m) {
      if (m % n == 0) continue;
      LaxFlow f = lax_rhs(n, m, m + 1);
      CHECK(f.commutator.order() <= n - 2);
      CHECK(f.commutator.coeff(n - 1).is_zero());
    }
}

TEST_CASE("conserved densities") {
  CHECK(conserved_density(2, 1, 3) == J("-1/2*u"));
  // Oracle: residue of L o R with the hand-solved root coefficients.
  PseudoDiffOp Rh = PseudoDiffOp::truncated(1, 5, {{1, J("1")}, {-1, J("-1/2*u")}, {-2, J("1/4*u'")}, {-3, J("-1/8*u'' - 1/8*u^2")}});
  JetPolynomial oracle = compose(P(2, "1") - P(0, "u"), Rh).residue();
  JetPolynomial h3 = conserved_density(2, 3, 5);
  CHECK(h3 == oracle);
  CHECK(h3 == J("3/8*u^2 - 1/8*u''"));
  CHECK(h3.euler(1) == J("3/4*u"));
  JetPolynomial h31 = conserved_density(3, 1, 3);
  CHECK(h31 == J("-1/3*u1"));
}

TEST_CASE("KdV flows m = 3 and m = 5 commute") {
  JetPolynomial k3 = lax_rhs(2, 3, 6).rhs[0];
  JetPolynomial k5 = lax_rhs(2, 5, 6).rhs[0];
  CHECK((k3.frechet(1).apply(k5) - k5.frechet(1).apply(k3)).is_zero());
}
