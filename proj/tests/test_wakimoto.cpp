#include <random>

#include "doctest.h"
#include "opera/hampoisson.hpp"
#include "opera/wakimoto.hpp"

using namespace opera;

namespace {

FockState random_state(std::mt19937& rng, int window, int degree) {
  std::vector<FockBasis> basis = basis_states(window, degree);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  FockState s;
  for (int i = 0; i < 3; ++i) s.add(basis[pick(rng)], UPoly(coef(rng)));
  return s;
}

UPoly constant_term(const UPoly& p) {
  auto it = p.terms().find({});
  return it == p.terms().end() ? UPoly() : UPoly(it->second);
}

}  // namespace

TEST_CASE("Fock space") {
  const FockState vac = FockState::vacuum();
  WakimotoModule mod;
  for (int n = 0; n <= 3; ++n) CHECK(mod.apply({Current::e, n}, vac).is_zero());
  CHECK(mod.apply({Current::e, -1}, vac) == FockState::basis({{{false, -1}, 1}}));
  CHECK(basis_states(0, 0).size() == 1);
  CHECK(basis_states(1, 1).size() == 4);  // |0>, a_{-1}, a*_0, a*_{-1}
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    FockState s = random_state(rng, 2, 3);
    for (int n = -3; n <= 3; ++n)
      for (int m = -3; m <= 3; ++m) {
        FockState c = apply_weyl(false, n, apply_weyl(true, m, s)) - apply_weyl(true, m, apply_weyl(false, n, s));
        CHECK(c == (n == -m ? s : FockState()));
      }
  }
  // h_0 |0> = u_0 |0>: the bilinear part is normally ordered.
  CHECK(mod.apply({Current::h, 0}, vac) == vac.times(UPoly::u(0)));
  CHECK_THROWS_AS(mod.apply({Current::e, 100}, vac), WindowExceeded);
}

TEST_CASE("critical form") {
  const CartanData a1 = CartanData::type_a(1);
  // kappa_c = -h^vee times the trace form, tr(hh) = 2, tr(ef) = 1.
  CHECK(critical_form(Current::h, Current::h) == Rational(-a1.dual_coxeter * 2));
  CHECK(critical_form(Current::e, Current::f) == Rational(-a1.dual_coxeter));
  CHECK(critical_form(Current::f, Current::e) == Rational(-2));
  CHECK(critical_form(Current::e, Current::e) == 0);
  CHECK(critical_form(Current::h, Current::e) == 0);
  CHECK(sl2_bracket(Current::e, Current::f)->second == Current::h);
  CHECK_FALSE(sl2_bracket(Current::h, Current::h));
}

TEST_CASE("affine relations at critical level") {
  WakimotoModule mod;
  const FockState vac = FockState::vacuum();
  for (int n = -3; n <= 3; ++n)
    for (int m = -3; m <= 3; ++m) {
      // [h_n, h_m] = -kappa_c(h,h) m delta_{n,-m} = 4 m delta_{n,-m}
      CHECK(mod.commutator({Current::h, n}, {Current::h, m}, vac) == (n + m == 0 ? vac.times(UPoly(4 * m)) : FockState()));
      // [e_n, f_m] = h_{n+m} + 2 m delta_{n,-m}
      FockState expect = mod.apply({Current::h, n + m}, vac);
      if (n + m == 0) expect += vac.times(UPoly(2 * m));
      CHECK(mod.commutator({Current::e, n}, {Current::f, m}, vac) == expect);
      CHECK(mod.commutator({Current::e, n}, {Current::e, m}, vac).is_zero());
    }
  WakimotoReport r = verify_relations(1, 2);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.passed, c.id << ": " << c.detail);
  CHECK(r.checks.size() == 11);
  REQUIRE(r.sugawara_constant);
  CHECK(*r.sugawara_constant == 2);
  WakimotoReport z = verify_relations(0, 0);
  CHECK(z.passed());
}

TEST_CASE("negative control: corrupted f") {
  WakimotoConfig bad;
  bad.corrupt_f = true;
  WakimotoReport r = verify_relations(1, 1, bad);
  CHECK_FALSE(r.passed());
  bool ef_failed = false;
  for (const auto& c : r.checks)
    if (c.id == "[e,f]") {
      ef_failed = !c.passed;
      CHECK(c.detail.find("|0>") != std::string::npos);
    }
  CHECK(ef_failed);
}

TEST_CASE("Segal-Sugawara action") {
  WakimotoModule mod;
  const FockState vac = FockState::vacuum();
  std::mt19937 rng(8);
  for (int n = -2; n <= 2; ++n) {
    const UPoly v = mod.miura_mode(n, kWakimotoMiuraScale).scaled(2);
    CHECK(mod.sugawara(n, vac) == vac.times(v));
    for (int trial = 0; trial < 3; ++trial) {
      FockState s = random_state(rng, 2, 2);
      CHECK(mod.sugawara(n, s) == s.times(v));
    }
    // u = 0: no scalar source.
    if (n >= -1) CHECK(constant_term(v).is_zero());
  }
  // In the variable u of h(z) itself, S_0 = 1/2 sum u_a u_-a + u_0 is not a
  // multiple of (u^2 - u')_0 = sum u_a u_-a + u_0.
  const UPoly s0 = mod.sugawara(0, vac).terms().at({});
  CHECK(s0 != mod.miura_mode(0).scaled(Rational(1, 2)));
  CHECK(s0 != mod.miura_mode(0));
  // Centrality on a few states.
  for (int trial = 0; trial < 3; ++trial) {
    FockState s = random_state(rng, 1, 2);
    for (Current j : {Current::e, Current::h, Current::f})
      CHECK(mod.commutator({Current::S, 1}, {j, -1}, s).is_zero());
  }
}
