// Runs every acceptance criterion at its stated size and prints one line each.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "opera/verify.hpp"

using namespace opera;

namespace {

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<std::vector<Check>()> run;
};

}  // namespace

int main() {
  const unsigned seed = 2718;
  const std::vector<Criterion> criteria = {
      {1, "Miura n=2: v = u^2 - u'", 1, [] { return check_miura_sl2(); }},
      {2, "Heisenberg pushforward is Virasoro; mode brackets on |n|,|m| <= 8", 60, [] { return check_poisson(8); }},
      {3, "Lax structure n=2 at depth 8: order-0 commutator, commuting flows, intertwining", 600, [] { return check_lax(8); }},
      {4, "canonicalization inverts 20 random unipotent gauges for n = 2, 3, 4", 60, [&] { return check_canonicalization(20, seed); }},
      {5, "Schwarzian on Moebius maps, cocycle to order 10, Miura equivariance to order 8", 60, [] { return check_coordinate_laws(10, 8); }},
      {6, "q-Miura: t(z) = Lambda(z) + Lambda(zq^2)^-1, constant term prod Lambda_i", 1, [] { return check_qmiura(); }},
      {7, "q-bracket of t(z) on window 12", 60, [] { return check_qbracket(12); }},
      {8, "classical limit: 2, 0, 4(phi^2 - z phi_z)", 1, [] { return check_classical_limit(); }},
      {9, "deformed structure function: 1 at t=1 to order 20, first order 2 f_n on window 12", 60, [] { return check_structure_function(20, 12); }},
      {10, "q-characters and forgetful images for n = 2, 3, 4", 1, [] { return check_qchar(); }},
      {11, "Wakimoto module at critical level, window 3, degree 4", 600, [] { return check_wakimoto(3, 4); }},
      {12, "Gelfand-Dickey lemma on 50 random pairs", 60, [&] { return check_gelfand_dickey(50, seed); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Check> checks = c.run();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = !checks.empty() && dt <= c.limit_seconds;
    for (const auto& k : checks) ok = ok && k.passed;
    failed += !ok;
    std::printf("criterion %2d %s  %.3fs (limit %gs)  %s\n", c.id, ok ? "PASS" : "FAIL", dt, c.limit_seconds, c.title);
    for (const auto& k : checks)
      if (!k.passed || c.id == 8) std::printf("    %s %s  %s\n", k.passed ? "pass" : "FAIL", k.id.c_str(), k.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
