#pragma once

// sl_2 Wakimoto module of critical level on the Fock space of the Weyl
// algebra [a_n, a*_m] = delta_{n,-m}, a(z) = sum a_n z^(-n-1),
// a*(z) = sum a*_n z^(-n), u(z) = sum_{|k| <= U} u_k z^(-k-1) with formal u_k.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opera/rational.hpp"

namespace opera {

// Polynomial in the formal modes u_k with rational coefficients.
class UPoly {
 public:
  using Monomial = std::map<int, int>;  // k -> exponent
  UPoly() = default;
  explicit UPoly(const Rational& c);
  static UPoly u(int k);

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  UPoly& operator+=(const UPoly& o);
  UPoly operator-() const;
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a += -b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  UPoly scaled(const Rational& c) const;
  bool operator==(const UPoly&) const = default;
  std::string to_string() const;

 private:
  std::map<Monomial, Rational> terms_;
  void add(const Monomial& m, const Rational& c);
};

// Creation generator: a_n (n < 0) or a*_n (n <= 0).
struct FockGen {
  bool dual = false;  // a* when true
  int mode = -1;
  auto operator<=>(const FockGen&) const = default;
};
using FockBasis = std::map<FockGen, int>;

class FockState {
 public:
  FockState() = default;
  static FockState vacuum();
  static FockState basis(const FockBasis& b);

  const std::map<FockBasis, UPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  FockState& operator+=(const FockState& o);
  FockState operator-() const;
  friend FockState operator+(FockState a, const FockState& b) { return a += b; }
  friend FockState operator-(FockState a, const FockState& b) { return a += -b; }
  FockState times(const UPoly& c) const;
  bool operator==(const FockState&) const = default;
  // Largest L_0 eigenvalue among basis vectors; a_n, a*_n contribute -n.
  int energy() const;
  std::string to_string() const;

  void add(const FockBasis& b, const UPoly& c);

 private:
  std::map<FockBasis, UPoly> terms_;
};

std::string basis_to_string(const FockBasis& b);

// a_n (dual false) or a*_n applied to s.
FockState apply_weyl(bool dual, int n, const FockState& s);

enum class Current { e, h, f, S };

struct FieldMode {
  Current field = Current::e;
  int n = 0;
};

std::string field_mode_name(const FieldMode& m);

class WindowExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct WakimotoConfig {
  int u_support = 3;       // u_k formal for |k| <= u_support, zero otherwise
  int mode_limit = 32;     // |n| beyond this raises WindowExceeded
  int degree_limit = 12;   // states with more generators raise WindowExceeded
  bool corrupt_f = false;  // flips the sign of -2 d a* (negative control)
};

class WakimotoModule {
 public:
  explicit WakimotoModule(WakimotoConfig config = {});
  const WakimotoConfig& config() const { return config_; }

  FockState apply(const FieldMode& m, const FockState& s) const;
  // (xy - yx) s
  FockState commutator(const FieldMode& x, const FieldMode& y, const FockState& s) const;
  // S_n = sum_k :e_k f_(n-k): + :f_k e_(n-k): + 1/2 :h_k h_(n-k):
  FockState sugawara(int n, const FockState& s) const;
  // Mode n of w^2 - w' for w = scale * u: scale^2 sum_{a+b=n} u_a u_b + scale (n+1) u_n.
  UPoly miura_mode(int n, const Rational& scale = 1) const;

 private:
  WakimotoConfig config_;
  FockState current(Current j, int n, const FockState& s) const;
  void check(int n, const FockState& s) const;
};

// kappa_c(x, y) = -1/2 Tr(ad x ad y) on the basis {e, h, f}.
Rational critical_form(Current x, Current y);
// [x, y] in sl_2 as (coefficient, current); nullopt when zero.
std::optional<std::pair<Rational, Current>> sl2_bracket(Current x, Current y);

// Products of at most `degree` creation generators with modes >= -window.
std::vector<FockBasis> basis_states(int window, int degree);

struct RelationCheck {
  std::string id;
  bool passed = true;
  std::string detail;  // counterexample on failure
};

struct WakimotoReport {
  int window = 0, degree = 0;
  std::vector<RelationCheck> checks;
  // c with S_n = c (w^2 - w')_n, w = u/2 the coordinate of the connection
  // on Omega^rho (u = chi(h), rho = alpha/2).
  std::optional<Rational> sugawara_constant;
  bool passed() const;
};

// Miura variable of the Wakimoto parameter u = chi(h).
inline const Rational kWakimotoMiuraScale(1, 2);

// Affine relations with critical central terms, Sugawara centrality, the
// state independence of S_n and its match with the Miura image. Sugawara
// checks use |n| <= min(window, 2) and states of degree <= min(degree, 3).
WakimotoReport verify_relations(int window, int degree, const WakimotoConfig& config = {});

}  // namespace opera
