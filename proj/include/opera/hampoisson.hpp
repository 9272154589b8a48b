#pragma once

// Local Poisson structures {w_a(t), w_b(s)} = P_ab(t) delta(t - s) given by
// skew-adjoint matrices of differential operators, their pushforward along
// field maps, and the induced brackets of Laurent modes.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "opera/jet.hpp"

namespace opera {

struct CartanData {
  int rank = 1;
  std::vector<std::vector<int>> cartan;
  std::vector<std::vector<Rational>> inner;  // (alpha_i, alpha_j), (alpha_i, alpha_i) = 2
  std::vector<Rational> rho_vee;             // rho^vee on the simple coroots
  int dual_coxeter = 2;

  static CartanData type_a(int rank);
};

using OperatorMatrix = std::vector<std::vector<DiffOp>>;

OperatorMatrix adjoint(const OperatorMatrix& p);
OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);

class HamiltonianOperator {
 public:
  // Throws std::invalid_argument unless the matrix is square and skew-adjoint.
  explicit HamiltonianOperator(OperatorMatrix m);
  static HamiltonianOperator scalar(const DiffOp& d) { return HamiltonianOperator({{d}}); }

  int size() const { return static_cast<int>(m_.size()); }
  const OperatorMatrix& matrix() const { return m_; }
  const DiffOp& entry(int a, int b) const { return m_[a][b]; }  // 0-based
  bool operator==(const HamiltonianOperator&) const = default;
  std::string to_string(const FieldNames& names = FieldNames::grammar()) const;

 private:
  OperatorMatrix m_;
};

// -(1/4) (alpha_i, alpha_j) d in the coordinates w_i = alpha_i(u)/2; rank 1 is -1/2 d.
HamiltonianOperator heisenberg_operator(const CartanData& c);
// Heisenberg structure in the independent Miura coordinates u_2..u_n (jet
// fields 1..n-1): -(delta_ab - 1/n) d.
HamiltonianOperator miura_heisenberg_operator(int n);
// 1/2 d^3 - 2 v d - v'.
HamiltonianOperator virasoro_operator();

// Weights under which derivatives add 1; defaults to 1 for every field.
using FieldWeights = std::vector<int>;

// Expresses p (in source fields) as a differential polynomial in the targets
// mu_a (jet field a), using a weighted ansatz. nullopt when impossible.
std::optional<JetPolynomial> rewrite_in_targets(const JetPolynomial& p, const std::vector<JetPolynomial>& mu,
                                                const FieldWeights& source_weights = {});

struct Pushforward {
  HamiltonianOperator op;
  bool rewritten = false;  // false: coefficients are left in source fields
};

// D_mu P D_mu^* with D_mu the Frechet matrix of the field map.
Pushforward pushforward_structure(const std::vector<JetPolynomial>& mu, const HamiltonianOperator& p,
                                  const FieldWeights& source_weights = {});

// Linear combination of modes w_{field,n} plus a central constant.
struct ModeExpr {
  std::map<std::pair<int, int>, ParamRational> modes;  // (field, n) -> coefficient
  ParamRational central;

  bool is_zero() const { return modes.empty() && central.is_zero(); }
  void add_mode(int field, int n, const ParamRational& c);
  ModeExpr& operator+=(const ModeExpr& o);
  ModeExpr operator-() const;
  ModeExpr scaled(const ParamRational& c) const;
  bool operator==(const ModeExpr&) const = default;
  std::string to_string(const std::string& letter = "w", bool indexed_fields = false) const;
};

// {w_{i,n}, w_{j,m}} = Res_t Res_s t^(n+D_i-1) s^(m+D_j-1) P_ij(t) delta(t-s),
// w_i(t) = sum_n w_{i,n} t^(-n-D_i). Coefficients of P must be affine in the fields.
ModeExpr mode_bracket_entry(const HamiltonianOperator& p, const FieldWeights& weights, int i, int n, int j, int m);

class ModeBracketTable {
 public:
  using Key = std::tuple<int, int, int, int>;  // (i, n, j, m), fields 1-based

  ModeBracketTable(const HamiltonianOperator& p, FieldWeights weights, int window);
  int window() const { return window_; }
  int fields() const { return static_cast<int>(weights_.size()); }
  const ModeExpr& at(int i, int n, int j, int m) const { return table_.at({i, n, j, m}); }
  const std::map<Key, ModeExpr>& entries() const { return table_; }
  bool is_skew_symmetric() const;
  // Cyclic sums {a,{b,c}} + {b,{c,a}} + {c,{a,b}} that fail to vanish.
  std::vector<std::string> jacobi_violations() const;

 private:
  HamiltonianOperator p_;
  FieldWeights weights_;
  int window_;
  std::map<Key, ModeExpr> table_;
  ModeExpr bracket_with(int i, int n, const ModeExpr& e) const;
};

ModeBracketTable mode_bracket(const HamiltonianOperator& p, const FieldWeights& weights, int window);

// P applied to the Euler derivatives of H.
std::vector<JetPolynomial> hamiltonian_flow(const HamiltonianOperator& p, const JetPolynomial& h);

// Miura field map v_i(u) for sl_n in the coordinates of miura_heisenberg_operator.
std::vector<JetPolynomial> miura_field_map(int n);
// Hamiltonian flow of the pulled-back density res L^{m/n} under the Heisenberg structure.
std::vector<JetPolynomial> mkdv_flow(int n, int m, int depth);

struct Intertwining {
  std::optional<ParamRational> constant;  // c with D_mu(mKdV) = c * (KdV o mu)
  std::vector<JetPolynomial> lhs, rhs;
};
Intertwining mkdv_kdv_intertwining(int n, int m, int depth);

}  // namespace opera
