#pragma once

// Formal pseudodifferential operators sum_k a_k d^k over the jet algebra.
//
// A differential operator (no negative orders, finitely many terms) is exact.
// Any other operator carries a certified depth T: with top order N, the
// coefficients of orders N, N-1, ..., N-T+1 are exact and nothing below is
// known. Arithmetic propagates the depth and never widens it.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opera/jet.hpp"

namespace opera {

class DepthExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PseudoDiffOp {
 public:
  PseudoDiffOp() = default;
  static PseudoDiffOp from_diffop(const DiffOp& d);
  // Single term a d^k; a truncated depth is required when k < 0.
  static PseudoDiffOp term(int order, const JetPolynomial& a, std::optional<int> depth = std::nullopt);
  // Builds a truncated operator with the given top order and depth; terms
  // outside the certified window are dropped.
  static PseudoDiffOp truncated(int top, int depth, const std::map<int, JetPolynomial>& coeffs);

  bool is_exact() const { return !depth_.has_value(); }
  bool is_differential() const;
  int top() const;
  std::optional<int> depth() const { return depth_; }
  // Lowest certified order (meaningful only when truncated).
  int floor() const;

  const std::map<int, JetPolynomial>& coefficients() const { return coeffs_; }
  JetPolynomial coeff(int k) const;

  PseudoDiffOp operator-() const;
  friend PseudoDiffOp operator+(const PseudoDiffOp& a, const PseudoDiffOp& b);
  friend PseudoDiffOp operator-(const PseudoDiffOp& a, const PseudoDiffOp& b) { return a + (-b); }
  friend PseudoDiffOp operator*(const PseudoDiffOp& a, const PseudoDiffOp& b) { return compose(a, b); }
  PseudoDiffOp scaled(const ParamRational& c) const;
  bool operator==(const PseudoDiffOp& o) const;

  // Generalized Leibniz: d^k a = sum_j C(k, j) a^(j) d^(k-j).
  friend PseudoDiffOp compose(const PseudoDiffOp& a, const PseudoDiffOp& b);
  PseudoDiffOp pow(int k) const;
  PseudoDiffOp with_depth(int depth) const;

  // Orders >= 0; requires certification down to order 0.
  PseudoDiffOp positive_part() const;
  // Coefficient of d^-1; requires certification down to order -1.
  JetPolynomial residue() const;
  DiffOp to_diffop() const;

  template <class F>
  PseudoDiffOp map_coefficients(F&& f) const {
    PseudoDiffOp r = *this;
    r.coeffs_.clear();
    for (const auto& [k, c] : coeffs_) r.put(k, f(c));
    return r;
  }

  std::string to_string(const FieldNames& names = FieldNames::grammar()) const;

 private:
  std::map<int, JetPolynomial> coeffs_;
  std::optional<int> depth_;
  int top_ = 0;  // declared top order of a truncated operator

  void put(int k, const JetPolynomial& a);
  void drop_below_floor();
};

// n-th root of a monic order-n operator with vanishing d^(n-1) coefficient,
// monic of order 1 and certified to the given depth.
PseudoDiffOp nth_root(const PseudoDiffOp& L, int n, int depth);

// L = d^n - sum_{i=1}^{n-1} v_i d^(n-1-i) with v_i = field i.
PseudoDiffOp kdv_lax_operator(int n);

struct LaxFlow {
  std::vector<JetPolynomial> rhs;  // d/dt_m v_i for i = 1..n-1
  DiffOp commutator;               // [(L^{m/n})_+, L]
};

// Requires m > 0 and m not divisible by n.
LaxFlow lax_rhs(int n, int m, int depth);
// res L^{m/n}.
JetPolynomial conserved_density(int n, int m, int depth);

}  // namespace opera
