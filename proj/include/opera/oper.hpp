#pragma once

// sl_n opers as first-order matrix operators d + A and as scalar operators
// L = d^n - sum_i v_i d^(n-1-i). The i-th coefficient v_i is -A_{1,i+1} of the
// companion form.

#include <stdexcept>
#include <vector>

#include "opera/jet.hpp"
#include "opera/psdo.hpp"
#include "opera/series.hpp"

namespace opera {

using JetMatrix = std::vector<std::vector<JetPolynomial>>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

JetMatrix identity_matrix(int n);
JetMatrix matmul(const JetMatrix& a, const JetMatrix& b);

// d + A with -1 on the subdiagonal, zeros below it, and trace 0.
class MatrixOper {
 public:
  explicit MatrixOper(JetMatrix a);
  int size() const { return static_cast<int>(a_.size()); }
  const JetMatrix& matrix() const { return a_; }
  const JetPolynomial& entry(int i, int j) const { return a_[i][j]; }  // 0-based
  bool operator==(const MatrixOper&) const = default;

 private:
  JetMatrix a_;
};

struct CanonicalOper {
  std::vector<JetPolynomial> v;  // v_1 .. v_{n-1}
  int size() const { return static_cast<int>(v.size()) + 1; }
  bool operator==(const CanonicalOper&) const = default;
};

struct Canonicalization {
  CanonicalOper oper;
  JetMatrix gauge;  // upper unipotent g with gauge(g, M) = companion(oper)
};

// d + A  ->  d + g A g^-1 - (dg) g^-1, for upper unipotent g.
MatrixOper gauge_transform(const JetMatrix& g, const MatrixOper& m);
MatrixOper companion(const CanonicalOper& c);
Canonicalization canonicalize(const MatrixOper& m);
// Scalar operator annihilating the last component of solutions of (d + A) psi = 0.
DiffOp scalar_operator(const MatrixOper& m);
DiffOp scalar_operator(const CanonicalOper& c);

// v_1..v_{n-1} of (d + u_1)...(d + u_n); requires sum u_i = 0.
std::vector<JetPolynomial> miura_expand(const std::vector<JetPolynomial>& u);
// Diagonal entries in terms of n-1 independent fields: u_{j+1} = field j,
// u_1 = -(u_2 + ... + u_n). For n = 2 this gives (d - u)(d + u).
std::vector<JetPolynomial> miura_diagonal(int n);
MatrixOper miura_oper(const std::vector<JetPolynomial>& u);

// ---- coordinate changes t = phi(s) ----

using JetSeries = TruncatedSeries<JetPolynomial>;

enum class TransformKind { ProjectiveConnection, Connection, Differential };

struct TransformLaw {
  TransformKind kind = TransformKind::ProjectiveConnection;
  int weight = 2;                    // k for a k-differential
  Rational rho = make_rational(1, 2);  // coefficient of phi''/phi' for connections
};

JetSeries schwarzian(const JetSeries& phi);
// Transforms a local object given as a series in t.
JetSeries reparameterize(const JetSeries& object, const JetSeries& phi, const TransformLaw& law);
// Taylor series sum_k u_{field,k} t^k / k! of a generic field.
JetSeries generic_taylor(int field, int order, char var = 't');

// Residue of the nilpotent oper d^2 - v(t) with at most a simple pole: the
// coefficient of t^-1. Terms t^k with k < -1 are a shape error.
ParamRational nilpotent_residue(const TruncatedSeries<ParamRational>& v);
// Same from modes v_n of v(t) = sum_n v_n t^(-n-2); nonzero v_n with n >= 0 is a shape error.
ParamRational nilpotent_residue(const std::map<int, ParamRational>& modes);

}  // namespace opera
