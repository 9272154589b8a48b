#include "opera/oper.hpp"

namespace opera {
namespace {

const JetPolynomial kOne(Rational(1));
const JetPolynomial kMinusOne(Rational(-1));

JetMatrix zero_matrix(int n) { return JetMatrix(n, std::vector<JetPolynomial>(n)); }

JetMatrix derivative(const JetMatrix& g) {
  JetMatrix r = g;
  for (auto& row : r)
    for (auto& x : row) x = x.total_derivative();
  return r;
}

JetMatrix subtract(JetMatrix a, const JetMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] -= b[i][j];
  return a;
}

void require_upper_unipotent(const JetMatrix& g) {
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i].size() != n) throw ShapeError("gauge matrix is not square");
    for (std::size_t j = 0; j <= i; ++j) {
      const JetPolynomial& expect = (i == j) ? kOne : JetPolynomial();
      if (!(g[i][j] == expect)) throw ShapeError("gauge matrix is not upper unipotent");
    }
  }
}

// Inverse of I + N with N strictly upper triangular.
JetMatrix unipotent_inverse(const JetMatrix& g) {
  const int n = static_cast<int>(g.size());
  JetMatrix nil = g;
  for (int i = 0; i < n; ++i) nil[i][i] = JetPolynomial();
  JetMatrix result = identity_matrix(n);
  JetMatrix power = identity_matrix(n);
  for (int k = 1; k < n; ++k) {
    power = matmul(power, nil);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (k % 2)
          result[i][j] -= power[i][j];
        else
          result[i][j] += power[i][j];
      }
  }
  return result;
}

}  // namespace

JetMatrix identity_matrix(int n) {
  JetMatrix m = zero_matrix(n);
  for (int i = 0; i < n; ++i) m[i][i] = kOne;
  return m;
}

JetMatrix matmul(const JetMatrix& a, const JetMatrix& b) {
  const std::size_t n = a.size();
  JetMatrix r = zero_matrix(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

MatrixOper::MatrixOper(JetMatrix a) : a_(std::move(a)) {
  const std::size_t n = a_.size();
  if (n < 2) throw ShapeError("oper size must be at least 2");
  for (const auto& row : a_)
    if (row.size() != n) throw ShapeError("oper matrix is not square");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(a_[i][i - 1] == kMinusOne))
      throw ShapeError("subdiagonal entry (" + std::to_string(i + 1) + "," + std::to_string(i) + ") must be -1");
    for (std::size_t j = 0; j + 1 < i; ++j)
      if (!a_[i][j].is_zero())
        throw ShapeError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") below the subdiagonal must be 0");
  }
  JetPolynomial tr;
  for (std::size_t i = 0; i < n; ++i) tr += a_[i][i];
  if (!tr.is_zero()) throw ShapeError("oper matrix must have trace 0");
}

MatrixOper gauge_transform(const JetMatrix& g, const MatrixOper& m) {
  require_upper_unipotent(g);
  if (static_cast<int>(g.size()) != m.size()) throw ShapeError("gauge matrix size mismatch");
  JetMatrix gi = unipotent_inverse(g);
  return MatrixOper(subtract(matmul(matmul(g, m.matrix()), gi), matmul(derivative(g), gi)));
}

MatrixOper companion(const CanonicalOper& c) {
  const int n = c.size();
  JetMatrix a = zero_matrix(n);
  for (int i = 1; i < n; ++i) a[i][i - 1] = kMinusOne;
  for (int i = 1; i <= n - 1; ++i) a[0][i] = -c.v[i - 1];
  return MatrixOper(std::move(a));
}

Canonicalization canonicalize(const MatrixOper& m) {
  const int n = m.size();
  MatrixOper cur = m;
  JetMatrix total = identity_matrix(n);
  // Level d holds the entries (i, i+d). A gauge x_r E_{r,r+d+1} shifts entry
  // (r, r+d) by -x_r and (r+1, r+d+1) by +x_r modulo higher levels, so the
  // entries of rows 2..n-d are cleared by a bidiagonal solve from the bottom.
  for (int d = 0; d <= n - 2; ++d) {
    const JetMatrix& b = cur.matrix();
    std::vector<JetPolynomial> x(static_cast<std::size_t>(n - d));  // x[r], r = 1..n-d-1 (1-based)
    bool trivial = true;
    for (int r = n - d - 1; r >= 1; --r) {
      // Row r+1 (1-based) entry (r+1, r+1+d) must vanish: x_r - x_{r+1} = -B.
      const JetPolynomial& entry = b[r][r + d];
      x[r] = (r + 1 <= n - d - 1 ? x[r + 1] : JetPolynomial()) - entry;
      if (!x[r].is_zero()) trivial = false;
    }
    if (trivial) continue;
    JetMatrix g = identity_matrix(n);
    for (int r = 1; r <= n - d - 1; ++r) g[r - 1][r + d] = x[r];
    cur = gauge_transform(g, cur);
    total = matmul(g, total);
  }
  CanonicalOper c;
  for (int i = 1; i <= n - 1; ++i) c.v.push_back(-cur.entry(0, i));
  for (int i = 1; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (!cur.entry(i, j).is_zero()) throw std::logic_error("canonicalization left a nonzero entry");
  if (!cur.entry(0, 0).is_zero()) throw std::logic_error("canonicalization left a nonzero diagonal entry");
  return {c, total};
}

DiffOp scalar_operator(const MatrixOper& m) {
  const int n = m.size();
  // Row i+1 (i >= 1): psi_i = psi_{i+1}' + sum_{j >= i+1} A_{i+1,j} psi_j.
  std::vector<DiffOp> p(static_cast<std::size_t>(n + 1));
  p[n] = DiffOp::multiplication(kOne);
  for (int i = n - 1; i >= 1; --i) {
    DiffOp acc = DiffOp::derivative() * p[i + 1];
    for (int j = i + 1; j <= n; ++j) acc += DiffOp::multiplication(m.entry(i, j - 1)) * p[j];
    p[i] = acc;
  }
  DiffOp l = DiffOp::derivative() * p[1];
  for (int j = 1; j <= n; ++j) l += DiffOp::multiplication(m.entry(0, j - 1)) * p[j];
  return l;
}

DiffOp scalar_operator(const CanonicalOper& c) {
  const int n = c.size();
  DiffOp l = DiffOp::derivative(n);
  for (int i = 1; i <= n - 1; ++i) l -= DiffOp::term(n - 1 - i, c.v[i - 1]);
  return l;
}

std::vector<JetPolynomial> miura_expand(const std::vector<JetPolynomial>& u) {
  const int n = static_cast<int>(u.size());
  if (n < 2) throw std::invalid_argument("Miura expansion needs at least two factors");
  JetPolynomial sum;
  for (const auto& x : u) sum += x;
  if (!sum.is_zero()) throw std::invalid_argument("Miura data violates sum u_i = 0");
  PseudoDiffOp prod = PseudoDiffOp::term(0, kOne);
  for (const auto& x : u) prod = compose(prod, PseudoDiffOp::term(1, kOne) + PseudoDiffOp::term(0, x));
  if (!prod.coeff(n - 1).is_zero()) throw std::logic_error("Miura product has a subprincipal term");
  std::vector<JetPolynomial> v;
  for (int i = 1; i <= n - 1; ++i) v.push_back(-prod.coeff(n - 1 - i));
  return v;
}

std::vector<JetPolynomial> miura_diagonal(int n) {
  if (n < 2) throw std::invalid_argument("Miura data needs n >= 2");
  std::vector<JetPolynomial> u(static_cast<std::size_t>(n));
  for (int j = 1; j < n; ++j) {
    u[j] = JetPolynomial::var(j);
    u[0] -= u[j];
  }
  return u;
}

MatrixOper miura_oper(const std::vector<JetPolynomial>& u) {
  const int n = static_cast<int>(u.size());
  JetMatrix a = zero_matrix(n);
  for (int i = 0; i < n; ++i) a[i][i] = u[i];
  for (int i = 1; i < n; ++i) a[i][i - 1] = kMinusOne;
  return MatrixOper(std::move(a));
}

// ---- coordinate changes ----

namespace {

void require_invertible_derivative(const JetSeries& phi) {
  if (phi.order() < 2) throw SeriesError("coordinate change needs at least two series terms");
  JetPolynomial d0 = phi.coeff(1);
  if (d0.is_zero() || !d0.is_constant()) throw SeriesError("coordinate change has a non-invertible derivative at 0");
}

JetSeries substitute_into(const JetSeries& object, const JetSeries& phi) {
  bool constant = true;
  for (const auto& [k, c] : object.coefficients())
    if (k != 0) constant = false;
  if (constant) {
    JetSeries r(phi.variable(), std::min(object.order(), phi.order()));
    if (object.order() > 0) r.set(0, object.coeff(0));
    return r;
  }
  if (!phi.coeff(0).is_zero()) throw SeriesError("composition requires phi(0) = 0");
  return object.compose(phi);
}

}  // namespace

JetSeries schwarzian(const JetSeries& phi) {
  require_invertible_derivative(phi);
  JetSeries d1 = phi.derivative();
  JetSeries d2 = d1.derivative();
  JetSeries d3 = d2.derivative();
  JetSeries inv = d1.inverse();
  JetSeries ratio = d2 * inv;
  return d3 * inv - (ratio * ratio).scaled(make_rational(3, 2));
}

JetSeries reparameterize(const JetSeries& object, const JetSeries& phi, const TransformLaw& law) {
  require_invertible_derivative(phi);
  JetSeries d1 = phi.derivative();
  JetSeries pulled = substitute_into(object, phi);
  switch (law.kind) {
    case TransformKind::ProjectiveConnection:
      // d^2 - v: the Schwarzian enters with -1/2.
      return pulled * d1 * d1 - schwarzian(phi).scaled(make_rational(1, 2));
    case TransformKind::Connection:
      return pulled * d1 + (d1.derivative() * d1.inverse()).scaled(law.rho);
    case TransformKind::Differential:
      return pulled * d1.pow(law.weight);
  }
  throw std::logic_error("unknown transformation kind");
}

JetSeries generic_taylor(int field, int order, char var) {
  JetSeries s(var, order);
  Rational fact(1);
  for (int k = 0; k < order; ++k) {
    if (k > 0) fact *= k;
    s.set(k, JetPolynomial::var(field, k) * ParamRational(Rational(1) / fact));
  }
  return s;
}

ParamRational nilpotent_residue(const TruncatedSeries<ParamRational>& v) {
  for (const auto& [k, c] : v.coefficients())
    if (k < -1) throw ShapeError("oper is not nilpotent: pole of order greater than 1");
  if (v.order() <= -1) return ParamRational();
  return v.coeff(-1);
}

ParamRational nilpotent_residue(const std::map<int, ParamRational>& modes) {
  for (const auto& [n, c] : modes)
    if (n >= 0 && !c.is_zero()) throw ShapeError("oper is not nilpotent: mode " + std::to_string(n) + " is nonzero");
  auto it = modes.find(-1);
  return it == modes.end() ? ParamRational() : it->second;
}

}  // namespace opera
