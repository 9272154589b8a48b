#include <stdexcept>

#include "opera/qlattice.hpp"

namespace opera {
namespace {

const ParamRational kOne(1);

ParamRational q_power(int k) { return ParamRational::variable(Var::q).pow(k); }

ParamRational q_minus_inverse() { return q_power(1) - q_power(-1); }

SymbolPoly one_poly() { return SymbolPoly(kOne); }

}  // namespace

// ---- q-Miura ----

QMiura q_miura_expand(int n) {
  if (n < 1) throw std::invalid_argument("q-Miura needs n >= 1");
  QDiffOp prod = QDiffOp::term(0, one_poly());
  SymbolPoly expected = one_poly();
  for (int i = 1; i <= n; ++i) {
    prod = q_compose(prod, q_shift_operator() + QDiffOp::term(0, SymbolPoly::lambda(i)));
    expected = expected * SymbolPoly::lambda(i);
  }
  QMiura out;
  out.product = prod;
  for (int i = 1; i <= n - 1; ++i) out.t.push_back(prod.coeff(n - i));
  out.constant = prod.coeff(0);
  if (!(out.constant == expected)) throw std::logic_error("q-Miura constant term differs from the product of Lambda_i");
  return out;
}

SymbolPoly impose_product_constraint(const SymbolPoly& p, int n) {
  return p.substitute([n](const ShiftedSymbol& s) -> std::optional<SymbolPoly> {
    if (s.kind != SymbolKind::Lambda || s.index != n) return std::nullopt;
    SymbolPoly r = one_poly();
    for (int i = 1; i < n; ++i) r = r * SymbolPoly::lambda(i, s.shift, -1, s.point);
    return r;
  });
}

// ---- q-KdV ----

QLaxFlow q_root_lax(int n, int m, int depth, std::optional<std::vector<SymbolPoly>> coefficients) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (m <= 0) throw std::invalid_argument("flow index m must be positive");
  if (m % n == 0) throw std::invalid_argument("flow index m must not be divisible by n");
  if (depth < m + 1) throw QDepthExhausted("positive part of L^{m/n} needs depth at least m + 1");
  std::vector<SymbolPoly> t;
  if (coefficients) {
    t = *coefficients;
    if (static_cast<int>(t.size()) != n - 1) throw std::invalid_argument("expected n - 1 coefficients");
  } else {
    for (int i = 1; i <= n - 1; ++i) t.push_back(SymbolPoly::symbol({SymbolKind::T, i, Point::z, 0}));
  }
  QDiffOp L = QDiffOp::term(n, one_poly()) + QDiffOp::term(0, one_poly());
  for (int i = 1; i <= n - 1; ++i) L = L + QDiffOp::term(n - i, t[i - 1]);

  QLaxFlow out;
  out.relations = RootRelations(n);
  auto reduce = [&](const QDiffOp& op) { return op.map_coefficients([&](const SymbolPoly& c) { return out.relations.reduce(c); }); };

  std::map<int, SymbolPoly> r{{1, one_poly()}};
  // Step j fixes x at D^(1-j): it enters R^n at D^(n-j) as sum_{a<n} S^a x.
  for (int j = 1; j < depth; ++j) {
    QDiffOp partial = QDiffOp::truncated(1, j + 1, r);
    SymbolPoly known = out.relations.reduce(partial.pow(n).coeff(n - j));
    SymbolPoly rhs = out.relations.reduce(L.coeff(n - j) - known);
    if (rhs.is_zero()) continue;
    if (rhs.is_constant()) {
      r[1 - j] = rhs * ParamRational(make_rational(1, n));
      continue;
    }
    out.relations.add(j, rhs);
    r[1 - j] = SymbolPoly::symbol({SymbolKind::Root, j, Point::z, 0});
  }
  out.root = QDiffOp::truncated(1, depth, r);
  QDiffOp A = reduce(out.root.pow(m)).positive_part();
  out.commutator = reduce(q_compose(A, L) - q_compose(L, A));
  for (const auto& [k, c] : out.commutator.coefficients())
    if (k >= n || k <= 0) throw std::logic_error("q-Lax commutator leaves the q-oper shape");
  for (int i = 1; i <= n - 1; ++i) out.rhs.push_back(out.commutator.coeff(n - i));
  return out;
}

// ---- distributions ----

std::string DistAtom::to_string() const {
  if (kind == AtomKind::Power) return "x^" + std::to_string(power);
  std::string arg = "x";
  if (shift != 0) arg += "*q^" + std::to_string(2 * shift);
  return std::string(kind == AtomKind::F ? "f" : "delta") + "(" + arg + ")";
}

ParamRational f_coefficient(int n) { return (q_power(n) - q_power(-n)) / (q_power(n) + q_power(-n)); }

DistributionExpr DistributionExpr::atom(AtomKind kind, Point num, Point den, int shift, const SymbolPoly& coeff, int power) {
  if (num == den) throw std::invalid_argument("distribution argument must be a ratio of z and w");
  DistAtom a{kind, shift, 0};
  ParamRational factor = kOne;
  if (kind == AtomKind::Power) {
    // (num/den q^(2 shift))^p
    a.shift = 0;
    a.power = num == Point::w ? power : -power;
    factor = q_power(2 * shift * power);
  } else if (num == Point::z) {
    // g((w/z q^(-2 shift))^-1): delta is even, f is odd.
    a.shift = -shift;
    if (kind == AtomKind::F) factor = ParamRational(-1);
  }
  DistributionExpr e;
  for (const auto& [m, c] : coeff.terms()) e.add(m, a, c * factor);
  return e;
}

void DistributionExpr::add(const SymbolMonomial& m, const DistAtom& a, const ParamRational& c) {
  if (c.is_zero()) return;
  Group& g = groups_[m];
  auto [it, inserted] = g.try_emplace(a, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) g.erase(it);
  }
  if (g.empty()) groups_.erase(m);
}

DistributionExpr& DistributionExpr::operator+=(const DistributionExpr& o) {
  for (const auto& [m, g] : o.groups_)
    for (const auto& [a, c] : g) add(m, a, c);
  return *this;
}

DistributionExpr DistributionExpr::operator-() const {
  DistributionExpr r = *this;
  for (auto& [m, g] : r.groups_)
    for (auto& [a, c] : g) c = -c;
  return r;
}

DistributionExpr DistributionExpr::times(const SymbolPoly& p) const {
  DistributionExpr r;
  for (const auto& [m, g] : groups_)
    for (const auto& [pm, pc] : p.terms())
      for (const auto& [a, c] : g) r.add(m * pm, a, c * pc);
  return r;
}

std::string DistributionExpr::to_string(const SymbolStyle& style) const {
  if (groups_.empty()) return "0";
  std::string s;
  for (const auto& [m, g] : groups_) {
    std::string inner;
    for (const auto& [a, c] : g) {
      if (!inner.empty()) inner += " + ";
      inner += "(" + c.to_string() + ")*" + a.to_string();
    }
    if (!s.empty()) s += " + ";
    s += "[" + inner + "]*" + m.to_string(style);
  }
  return s;
}

DistributionExpr dist_canonical(const DistributionExpr& e) {
  DistributionExpr out;
  for (const auto& [m, g] : e.groups()) {
    std::map<int, ParamRational> P;  // sum_k a_k y^k for the f atoms, y = q^(2n)
    for (const auto& [a, c] : g) {
      switch (a.kind) {
        case AtomKind::F:
          P[a.shift] = P[a.shift] + c;
          break;
        case AtomKind::Delta:
          // Support z = w q^(2 shift).
          out.add(m.moved(Point::z, Point::w, a.shift), a, c);
          break;
        case AtomKind::Power:
          out.add(m, a, c);
          break;
      }
    }
    for (auto it = P.begin(); it != P.end();)
      it = it->second.is_zero() ? P.erase(it) : std::next(it);
    if (P.empty()) continue;
    // f coefficients are (y - 1)/(y + 1); write P = (y + 1) P1 + P(-1).
    ParamRational rem;
    for (const auto& [k, c] : P) rem = rem + (k % 2 == 0 ? c : -c);
    P[0] = P[0] - rem;
    for (auto it = P.begin(); it != P.end();)
      it = it->second.is_zero() ? P.erase(it) : std::next(it);
    out.add(m, DistAtom{AtomKind::F, 0, 0}, rem);
    if (P.empty()) continue;
    const int kmin = P.begin()->first, kmax = P.rbegin()->first;
    // Synthetic division of sum_i p_i y^i (i = 0..d) by y + 1.
    const int d = kmax - kmin;
    std::vector<ParamRational> p(d + 1), b(std::max(d, 1));
    for (const auto& [k, c] : P) p[k - kmin] = c;
    b[d - 1] = p[d];
    for (int i = d - 1; i >= 1; --i) b[i - 1] = p[i] - b[i];
    if (!(p[0] - b[0]).is_zero()) throw std::logic_error("f-shift remainder did not vanish");
    // (y - 1) P1 with P1 = y^kmin sum_i b_i y^i.
    std::map<int, ParamRational> delta;
    for (int i = 0; i < d; ++i) {
      delta[kmin + i + 1] = delta[kmin + i + 1] + b[i];
      delta[kmin + i] = delta[kmin + i] - b[i];
    }
    for (const auto& [k, c] : delta)
      if (!c.is_zero()) out.add(m.moved(Point::z, Point::w, k), DistAtom{AtomKind::Delta, k, 0}, c);
  }
  return out;
}

std::map<int, ParamRational> coefficient_sequence(const DistributionExpr::Group& g, int window) {
  std::map<int, ParamRational> out;
  for (int n = -window; n <= window; ++n) {
    ParamRational c;
    for (const auto& [a, x] : g) {
      switch (a.kind) {
        case AtomKind::F:
          c = c + x * f_coefficient(n) * q_power(2 * a.shift * n);
          break;
        case AtomKind::Delta:
          c = c + x * q_power(2 * a.shift * n);
          break;
        case AtomKind::Power:
          if (a.power == n) c = c + x;
          break;
      }
    }
    out[n] = c;
  }
  return out;
}

std::vector<std::pair<SymbolMonomial, int>> NormalizedDistribution::nonzero() const {
  std::vector<std::pair<SymbolMonomial, int>> bad;
  for (const auto& row : table)
    for (const auto& [n, c] : row.coefficients)
      if (!c.is_zero()) bad.emplace_back(row.monomial, n);
  return bad;
}

NormalizedDistribution dist_normalize(const DistributionExpr& e, int window) {
  NormalizedDistribution out;
  out.normal = dist_canonical(e);
  for (const auto& [m, g] : out.normal.groups()) out.table.push_back({m, coefficient_sequence(g, window)});
  return out;
}

DistributionExpr lambda_bracket(const SymbolPoly& a, Point pa, const SymbolPoly& b, Point pb) {
  DistributionExpr out;
  const ParamRational pre = q_minus_inverse();
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      const SymbolMonomial prod = ma * mb;
      for (const auto& [sa, ea] : ma.powers()) {
        if (sa.kind != SymbolKind::Lambda) continue;
        if (sa.point != pa || sa.index != 1) throw std::invalid_argument("bracket symbols must be Lambda at the stated point");
        for (const auto& [sb, eb] : mb.powers()) {
          if (sb.kind != SymbolKind::Lambda) continue;
          if (sb.point != pb || sb.index != 1) throw std::invalid_argument("bracket symbols must be Lambda at the stated point");
          ParamRational c = ca * cb * pre * ParamRational(ea * eb);
          out += DistributionExpr::atom(AtomKind::F, pb, pa, sb.shift - sa.shift, SymbolPoly::monomial(prod, c));
        }
      }
    }
  return out;
}

TBracketReport verify_t_bracket(int window) {
  auto t_at = [](Point p) { return SymbolPoly::lambda(1, 0, 1, p) + SymbolPoly::lambda(1, 1, -1, p); };
  const SymbolPoly tz = t_at(Point::z), tw = t_at(Point::w);
  DistributionExpr lhs = lambda_bracket(tz, Point::z, tw, Point::w);
  const SymbolPoly pre(q_minus_inverse());
  DistributionExpr rhs = DistributionExpr::atom(AtomKind::F, Point::w, Point::z, 0, pre * tz * tw);
  rhs += DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, -1, pre);
  rhs += -DistributionExpr::atom(AtomKind::Delta, Point::w, Point::z, 1, pre);
  TBracketReport r;
  r.window = window;
  r.lhs = dist_normalize(lhs, window);
  r.residual = dist_normalize(lhs - rhs, window);
  return r;
}

// ---- classical limit ----

TruncatedSeries<JetPolynomial> classical_limit(int order) {
  if (order < 3) throw std::invalid_argument("classical limit needs order at least 3");
  using S = TruncatedSeries<JetPolynomial>;
  const JetPolynomial z = JetPolynomial::z_power(1);
  const JetPolynomial phi = z * JetPolynomial::var(1);
  // phi(z e^(2h)) = sum_k (2h)^k/k! (z d/dz)^k phi
  S shifted('h', order);
  JetPolynomial theta_k = phi;
  Rational scale(1);
  for (int k = 0; k < order; ++k) {
    if (k > 0) {
      theta_k = z * theta_k.total_derivative();
      scale *= Rational(2) / Rational(k);
    }
    shifted.set(k, theta_k * ParamRational(scale));
  }
  S h = S::monomial('h', order, 1, JetPolynomial(Rational(2)));
  S first = (h * S::constant('h', order, phi)).exp();
  S second = (-(h * shifted)).exp();
  return first + second;
}

// ---- Baxter ----

BaxterResult baxter_substitute(const ParamRational& Q) {
  if (Q.is_zero()) throw std::invalid_argument("Baxter polynomial must be nonzero");
  const ParamRational z = ParamRational::variable(Var::z);
  auto at = [&](int k) { return Q.substitute(Var::z, z * q_power(2 * k)); };
  BaxterResult r;
  r.t = at(1) / Q + at(-1) / Q;
  r.lambda = at(-1) / Q;
  ParamRational via_miura = r.lambda + r.lambda.substitute(Var::z, z * q_power(2)).inverse();
  if (!(via_miura == r.t)) throw std::logic_error("Baxter form disagrees with the q-Miura form");
  return r;
}

// ---- deformed structure function ----

namespace {

PochhammerArg specialize(PochhammerArg a, const std::optional<ParamRational>& t_value) {
  if (!t_value || a.t_exp == 0) return a;
  if (t_value->is_constant()) {
    Rational v = t_value->constant_value();
    Rational p(1);
    for (int i = 0; i < std::abs(a.t_exp); ++i) p *= v;
    a.coeff *= a.t_exp > 0 ? p : Rational(1) / p;
    a.t_exp = 0;
    return a;
  }
  for (int k = -8; k <= 8; ++k)
    if (*t_value == q_power(k)) {
      a.q_exp += k * a.t_exp;
      a.t_exp = 0;
      return a;
    }
  throw std::invalid_argument("t may only be specialized to a rational number or a power of q");
}

}  // namespace

TruncatedSeries<ParamRational> deformed_structure_function(int order, std::optional<ParamRational> t_value) {
  if (order < 1) throw std::invalid_argument("order must be at least 1");
  using S = TruncatedSeries<ParamRational>;
  const PochhammerArg base = specialize({Rational(1), 0, 4, 4}, t_value);
  auto poch = [&](PochhammerArg a) { return q_pochhammer_series(specialize(a, t_value), base, order); };
  S num = poch({Rational(1), 1, 2, 0}) * poch({Rational(1), 1, 0, 2});
  S den = poch({Rational(1), 1, 4, 2}) * poch({Rational(1), 1, 2, 4});
  S one_minus_z = S::constant('z', order, kOne);
  one_minus_z.add(1, ParamRational(-1));
  return (num * (one_minus_z * den).inverse()).truncate(order);
}

namespace {

using D = Dual<ParamRational>;

// q^qe t^te at t = 1 + eps.
D dual_monomial(int qe, int te) { return D(q_power(qe), q_power(qe) * ParamRational(te)); }

// (a z; b)_inf by the Euler sum with a, b at t = 1 + eps.
TruncatedSeries<D> dual_pochhammer(const D& a, const D& b, int order) {
  TruncatedSeries<D> out = TruncatedSeries<D>::constant('z', order, D(Rational(1)));
  D term(Rational(1));
  D bpow(Rational(1));  // b^(k-1)
  for (int k = 1; k < order; ++k) {
    D bk = bpow * b;
    term = term * (-(a * bpow)) / (D(Rational(1)) - bk);
    out.add(k, term);
    bpow = bk;
  }
  return out;
}

}  // namespace

std::vector<ParamRational> structure_function_t_derivative(int order) {
  if (order < 1) throw std::invalid_argument("order must be at least 1");
  using S = TruncatedSeries<D>;
  const D b = dual_monomial(4, 4);
  S num = dual_pochhammer(dual_monomial(2, 0), b, order) * dual_pochhammer(dual_monomial(0, 2), b, order);
  S den = dual_pochhammer(dual_monomial(4, 2), b, order) * dual_pochhammer(dual_monomial(2, 4), b, order);
  S one_minus_z = S::constant('z', order, D(Rational(1)));
  one_minus_z.add(1, D(Rational(-1)));
  S f = (num * (one_minus_z * den).inverse()).truncate(order);
  std::vector<ParamRational> g;
  for (int k = 0; k < order; ++k) {
    const D c = f.coeff(k);
    if (!(c.a == (k == 0 ? kOne : ParamRational()))) throw std::logic_error("structure function is not 1 at t = 1");
    g.push_back(c.b);
  }
  return g;
}

ParamRational deformed_relation_prefactor() {
  const ParamRational t = ParamRational::variable(Var::t);
  return q_minus_inverse() * (t - t.inverse());
}

std::string deformed_relation_template() {
  return "f(w/z) T(z) T(w) - f(z/w) T(w) T(z) = (" + deformed_relation_prefactor().to_string() +
         ") * (delta(w/(z*q^2*t^2)) - delta(w*q^2*t^2/z))";
}

}  // namespace opera
