// Multivariate polynomial gcd over Z and Q.
//
// The main route is the heuristic gcd (evaluate one variable at a large
// integer, recurse, reconstruct by balanced base-x digits, verify by trial
// division). If every evaluation point fails, a recursive primitive
// pseudo-remainder sequence is used instead.

#include <cmath>
#include <optional>
#include <vector>

#include "opera/sparse_poly.hpp"

namespace opera {
namespace {

Integer integer_content(const ZPoly& p) {
  Integer g(0);
  for (const auto& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Integer max_norm(const ZPoly& p) {
  Integer m(0);
  for (const auto& t : p.terms()) {
    Integer a = abs(t.coeff);
    if (a > m) m = a;
  }
  return m;
}

ZPoly divide_scalar(const ZPoly& p, const Integer& c) {
  std::vector<ZPoly::Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Integer q;
    mpz_divexact(q.get_mpz_t(), t.coeff.get_mpz_t(), c.get_mpz_t());
    out.push_back({t.exp, q});
  }
  return ZPoly::from_terms(std::move(out));
}

ZPoly primitive_signed(const ZPoly& p) {
  if (p.is_zero()) return p;
  Integer c = integer_content(p);
  if (p.leading_coeff() < 0) c = -c;
  return c == 1 ? p : divide_scalar(p, c);
}

Exponents exp_min(const Exponents& a, const Exponents& b) {
  Exponents m{};
  for (std::size_t i = 0; i < kNumVars; ++i) m[i] = std::min(a[i], b[i]);
  return m;
}

// Balanced residue in (-x/2, x/2].
Integer symmetric_mod(const Integer& a, const Integer& x) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), x.get_mpz_t());
  if (2 * r > x) r -= x;
  return r;
}

ZPoly interpolate(ZPoly h, Var v, const Integer& x) {
  std::vector<ZPoly::Term> out;
  std::int32_t k = 0;
  while (!h.is_zero()) {
    std::vector<ZPoly::Term> digit;
    std::vector<ZPoly::Term> rest;
    for (const auto& t : h.terms()) {
      Integer d = symmetric_mod(t.coeff, x);
      if (d != 0) {
        Exponents e = t.exp;
        e[static_cast<std::size_t>(v)] = k;
        out.push_back({e, d});
      }
      Integer r = t.coeff - d;
      if (r != 0) {
        Integer q;
        mpz_divexact(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t());
        rest.push_back({t.exp, q});
      }
    }
    h = ZPoly::from_terms(std::move(rest));
    ++k;
  }
  return ZPoly::from_terms(std::move(out));
}

std::vector<Var> vars_present(const ZPoly& f, const ZPoly& g) {
  std::vector<Var> vs;
  for (std::size_t i = 0; i < kNumVars; ++i) {
    Var v = static_cast<Var>(i);
    if (f.contains(v) || g.contains(v)) vs.push_back(v);
  }
  return vs;
}

std::optional<ZPoly> heuristic_gcd(const ZPoly& f, const ZPoly& g);

// f, g nonzero, primitive, free of monomial content, at least one nonconstant.
std::optional<ZPoly> heuristic_core(const ZPoly& f, const ZPoly& g) {
  auto vs = vars_present(f, g);
  if (vs.empty()) return ZPoly(Integer(1));
  Var v = vs.front();
  Integer fn = max_norm(f), gn = max_norm(g);
  Integer b = 2 * std::min(fn, gn) + 29;
  Integer sq = sqrt(b);
  Integer x = std::min(b, Integer(99 * sq));
  Integer lf = abs(f.leading_coeff()), lg = abs(g.leading_coeff());
  Integer alt = 2 * std::min(Integer(fn / lf), Integer(gn / lg)) + 2;
  if (alt > x) x = alt;
  for (int attempt = 0; attempt < 6; ++attempt) {
    ZPoly ff = f.evaluate(v, x);
    ZPoly gg = g.evaluate(v, x);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto hh = heuristic_gcd(ff, gg);
      if (hh) {
        ZPoly h = primitive_signed(interpolate(*hh, v, x));
        if (!h.is_zero() && ZPoly::divide_exact(f, h) && ZPoly::divide_exact(g, h)) return h;
      }
    }
    Integer s = sqrt(sqrt(x));
    x = 73794 * x * s / 27011;
  }
  return std::nullopt;
}

// Full gcd of nonzero integer polynomials with contents.
std::optional<ZPoly> heuristic_gcd(const ZPoly& f0, const ZPoly& g0) {
  Exponents mf = f0.min_exponents(), mg = g0.min_exponents();
  Exponents m = exp_min(mf, mg);
  ZPoly f = f0.shifted(Exponents{} - mf);
  ZPoly g = g0.shifted(Exponents{} - mg);
  Integer cf = integer_content(f), cg = integer_content(g);
  Integer c;
  mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  f = divide_scalar(f, cf);
  g = divide_scalar(g, cg);
  ZPoly core(Integer(1));
  if (!f.is_constant() && !g.is_constant()) {
    auto h = heuristic_core(f, g);
    if (!h) return std::nullopt;
    core = *h;
  }
  return core.shifted(m) * c;
}

// ---- fallback: recursive primitive PRS ----

ZPoly prs_gcd(const ZPoly& f, const ZPoly& g, std::vector<Var> vs);

std::int32_t deg(const ZPoly& p, Var v) { return p.is_zero() ? -1 : p.degree(v); }

ZPoly leading_in(const ZPoly& p, Var v) { return p.coefficient(v, p.degree(v)); }

ZPoly content_in(const ZPoly& p, Var v, const std::vector<Var>& rest) {
  ZPoly c;
  for (std::int32_t k = 0; k <= p.degree(v); ++k) {
    ZPoly ck = p.coefficient(v, k);
    if (ck.is_zero()) continue;
    c = c.is_zero() ? (ck.leading_coeff() < 0 ? -ck : ck) : prs_gcd(c, ck, rest);
    if (c.is_constant()) break;
  }
  return c;
}

ZPoly pseudo_remainder(ZPoly a, const ZPoly& b, Var v) {
  const std::int32_t db = b.degree(v);
  const ZPoly lb = leading_in(b, v);
  while (!a.is_zero() && deg(a, v) >= db) {
    std::int32_t da = a.degree(v);
    ZPoly la = leading_in(a, v);
    a = a * lb - (la * b).shifted(unit_exponent(v, da - db));
  }
  return a;
}

ZPoly prs_gcd(const ZPoly& f, const ZPoly& g, std::vector<Var> vs) {
  if (f.is_zero()) return g.leading_coeff() < 0 ? -g : g;
  if (g.is_zero()) return f.leading_coeff() < 0 ? -f : f;
  while (!vs.empty() && !f.contains(vs.back()) && !g.contains(vs.back())) vs.pop_back();
  if (vs.empty()) {
    Integer c;
    mpz_gcd(c.get_mpz_t(), f.constant_value().get_mpz_t(), g.constant_value().get_mpz_t());
    return ZPoly(c);
  }
  Var v = vs.back();
  std::vector<Var> rest(vs.begin(), vs.end() - 1);
  ZPoly cf = content_in(f, v, rest), cg = content_in(g, v, rest);
  ZPoly c = prs_gcd(cf, cg, rest);
  ZPoly a = *ZPoly::divide_exact(f, cf);
  ZPoly b = *ZPoly::divide_exact(g, cg);
  if (deg(a, v) < deg(b, v)) std::swap(a, b);
  ZPoly result;
  while (true) {
    if (deg(b, v) == 0) {
      result = ZPoly(Integer(1));
      break;
    }
    ZPoly r = pseudo_remainder(a, b, v);
    if (r.is_zero()) {
      result = b;
      break;
    }
    if (deg(r, v) == 0) {
      result = ZPoly(Integer(1));
      break;
    }
    a = b;
    b = *ZPoly::divide_exact(r, content_in(r, v, rest));
  }
  ZPoly pp = *ZPoly::divide_exact(result, content_in(result, v, rest));
  return primitive_signed(pp) * c;
}

}  // namespace

ZPoly poly_gcd(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero()) return (!b.is_zero() && b.leading_coeff() < 0) ? -b : b;
  if (b.is_zero()) return a.leading_coeff() < 0 ? -a : a;
  for (const auto* p : {&a, &b})
    for (std::size_t i = 0; i < kNumVars; ++i)
      if (p->min_exponents()[i] < 0) throw std::domain_error("gcd of Laurent polynomials");
  if (auto h = heuristic_gcd(a, b)) {
    ZPoly r = *h;
    if (r.leading_coeff() < 0) r = -r;
    return r;
  }
  Exponents m = exp_min(a.min_exponents(), b.min_exponents());
  ZPoly f = a.shifted(Exponents{} - a.min_exponents());
  ZPoly g = b.shifted(Exponents{} - b.min_exponents());
  ZPoly r = prs_gcd(f, g, vars_present(f, g)).shifted(m);
  if (r.leading_coeff() < 0) r = -r;
  return r;
}

std::pair<ZPoly, Rational> to_primitive_integer(const QPoly& p) {
  if (p.is_zero()) return {ZPoly{}, Rational(1)};
  Integer den_lcm(1);
  for (const auto& t : p.terms()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  std::vector<ZPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    Integer n = t.coeff.get_num() * (den_lcm / t.coeff.get_den());
    terms.push_back({t.exp, n});
  }
  ZPoly z = ZPoly::from_terms(std::move(terms));
  Integer c = integer_content(z);
  if (z.leading_coeff() < 0) c = -c;
  z = divide_scalar(z, c);
  Rational scale(c, den_lcm);
  scale.canonicalize();
  return {z, scale};
}

QPoly to_rational(const ZPoly& p) {
  std::vector<QPoly::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({t.exp, Rational(t.coeff)});
  return QPoly::from_terms(std::move(terms));
}

QPoly poly_gcd(const QPoly& a, const QPoly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero() || b.is_zero()) {
    const QPoly& p = a.is_zero() ? b : a;
    return p * Rational(1 / p.leading_coeff());
  }
  if (a.is_constant() || b.is_constant()) {
    // gcd with a nonzero constant is 1 unless monomial content is shared (it
    // cannot be: constants carry none).
    return QPoly(Rational(1));
  }
  ZPoly g = poly_gcd(to_primitive_integer(a).first, to_primitive_integer(b).first);
  QPoly r = to_rational(g);
  return r * Rational(1 / r.leading_coeff());
}

}  // namespace opera
