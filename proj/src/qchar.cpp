#include "opera/qchar.hpp"

#include <sstream>
#include <stdexcept>

namespace opera {

namespace {

std::string point_name(int k, bool latex) {
  if (k == 0) return "a";
  std::string e = k == 1 ? "" : (latex ? "^{" + std::to_string(k) + "}" : "^" + std::to_string(k));
  return "aq" + e;
}

std::string coeff_prefix(const mpz_class& c, bool first, bool unit_term) {
  std::string s;
  mpz_class a = abs(c);
  if (c < 0)
    s = first ? "-" : " - ";
  else if (!first)
    s = " + ";
  if (a != 1 || unit_term) s += a.get_str();
  return s;
}

}  // namespace

YMonomial YMonomial::of(int i, int k, int e) {
  YMonomial m;
  if (e != 0) m.p_[{i, k}] = e;
  return m;
}

YMonomial YMonomial::operator*(const YMonomial& o) const {
  YMonomial r = *this;
  for (const auto& [v, e] : o.p_) {
    int x = (r.p_[v] += e);
    if (x == 0) r.p_.erase(v);
  }
  return r;
}

YMonomial YMonomial::inverse() const {
  YMonomial r = *this;
  for (auto& [v, e] : r.p_) e = -e;
  return r;
}

YMonomial YMonomial::shifted(int k) const {
  YMonomial r;
  for (const auto& [v, e] : p_) r.p_[{v.first, v.second + k}] = e;
  return r;
}

std::string YMonomial::to_string(bool latex) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : p_) {
    if (!first) os << (latex ? " " : "*");
    first = false;
    os << "Y_{" << v.first << "," << point_name(v.second, latex) << "}";
    if (e != 1) os << (latex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e));
  }
  return os.str();
}

YPolynomial::YPolynomial(long c) {
  if (c != 0) terms_[YMonomial()] = c;
}

YPolynomial YPolynomial::monomial(const YMonomial& m, const mpz_class& c) {
  YPolynomial r;
  r.add(m, c);
  return r;
}

void YPolynomial::add(const YMonomial& m, const mpz_class& c) {
  if (c == 0) return;
  mpz_class& x = terms_[m];
  x += c;
  if (x == 0) terms_.erase(m);
}

YPolynomial& YPolynomial::operator+=(const YPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

YPolynomial operator*(const YPolynomial& a, const YPolynomial& b) {
  YPolynomial r;
  for (const auto& [m1, c1] : a.terms_)
    for (const auto& [m2, c2] : b.terms_) r.add(m1 * m2, c1 * c2);
  return r;
}

YPolynomial YPolynomial::pow(int e) const {
  if (e < 0) {
    if (terms_.size() != 1 || abs(terms_.begin()->second) != 1)
      throw std::invalid_argument("negative power of a non-monomial Y-polynomial");
    const auto& [m, c] = *terms_.begin();
    return monomial(m.inverse(), c).pow(-e);
  }
  YPolynomial r(1);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

YPolynomial YPolynomial::shifted(int k) const {
  YPolynomial r;
  for (const auto& [m, c] : terms_) r.add(m.shifted(k), c);
  return r;
}

std::string YPolynomial::to_string(bool latex) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    s += coeff_prefix(c, first, m.powers().empty());
    if (!m.powers().empty()) {
      if (abs(c) != 1) s += latex ? " " : "*";
      s += m.to_string(latex);
    }
    first = false;
  }
  return s;
}

void CharPolynomial::add(const std::vector<int>& exps, const mpz_class& c) {
  if (static_cast<int>(exps.size()) != rank_) throw std::invalid_argument("exponent vector has the wrong length");
  if (c == 0) return;
  mpz_class& x = terms_[exps];
  x += c;
  if (x == 0) terms_.erase(exps);
}

std::string CharPolynomial::to_string(bool latex) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [ex, c] : terms_) {
    bool unit = true;
    for (int e : ex) unit = unit && e == 0;
    s += coeff_prefix(c, first, unit);
    first = false;
    if (unit) continue;
    bool firstf = abs(c) == 1;
    for (int i = 0; i < rank_; ++i) {
      if (ex[i] == 0) continue;
      if (!firstf) s += latex ? " " : "*";
      firstf = false;
      std::string var = rank_ == 1 ? "y" : (latex ? "y_{" + std::to_string(i + 1) + "}" : "y" + std::to_string(i + 1));
      s += var;
      if (ex[i] != 1) s += latex ? "^{" + std::to_string(ex[i]) + "}" : "^" + std::to_string(ex[i]);
    }
  }
  return s;
}

YPolynomial substitute_lambda(const SymbolPoly& p, int n) {
  if (n < 2) throw std::invalid_argument("substitute_lambda needs n >= 2");
  auto image = [n](const ShiftedSymbol& s) {
    if (s.kind != SymbolKind::Lambda || s.point != Point::z)
      throw std::invalid_argument("substitute_lambda accepts Lambda_i(z q^2k) symbols only");
    if (s.index < 1 || s.index > n) throw std::out_of_range("Lambda index outside 1..n");
    const int i = s.index, base = 2 * s.shift;
    YMonomial m;
    if (i < n) m = m * YMonomial::of(i, base - i + 1);
    if (i > 1) m = m * YMonomial::of(i - 1, base - i + 2, -1);
    return m;
  };
  YPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    if (!c.is_constant() || c.constant_value().get_den() != 1)
      throw std::invalid_argument("q-character coefficients must be integers");
    YMonomial y;
    for (const auto& [s, e] : m.powers()) {
      YMonomial im = image(s);
      for (int k = 0; k < std::abs(e); ++k) y = y * (e > 0 ? im : im.inverse());
    }
    out += YPolynomial::monomial(y, c.constant_value().get_num());
  }
  return out;
}

CharPolynomial forgetful(const YPolynomial& p, int n) {
  CharPolynomial r(n - 1);
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> ex(n - 1, 0);
    for (const auto& [v, e] : m.powers()) {
      if (v.first < 1 || v.first > n - 1) throw std::out_of_range("Y index outside 1..n-1");
      ex[v.first - 1] += e;
    }
    r.add(ex, c);
  }
  return r;
}

YPolynomial qchar_eval_sl2(int k) { return (YPolynomial::y(1, 0) + YPolynomial::y(1, 2, -1)).shifted(k); }

YPolynomial qchar_fundamental(int n) { return substitute_lambda(q_miura_expand(n).t.at(0), n); }

}  // namespace opera
