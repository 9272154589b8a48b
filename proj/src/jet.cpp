#include "opera/jet.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace opera {

// ---- JetMonomial ----

JetMonomial JetMonomial::of(JetVar v, int e) {
  if (v.field < 1 || v.order < 0) throw std::invalid_argument("jet variable index out of range");
  JetMonomial m;
  if (e != 0) m.factors_.push_back({v, e});
  return m;
}

JetMonomial JetMonomial::z_power(int k) {
  JetMonomial m;
  m.z_ = k;
  return m;
}

int JetMonomial::degree() const {
  int d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

int JetMonomial::exponent(JetVar v) const {
  for (const auto& [w, e] : factors_)
    if (w == v) return e;
  return 0;
}

JetMonomial JetMonomial::operator*(const JetMonomial& o) const {
  JetMonomial r;
  r.z_ = z_ + o.z_;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  std::size_t i = 0, j = 0;
  while (i < factors_.size() || j < o.factors_.size()) {
    if (j >= o.factors_.size() || (i < factors_.size() && factors_[i].first < o.factors_[j].first)) {
      r.factors_.push_back(factors_[i++]);
    } else if (i >= factors_.size() || o.factors_[j].first < factors_[i].first) {
      r.factors_.push_back(o.factors_[j++]);
    } else {
      r.factors_.push_back({factors_[i].first, factors_[i].second + o.factors_[j].second});
      ++i;
      ++j;
    }
  }
  return r;
}

JetMonomial JetMonomial::divided_by(JetVar v) const {
  JetMonomial r = *this;
  for (auto it = r.factors_.begin(); it != r.factors_.end(); ++it) {
    if (it->first == v) {
      if (--it->second == 0) r.factors_.erase(it);
      return r;
    }
  }
  throw std::logic_error("jet monomial does not contain the variable");
}

std::strong_ordering JetMonomial::operator<=>(const JetMonomial& o) const {
  if (auto c = degree() <=> o.degree(); c != 0) return c;
  if (auto c = factors_ <=> o.factors_; c != 0) return c;
  return z_ <=> o.z_;
}

// ---- JetPolynomial ----

JetPolynomial::JetPolynomial(const ParamRational& c) {
  if (!c.is_zero()) terms_.emplace(JetMonomial(), c);
}

JetPolynomial JetPolynomial::var(int field, int order) {
  return monomial(JetMonomial::of({field, order}), ParamRational(1));
}

JetPolynomial JetPolynomial::z_power(int k) { return monomial(JetMonomial::z_power(k), ParamRational(1)); }

JetPolynomial JetPolynomial::monomial(const JetMonomial& m, const ParamRational& c) {
  JetPolynomial p;
  p.add_term(m, c);
  return p;
}

void JetPolynomial::add_term(const JetMonomial& m, const ParamRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool JetPolynomial::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

ParamRational JetPolynomial::constant_value() const { return coefficient(JetMonomial()); }

ParamRational JetPolynomial::coefficient(const JetMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? ParamRational() : it->second;
}

std::set<int> JetPolynomial::fields() const {
  std::set<int> s;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.factors()) s.insert(v.field);
  return s;
}

int JetPolynomial::max_order(int field) const {
  int k = -1;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.factors())
      if (v.field == field) k = std::max(k, v.order);
  return k;
}

bool JetPolynomial::has_z() const {
  for (const auto& [m, c] : terms_)
    if (m.z() != 0) return true;
  return false;
}

int JetPolynomial::degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

bool JetPolynomial::is_homogeneous_linear() const {
  for (const auto& [m, c] : terms_)
    if (m.degree() != 1) return false;
  return true;
}

JetPolynomial JetPolynomial::operator-() const {
  JetPolynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

JetPolynomial& JetPolynomial::operator+=(const JetPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

JetPolynomial& JetPolynomial::operator-=(const JetPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b) {
  JetPolynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

JetPolynomial operator*(const JetPolynomial& a, const ParamRational& c) {
  if (c.is_zero()) return {};
  JetPolynomial r = a;
  for (auto& [m, x] : r.terms_) x *= c;
  return r;
}

JetPolynomial JetPolynomial::pow(unsigned k) const {
  JetPolynomial r(Rational(1)), b = *this;
  while (k > 0) {
    if (k & 1u) r *= b;
    k >>= 1u;
    if (k > 0) b *= b;
  }
  return r;
}

JetPolynomial JetPolynomial::total_derivative() const {
  JetPolynomial r;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m.factors()) {
      JetMonomial rest = m.divided_by(v) * JetMonomial::of({v.field, v.order + 1});
      r.add_term(rest, c * ParamRational(e));
    }
    if (m.z() != 0) r.add_term(m.with_z(m.z() - 1), c * ParamRational(m.z()));
  }
  return r;
}

JetPolynomial JetPolynomial::total_derivative(int times) const {
  JetPolynomial r = *this;
  for (int i = 0; i < times; ++i) r = r.total_derivative();
  return r;
}

JetPolynomial JetPolynomial::partial(JetVar v) const {
  JetPolynomial r;
  for (const auto& [m, c] : terms_) {
    int e = m.exponent(v);
    if (e != 0) r.add_term(m.divided_by(v), c * ParamRational(e));
  }
  return r;
}

JetPolynomial JetPolynomial::partial_z() const {
  JetPolynomial r;
  for (const auto& [m, c] : terms_)
    if (m.z() != 0) r.add_term(m.with_z(m.z() - 1), c * ParamRational(m.z()));
  return r;
}

JetPolynomial JetPolynomial::euler(int field) const {
  JetPolynomial r;
  const int kmax = max_order(field);
  for (int k = 0; k <= kmax; ++k) {
    JetPolynomial d = partial({field, k}).total_derivative(k);
    if (k % 2 == 0)
      r += d;
    else
      r -= d;
  }
  return r;
}

DiffOp JetPolynomial::frechet(int field) const {
  DiffOp op;
  const int kmax = max_order(field);
  for (int k = 0; k <= kmax; ++k) op.add(k, partial({field, k}));
  return op;
}

JetPolynomial JetPolynomial::substitute(const std::map<int, JetPolynomial>& assignment) const {
  std::map<JetVar, JetPolynomial> cache;
  auto value = [&](JetVar v) -> const JetPolynomial& {
    auto it = cache.find(v);
    if (it != cache.end()) return it->second;
    auto a = assignment.find(v.field);
    if (a == assignment.end())
      throw std::invalid_argument("substitution is missing an assignment for field " + std::to_string(v.field));
    int k = v.order;
    while (k > 0 && !cache.count({v.field, k})) --k;
    auto base = cache.find({v.field, k});
    JetPolynomial d = base == cache.end() ? a->second : base->second;
    if (base == cache.end()) cache.emplace(JetVar{v.field, 0}, d);
    for (++k; k <= v.order; ++k) {
      d = d.total_derivative();
      cache.emplace(JetVar{v.field, k}, d);
    }
    return cache.at(v);
  };
  JetPolynomial r;
  for (const auto& [m, c] : terms_) {
    JetPolynomial t = JetPolynomial::monomial(JetMonomial::z_power(m.z()), c);
    for (const auto& [v, e] : m.factors()) t *= value(v).pow(static_cast<unsigned>(e));
    r += t;
  }
  return r;
}

JetPolynomial invert_coefficient(const JetPolynomial& c) {
  if (!c.is_constant() || c.is_zero()) throw std::domain_error("cannot invert a non-constant jet polynomial");
  return JetPolynomial(c.constant_value().inverse());
}

// ---- printing ----

namespace {

std::string var_text(JetVar v, const FieldNames& n) {
  std::string base = n.letter;
  if (n.indexed) base += std::to_string(v.field);
  if (n.primes && v.order <= 3) return base + std::string(static_cast<std::size_t>(v.order), '\'');
  if (n.primes) return base + "_" + std::to_string(v.order);
  return base + "_" + std::to_string(v.order);
}

std::string var_latex(JetVar v, const FieldNames& n) {
  std::string base = n.letter;
  if (n.indexed) base += "_{" + std::to_string(v.field) + "}";
  if (v.order == 0) return base;
  if (v.order <= 3) return base + std::string(static_cast<std::size_t>(v.order), '\'');
  return base + "^{(" + std::to_string(v.order) + ")}";
}

std::string monomial_text(const JetMonomial& m, const FieldNames& n) {
  std::string s;
  for (const auto& [v, e] : m.factors()) {
    if (!s.empty()) s += "*";
    s += var_text(v, n);
    if (e != 1) s += "^" + std::to_string(e);
  }
  if (m.z() != 0) {
    if (!s.empty()) s += "*";
    s += "z";
    if (m.z() != 1) s += "^" + std::to_string(m.z());
  }
  return s;
}

std::string monomial_latex(const JetMonomial& m, const FieldNames& n) {
  std::string s;
  for (const auto& [v, e] : m.factors()) {
    std::string b = var_latex(v, n);
    if (e != 1) {
      if (v.order > 0) b = "(" + b + ")";
      b += "^{" + std::to_string(e) + "}";
    }
    s += (s.empty() ? "" : " ") + b;
  }
  if (m.z() != 0) {
    s += (s.empty() ? "" : " ") + std::string("z");
    if (m.z() != 1) s += "^{" + std::to_string(m.z()) + "}";
  }
  return s;
}

// Splits a coefficient into sign and magnitude text; returns (negative, text,
// is_unit).
struct CoeffText {
  bool negative;
  std::string text;
  bool unit;
};

CoeffText coeff_text(const ParamRational& c, bool latex) {
  if (c.is_constant()) {
    Rational r = c.constant_value();
    bool neg = r < 0;
    if (neg) r = -r;
    std::string t;
    if (latex && r.get_den() != 1)
      t = "\\frac{" + r.get_num().get_str() + "}{" + r.get_den().get_str() + "}";
    else
      t = r.get_str();
    return {neg, t, r == 1};
  }
  if (latex) return {false, "\\left(" + c.to_latex() + "\\right)", false};
  return {false, "(" + c.to_string() + ")", false};
}

template <class Terms, class MonoFn>
std::string render_sum(const Terms& terms, MonoFn mono, bool latex, const char* mul) {
  if (terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [m, c] = *it;
    CoeffText ct = coeff_text(c, latex);
    std::string ms = mono(m);
    s += first ? (ct.negative ? "-" : "") : (ct.negative ? " - " : " + ");
    first = false;
    if (ms.empty()) {
      s += ct.text;
    } else if (ct.unit) {
      s += ms;
    } else {
      s += ct.text + mul + ms;
    }
  }
  return s;
}

}  // namespace

std::string JetPolynomial::to_string(const FieldNames& names) const {
  return render_sum(terms_, [&](const JetMonomial& m) { return monomial_text(m, names); }, false, "*");
}

std::string JetPolynomial::to_latex(const FieldNames& names) const {
  return render_sum(terms_, [&](const JetMonomial& m) { return monomial_latex(m, names); }, true, " ");
}

// ---- DiffOp ----

DiffOp DiffOp::term(int order, const JetPolynomial& a) {
  DiffOp d;
  d.add(order, a);
  return d;
}

void DiffOp::add(int order, const JetPolynomial& a) {
  if (order < 0) throw std::invalid_argument("differential operator with negative order");
  if (a.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(order, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

JetPolynomial DiffOp::coeff(int k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? JetPolynomial() : it->second;
}

JetPolynomial DiffOp::apply(const JetPolynomial& p) const {
  JetPolynomial r;
  JetPolynomial d = p;
  int at = 0;
  for (const auto& [k, a] : coeffs_) {
    while (at < k) {
      d = d.total_derivative();
      ++at;
    }
    r += a * d;
  }
  return r;
}

DiffOp DiffOp::adjoint() const {
  DiffOp r;
  for (const auto& [k, a] : coeffs_) {
    JetPolynomial al = a;
    for (int l = 0; l <= k; ++l) {
      Rational c = generalized_binomial(k, l);
      if (k % 2 != 0) c = -c;
      r.add(k - l, al * ParamRational(c));
      al = al.total_derivative();
    }
  }
  return r;
}

DiffOp DiffOp::operator-() const {
  DiffOp r = *this;
  for (auto& [k, a] : r.coeffs_) a = -a;
  return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  for (const auto& [k, a] : o.coeffs_) add(k, a);
  return *this;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
  DiffOp r;
  for (const auto& [i, ai] : a.coeffs_)
    for (const auto& [j, bj] : b.coeffs_) {
      JetPolynomial d = bj;
      for (int l = 0; l <= i; ++l) {
        r.add(i - l + j, ai * d * ParamRational(generalized_binomial(i, l)));
        d = d.total_derivative();
      }
    }
  return r;
}

DiffOp operator*(const DiffOp& a, const ParamRational& c) {
  DiffOp r;
  for (const auto& [k, x] : a.coeffs_) r.add(k, x * c);
  return r;
}

namespace {

std::string op_render(const DiffOp::CoeffMap& coeffs, bool latex, const FieldNames& names) {
  if (coeffs.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    const auto& [k, a] = *it;
    std::string d;
    if (k > 0) {
      d = latex ? "\\partial" : "d";
      if (k > 1) d += latex ? "^{" + std::to_string(k) + "}" : "^" + std::to_string(k);
    }
    std::string body;
    bool neg = false;
    if (a.terms().size() == 1) {
      const auto& [m, c] = *a.terms().begin();
      ParamRational cc = c;
      if (cc.is_constant() && cc.constant_value() < 0) {
        neg = true;
        cc = -cc;
      }
      body = latex ? JetPolynomial::monomial(m, cc).to_latex(names) : JetPolynomial::monomial(m, cc).to_string(names);
      if (body == "1" && !d.empty()) body.clear();
    } else {
      std::string inner = latex ? a.to_latex(names) : a.to_string(names);
      body = d.empty() ? inner : (latex ? "\\left(" + inner + "\\right)" : "(" + inner + ")");
    }
    std::string piece = body;
    if (!d.empty()) piece = body.empty() ? d : body + (latex ? " " : "*") + d;
    s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    s += piece;
  }
  return s;
}

}  // namespace

std::string DiffOp::to_string(const FieldNames& names) const { return op_render(coeffs_, false, names); }
std::string DiffOp::to_latex(const FieldNames& names) const { return op_render(coeffs_, true, names); }

// ---- parser ----

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         msg),
      msg_(msg),
      line_(line),
      column_(column) {}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  JetPolynomial parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    JetPolynomial r = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return r;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t p, const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < p && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  JetPolynomial expr() {
    JetPolynomial r = term();
    while (true) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return r;
      ++pos_;
      JetPolynomial rhs = term();
      if (c == '+')
        r += rhs;
      else
        r -= rhs;
    }
  }

  JetPolynomial term() {
    JetPolynomial r = unary();
    while (true) {
      skip_ws();
      char c = peek();
      if (c != '*' && c != '/') return r;
      std::size_t op_pos = pos_;
      ++pos_;
      JetPolynomial rhs = unary();
      if (c == '*') {
        r *= rhs;
      } else {
        if (!rhs.is_constant()) fail_at(op_pos, "division is only allowed by expressions in q, t, h and numbers");
        if (rhs.is_zero()) fail_at(op_pos, "division by zero");
        r = r * rhs.constant_value().inverse();
      }
    }
  }

  JetPolynomial unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -unary();
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  long integer_literal() {
    skip_ws();
    bool neg = false;
    if (peek() == '-' || peek() == '+') {
      neg = peek() == '-';
      ++pos_;
      skip_ws();
    }
    if (peek() == '(') {
      ++pos_;
      long v = integer_literal();
      skip_ws();
      if (peek() != ')') fail("expected ')' after exponent");
      ++pos_;
      return neg ? -v : v;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer exponent");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 100000) fail("exponent too large");
      ++pos_;
    }
    return neg ? -v : v;
  }

  JetPolynomial power() {
    std::size_t base_pos = pos_;
    JetPolynomial b = primary();
    skip_ws();
    if (peek() != '^') return b;
    ++pos_;
    long e = integer_literal();
    if (e >= 0) return b.pow(static_cast<unsigned>(e));
    if (b.is_constant()) {
      if (b.is_zero()) fail_at(base_pos, "negative power of zero");
      return JetPolynomial(b.constant_value().pow(e));
    }
    if (b.terms().size() == 1) {
      const auto& [m, c] = *b.terms().begin();
      if (m.factors().empty()) return JetPolynomial::monomial(JetMonomial::z_power(static_cast<int>(m.z() * e)), c.pow(e));
    }
    fail_at(base_pos, "negative exponents are only allowed on parameters and z");
  }

  JetPolynomial primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (c == '(') {
      ++pos_;
      JetPolynomial r = expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      return JetPolynomial(Rational(Integer(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      ++pos_;
      switch (c) {
        case 'q':
          return symbol_end(start, JetPolynomial(ParamRational::variable(Var::q)));
        case 't':
          return symbol_end(start, JetPolynomial(ParamRational::variable(Var::t)));
        case 'h':
          return symbol_end(start, JetPolynomial(ParamRational::variable(Var::h)));
        case 'z':
          return symbol_end(start, JetPolynomial::z_power(1));
        case 'u':
          return field(start);
        default:
          fail_at(start, std::string("unknown symbol '") + c + "'");
      }
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  JetPolynomial symbol_end(std::size_t start, JetPolynomial v) {
    if (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
      fail_at(start, "unknown identifier (use '*' between factors)");
    return v;
  }

  int digits(const char* what) {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(std::string("expected ") + what);
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 1000) fail(std::string(what) + " too large");
      ++pos_;
    }
    return static_cast<int>(v);
  }

  JetPolynomial field(std::size_t start) {
    int idx = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      idx = digits("field index");
      if (idx < 1) fail_at(start, "field index must be at least 1");
    }
    int order = 0;
    if (peek() == '_') {
      ++pos_;
      order = digits("derivative order after '_'");
      if (peek() == '\'') fail("cannot combine '_' and primes");
    } else {
      while (peek() == '\'') {
        ++order;
        ++pos_;
      }
    }
    return symbol_end(start, JetPolynomial::var(idx, order));
  }
};

}  // namespace

JetPolynomial parse_jet(const std::string& text) { return Parser(text).parse(); }

}  // namespace opera
