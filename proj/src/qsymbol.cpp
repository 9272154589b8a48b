#include <climits>
#include <stdexcept>

#include "opera/qlattice.hpp"

namespace opera {

std::string symbol_name(const ShiftedSymbol& s, const SymbolStyle& style) {
  std::string base;
  switch (s.kind) {
    case SymbolKind::Lambda:
      base = style.latex ? "\\Lambda" : "Lambda";
      if (!style.bare_lambda) base += style.latex ? "_{" + std::to_string(s.index) + "}" : "_" + std::to_string(s.index);
      break;
    case SymbolKind::Baxter:
      base = "Q";
      break;
    case SymbolKind::T:
      base = style.latex ? "t_{" + std::to_string(s.index) + "}" : "t" + std::to_string(s.index);
      break;
    case SymbolKind::Root:
      base = style.latex ? "\\rho_{" + std::to_string(s.index) + "}" : "rho" + std::to_string(s.index);
      break;
  }
  std::string arg = s.point == Point::z ? "z" : "w";
  if (s.shift != 0) {
    const std::string e = std::to_string(2 * s.shift);
    arg += style.latex ? "q^{" + e + "}" : "*q^" + e;
  }
  return base + "(" + arg + ")";
}

SymbolMonomial SymbolMonomial::of(const ShiftedSymbol& s, int e) {
  SymbolMonomial m;
  if (e != 0) m.p_[s] = e;
  return m;
}

SymbolMonomial SymbolMonomial::operator*(const SymbolMonomial& o) const {
  SymbolMonomial r = *this;
  for (const auto& [s, e] : o.p_) {
    int& x = r.p_[s];
    x += e;
    if (x == 0) r.p_.erase(s);
  }
  return r;
}

SymbolMonomial SymbolMonomial::inverse() const {
  SymbolMonomial r = *this;
  for (auto& [s, e] : r.p_) e = -e;
  return r;
}

SymbolMonomial SymbolMonomial::shifted(int k, Point p) const {
  SymbolMonomial r;
  for (const auto& [s0, e] : p_) {
    ShiftedSymbol s = s0;
    if (s.point == p) s.shift += k;
    r = r * of(s, e);
  }
  return r;
}

SymbolMonomial SymbolMonomial::moved(Point from, Point to, int k) const {
  SymbolMonomial r;
  for (const auto& [s0, e] : p_) {
    ShiftedSymbol s = s0;
    if (s.point == from) {
      s.point = to;
      s.shift += k;
    }
    r = r * of(s, e);
  }
  return r;
}

bool SymbolMonomial::only_at(Point p) const {
  for (const auto& [s, e] : p_)
    if (s.point != p) return false;
  return true;
}

std::string SymbolMonomial::to_string(const SymbolStyle& style) const {
  std::string out;
  for (const auto& [s, e] : p_) {
    if (!out.empty()) out += style.latex ? " " : "*";
    out += symbol_name(s, style);
    if (e != 1) out += style.latex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

SymbolPoly::SymbolPoly(const ParamRational& c) {
  if (!c.is_zero()) terms_[SymbolMonomial()] = c;
}

SymbolPoly SymbolPoly::symbol(const ShiftedSymbol& s, int e) { return monomial(SymbolMonomial::of(s, e), ParamRational(1)); }

SymbolPoly SymbolPoly::monomial(const SymbolMonomial& m, const ParamRational& c) {
  SymbolPoly p;
  p.add_term(m, c);
  return p;
}

bool SymbolPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

ParamRational SymbolPoly::constant_value() const { return coefficient(SymbolMonomial()); }

ParamRational SymbolPoly::coefficient(const SymbolMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? ParamRational() : it->second;
}

void SymbolPoly::add_term(const SymbolMonomial& m, const ParamRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SymbolPoly SymbolPoly::operator-() const {
  SymbolPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

SymbolPoly& SymbolPoly::operator+=(const SymbolPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SymbolPoly& SymbolPoly::operator-=(const SymbolPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b) {
  SymbolPoly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

SymbolPoly operator*(const SymbolPoly& a, const ParamRational& c) {
  SymbolPoly r;
  for (const auto& [m, x] : a.terms_) r.add_term(m, x * c);
  return r;
}

SymbolPoly SymbolPoly::pow(int k) const {
  if (k < 0) {
    if (terms_.size() != 1) throw std::invalid_argument("negative power of a non-monomial symbol polynomial");
    const auto& [m, c] = *terms_.begin();
    return monomial(m.inverse(), c.inverse()).pow(-k);
  }
  SymbolPoly r(ParamRational(1));
  SymbolPoly base = *this;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

SymbolPoly SymbolPoly::shifted(int k, Point p) const {
  if (k == 0) return *this;
  SymbolPoly r;
  for (const auto& [m, c] : terms_) r.add_term(m.shifted(k, p), c);
  return r;
}

SymbolPoly SymbolPoly::moved(Point from, Point to, int k) const {
  SymbolPoly r;
  for (const auto& [m, c] : terms_) r.add_term(m.moved(from, to, k), c);
  return r;
}

std::string SymbolPoly::to_string(const SymbolStyle& style) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string cs = style.latex ? c.to_latex() : c.to_string();
    bool negative = !cs.empty() && cs[0] == '-';
    if (negative) cs = cs.substr(1);
    if (cs.find_first_of("+-") != std::string::npos) cs = "(" + cs + ")";
    std::string body;
    if (m.is_one())
      body = cs;
    else if (cs == "1")
      body = m.to_string(style);
    else
      body = cs + (style.latex ? " " : "*") + m.to_string(style);
    if (out.empty())
      out = negative ? "-" + body : body;
    else
      out += (negative ? " - " : " + ") + body;
  }
  return out;
}

// ---- root relations ----

SymbolPoly RootRelations::reduce(const SymbolPoly& p) const {
  SymbolPoly cur = p;
  for (int guard = 0; guard < 10000; ++guard) {
    std::optional<ShiftedSymbol> target;
    for (const auto& [m, c] : cur.terms()) {
      for (const auto& [s, e] : m.powers())
        if (s.kind == SymbolKind::Root && rhs_.count(s.index) && (s.shift < 0 || s.shift > n_ - 2)) {
          if (e < 0) throw std::invalid_argument("negative power of a root unknown");
          target = s;
          break;
        }
      if (target) break;
    }
    if (!target) return cur;
    const ShiftedSymbol s = *target;
    const SymbolPoly& rhs = rhs_.at(s.index);
    // sum_{a=0}^{n-1} S^(b+a) rho = S^b rhs, solved for the outermost shift.
    SymbolPoly repl;
    if (s.shift > n_ - 2) {
      const int b = s.shift - (n_ - 1);
      repl = rhs.shifted(b);
      for (int a = 0; a < n_ - 1; ++a) repl -= SymbolPoly::symbol({SymbolKind::Root, s.index, s.point, b + a});
    } else {
      const int b = s.shift;
      repl = rhs.shifted(b);
      for (int a = 1; a < n_; ++a) repl -= SymbolPoly::symbol({SymbolKind::Root, s.index, s.point, b + a});
    }
    cur = cur.substitute([&](const ShiftedSymbol& x) -> std::optional<SymbolPoly> {
      if (x == s) return repl;
      return std::nullopt;
    });
  }
  throw std::logic_error("root relation reduction did not terminate");
}

// ---- q-difference operators ----

QDiffOp QDiffOp::term(int k, const SymbolPoly& a, std::optional<int> depth) {
  if (k < 0 && !depth) throw std::invalid_argument("a term of negative order needs a depth");
  QDiffOp r;
  r.put(k, a);
  if (depth) {
    if (*depth < 1) throw QDepthExhausted("depth must be at least 1");
    r.depth_ = depth;
    r.top_ = k;
  }
  return r;
}

QDiffOp QDiffOp::truncated(int top, int depth, const std::map<int, SymbolPoly>& coeffs) {
  if (depth < 1) throw QDepthExhausted("depth must be at least 1");
  QDiffOp r;
  r.depth_ = depth;
  r.top_ = top;
  for (const auto& [k, a] : coeffs) {
    if (k > top) throw std::invalid_argument("coefficient above the declared top order");
    r.put(k, a);
  }
  r.drop_below_floor();
  return r;
}

int QDiffOp::top() const {
  if (depth_) return top_;
  return coeffs_.empty() ? 0 : coeffs_.rbegin()->first;
}

int QDiffOp::floor() const { return depth_ ? top_ - *depth_ + 1 : INT_MIN; }

SymbolPoly QDiffOp::coeff(int k) const {
  if (depth_ && k < floor()) throw QDepthExhausted("coefficient below the certified depth");
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? SymbolPoly() : it->second;
}

void QDiffOp::put(int k, const SymbolPoly& a) {
  if (a.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(k, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

void QDiffOp::drop_below_floor() {
  if (depth_) coeffs_.erase(coeffs_.begin(), coeffs_.lower_bound(floor()));
}

QDiffOp QDiffOp::operator-() const {
  QDiffOp r = *this;
  for (auto& [k, a] : r.coeffs_) a = -a;
  return r;
}

QDiffOp operator+(const QDiffOp& a, const QDiffOp& b) {
  QDiffOp r;
  if (a.depth_ || b.depth_) {
    const int top = std::max(a.top(), b.top());
    const int fl = std::max(a.floor(), b.floor());
    if (top - fl + 1 < 1) throw QDepthExhausted("sum has no certified orders");
    r.depth_ = top - fl + 1;
    r.top_ = top;
  }
  for (const auto& [k, x] : a.coeffs_) r.put(k, x);
  for (const auto& [k, x] : b.coeffs_) r.put(k, x);
  r.drop_below_floor();
  return r;
}

QDiffOp q_compose(const QDiffOp& a, const QDiffOp& b) {
  QDiffOp r;
  if (a.depth_ || b.depth_) {
    int fl = INT_MIN;
    if (a.depth_) fl = std::max(fl, a.floor() + b.top());
    if (b.depth_) fl = std::max(fl, a.top() + b.floor());
    const int top = a.top() + b.top();
    if (top - fl + 1 < 1) throw QDepthExhausted("composition has no certified orders");
    r.depth_ = top - fl + 1;
    r.top_ = top;
  }
  for (const auto& [i, ai] : a.coeffs_)
    for (const auto& [j, bj] : b.coeffs_) {
      if (r.depth_ && i + j < r.floor()) continue;
      r.put(i + j, ai * bj.shifted(i));
    }
  return r;
}

QDiffOp QDiffOp::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative operator power");
  QDiffOp r = term(0, SymbolPoly(ParamRational(1)));
  for (int i = 0; i < k; ++i) r = i == 0 ? *this : q_compose(r, *this);
  return r;
}

QDiffOp QDiffOp::positive_part() const {
  if (depth_ && floor() > 0) throw QDepthExhausted("positive part needs certified orders down to 0");
  QDiffOp r;
  for (const auto& [k, a] : coeffs_)
    if (k >= 0) r.put(k, a);
  return r;
}

std::string QDiffOp::to_string(const SymbolStyle& style) const {
  std::string s;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += "(" + it->second.to_string(style) + ")*D^" + std::to_string(it->first);
  }
  if (s.empty()) s = "0";
  if (depth_) s += " + O(D^" + std::to_string(floor() - 1) + ")";
  return s;
}

}  // namespace opera
