#include "opera/wakimoto.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <sstream>

#include "opera/hampoisson.hpp"

namespace opera {

// ---- UPoly ----

UPoly::UPoly(const Rational& c) {
  if (c != 0) terms_[{}] = c;
}

UPoly UPoly::u(int k) {
  UPoly r;
  r.terms_[{{k, 1}}] = 1;
  return r;
}

void UPoly::add(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  Rational& x = terms_[m];
  x += c;
  if (x == 0) terms_.erase(m);
}

UPoly& UPoly::operator+=(const UPoly& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

UPoly UPoly::operator-() const { return scaled(-1); }

UPoly operator*(const UPoly& a, const UPoly& b) {
  UPoly r;
  for (const auto& [m1, c1] : a.terms_)
    for (const auto& [m2, c2] : b.terms_) {
      UPoly::Monomial m = m1;
      for (const auto& [k, e] : m2) m[k] += e;
      r.add(m, c1 * c2);
    }
  return r;
}

UPoly UPoly::scaled(const Rational& c) const {
  UPoly r;
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& [m, x] : r.terms_) x *= c;
  return r;
}

std::string UPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    first = false;
    if (m.empty() || a != 1) os << a.get_str() << (m.empty() ? "" : "*");
    bool f = true;
    for (const auto& [k, e] : m) {
      if (!f) os << "*";
      f = false;
      os << "u_" << (k < 0 ? "{" + std::to_string(k) + "}" : std::to_string(k));
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

// ---- FockState ----

FockState FockState::vacuum() { return basis({}); }

FockState FockState::basis(const FockBasis& b) {
  FockState s;
  s.add(b, UPoly(1));
  return s;
}

void FockState::add(const FockBasis& b, const UPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(b, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

FockState& FockState::operator+=(const FockState& o) {
  for (const auto& [b, c] : o.terms_) add(b, c);
  return *this;
}

FockState FockState::operator-() const { return times(UPoly(-1)); }

FockState FockState::times(const UPoly& c) const {
  FockState r;
  for (const auto& [b, x] : terms_) r.add(b, x * c);
  return r;
}

int FockState::energy() const {
  int best = 0;
  for (const auto& [b, c] : terms_) {
    int e = 0;
    for (const auto& [g, k] : b) e -= g.mode * k;
    best = std::max(best, e);
  }
  return best;
}

std::string basis_to_string(const FockBasis& b) {
  if (b.empty()) return "|0>";
  std::ostringstream os;
  for (const auto& [g, k] : b) {
    os << (g.dual ? "a*_" : "a_") << (g.mode < 0 ? "{" + std::to_string(g.mode) + "}" : std::to_string(g.mode));
    if (k != 1) os << "^" << k;
    os << " ";
  }
  os << "|0>";
  return os.str();
}

std::string FockState::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ") " << basis_to_string(b);
  }
  return os.str();
}

std::string field_mode_name(const FieldMode& m) {
  static const std::array<const char*, 4> names = {"e", "h", "f", "S"};
  return std::string(names[static_cast<int>(m.field)]) + "_" + std::to_string(m.n);
}

// ---- free-field action ----

namespace {

bool is_creator(bool dual, int n) { return dual ? n <= 0 : n < 0; }

// One Weyl generator on a basis vector: creators multiply; a_k (k >= 0) acts
// as d/d a*_{-k}, a*_l (l > 0) as -d/d a_{-l}.
void apply_generator(bool dual, int n, FockBasis& b, Rational& c) {
  if (c == 0) return;
  if (is_creator(dual, n)) {
    ++b[{dual, n}];
    return;
  }
  FockGen target{!dual, -n};
  auto it = b.find(target);
  if (it == b.end()) {
    c = 0;
    return;
  }
  c *= dual ? -it->second : it->second;
  if (--it->second == 0) b.erase(it);
}

// c * sum over index tuples with sum `total` of :g_1 ... g_r: applied to s,
// where factor i is a*(z) when dual[i] and a(z) otherwise.
FockState apply_normal(const std::vector<bool>& dual, int total, const Rational& c, const FockState& s) {
  FockState out;
  const int r = static_cast<int>(dual.size());
  for (const auto& [b, coeff] : s.terms()) {
    std::vector<int> ann_a, ann_dual;  // annihilator indices acting nontrivially on b
    for (const auto& [g, k] : b) (g.dual ? ann_a : ann_dual).push_back(-g.mode);
    std::vector<int> idx(r, 0);
    std::vector<bool> annihilates(r, false);
    std::function<void(int, int)> choose = [&](int i, int remaining) {
      if (i == r) {
        std::vector<int> creators;
        int room = 0;
        for (int j = 0; j < r; ++j)
          if (!annihilates[j]) {
            creators.push_back(j);
            room += dual[j] ? 0 : -1;
          }
        // creator indices x_j <= ub_j summing to `remaining`
        int slack = room - remaining;
        if (slack < 0) return;
        if (creators.empty() && slack != 0) return;
        std::function<void(std::size_t, int)> fill = [&](std::size_t p, int left) {
          if (p + 1 >= creators.size()) {
            if (!creators.empty()) idx[creators.back()] = (dual[creators.back()] ? 0 : -1) - left;
            FockBasis nb = b;
            Rational x = c;
            for (int j = 0; j < r; ++j)
              if (annihilates[j]) apply_generator(dual[j], idx[j], nb, x);
            for (int j = 0; j < r; ++j)
              if (!annihilates[j]) apply_generator(dual[j], idx[j], nb, x);
            if (x != 0) out.add(nb, coeff.scaled(x));
            return;
          }
          for (int y = 0; y <= left; ++y) {
            idx[creators[p]] = (dual[creators[p]] ? 0 : -1) - y;
            fill(p + 1, left - y);
          }
        };
        fill(0, slack);
        return;
      }
      annihilates[i] = false;
      choose(i + 1, remaining);
      annihilates[i] = true;
      for (int k : dual[i] ? ann_dual : ann_a) {
        idx[i] = k;
        choose(i + 1, remaining - k);
      }
      annihilates[i] = false;
    };
    choose(0, total);
  }
  return out;
}

}  // namespace

FockState apply_weyl(bool dual, int n, const FockState& s) { return apply_normal({dual}, n, 1, s); }

WakimotoModule::WakimotoModule(WakimotoConfig config) : config_(config) {
  if (config_.u_support < 0) throw std::invalid_argument("u_support must be nonnegative");
}

void WakimotoModule::check(int n, const FockState& s) const {
  if (std::abs(n) > config_.mode_limit) throw WindowExceeded("mode index outside the configured window");
  for (const auto& [b, c] : s.terms()) {
    int deg = 0;
    for (const auto& [g, k] : b) deg += k;
    if (deg > config_.degree_limit) throw WindowExceeded("state degree above the configured cutoff");
  }
}

UPoly WakimotoModule::miura_mode(int n, const Rational& scale) const {
  const int U = config_.u_support;
  UPoly r;
  for (int a = -U; a <= U; ++a)
    if (std::abs(n - a) <= U) r += (UPoly::u(a) * UPoly::u(n - a)).scaled(scale * scale);
  if (std::abs(n) <= U) r += UPoly::u(n).scaled(scale * (n + 1));
  return r;
}

FockState WakimotoModule::current(Current j, int n, const FockState& s) const {
  const int U = config_.u_support;
  switch (j) {
    case Current::e:
      return apply_normal({false}, n, 1, s);
    case Current::h: {
      FockState r = apply_normal({false, true}, n, -2, s);
      if (std::abs(n) <= U) r += s.times(UPoly::u(n));
      return r;
    }
    case Current::f: {
      FockState r = apply_normal({false, true, true}, n, -1, s);
      for (int k = -U; k <= U; ++k) r += apply_normal({true}, n - k, 1, s).times(UPoly::u(k));
      r += apply_normal({true}, n, Rational(config_.corrupt_f ? -2 * n : 2 * n), s);
      return r;
    }
    case Current::S:
      return sugawara(n, s);
  }
  return {};
}

FockState WakimotoModule::sugawara(int n, const FockState& s) const {
  // J_k s = 0 for k > energy(s) + U, which bounds every normal-ordered sum.
  const int bound = s.energy() + config_.u_support;
  struct Pair {
    Current j, k;
    Rational w;
  };
  const std::array<Pair, 3> pairs = {Pair{Current::e, Current::f, 1}, Pair{Current::f, Current::e, 1},
                                     Pair{Current::h, Current::h, Rational(1, 2)}};
  FockState out;
  for (const auto& [j, k, w] : pairs) {
    for (int m = n - bound; m <= -1; ++m) out += current(j, m, current(k, n - m, s)).times(UPoly(w));
    for (int m = 0; m <= bound; ++m) out += current(k, n - m, current(j, m, s)).times(UPoly(w));
  }
  return out;
}

FockState WakimotoModule::apply(const FieldMode& m, const FockState& s) const {
  check(m.n, s);
  return current(m.field, m.n, s);
}

FockState WakimotoModule::commutator(const FieldMode& x, const FieldMode& y, const FockState& s) const {
  return apply(x, apply(y, s)) - apply(y, apply(x, s));
}

// ---- sl_2 data ----

namespace {

int slot(Current c) {
  if (c == Current::S) throw std::invalid_argument("S is not an element of sl_2");
  return static_cast<int>(c);  // e = 0, h = 1, f = 2
}

}  // namespace

std::optional<std::pair<Rational, Current>> sl2_bracket(Current x, Current y) {
  const int a = slot(x), b = slot(y);
  // [h,e] = 2e, [h,f] = -2f, [e,f] = h
  static const std::array<std::array<std::optional<std::pair<int, Current>>, 3>, 3> table = {{
      {{std::nullopt, std::pair{-2, Current::e}, std::pair{1, Current::h}}},
      {{std::pair{2, Current::e}, std::nullopt, std::pair{-2, Current::f}}},
      {{std::pair{-1, Current::h}, std::pair{2, Current::f}, std::nullopt}},
  }};
  const auto& v = table[a][b];
  if (!v) return std::nullopt;
  return std::pair{Rational(v->first), v->second};
}

Rational critical_form(Current x, Current y) {
  const std::array<Current, 3> basis = {Current::e, Current::h, Current::f};
  auto ad = [&](Current c) {
    std::array<std::array<Rational, 3>, 3> m{};
    for (int col = 0; col < 3; ++col)
      if (auto r = sl2_bracket(c, basis[col])) m[slot(r->second)][col] = r->first;
    return m;
  };
  auto A = ad(x), B = ad(y);
  Rational tr = 0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) tr += A[i][k] * B[k][i];
  return -tr / 2;
}

std::vector<FockBasis> basis_states(int window, int degree) {
  std::vector<FockGen> gens;
  for (int n = -1; n >= -window; --n) gens.push_back({false, n});
  for (int n = 0; n >= -window; --n) gens.push_back({true, n});
  std::vector<FockBasis> out;
  FockBasis cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == gens.size()) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      if (k > 0) cur[gens[i]] = k;
      rec(i + 1, left - k);
    }
    cur.erase(gens[i]);
  };
  rec(0, degree);
  return out;
}

bool WakimotoReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const RelationCheck& c) { return c.passed; });
}

WakimotoReport verify_relations(int window, int degree, const WakimotoConfig& config) {
  if (window < 0 || degree < 0) throw std::invalid_argument("window and degree must be nonnegative");
  WakimotoConfig cfg = config;
  cfg.mode_limit = std::max(cfg.mode_limit, 2 * window);
  cfg.degree_limit = std::max(cfg.degree_limit, degree + 3);
  WakimotoModule mod(cfg);
  WakimotoReport rep;
  rep.window = window;
  rep.degree = degree;
  const std::vector<FockBasis> states = basis_states(window, degree);
  auto name = [](Current c) { return field_mode_name({c, 0}).substr(0, 1); };
  auto describe = [](const FieldMode& x, const FieldMode& y, const FockBasis& b, const FockState& diff) {
    return "[" + field_mode_name(x) + ", " + field_mode_name(y) + "] on " + basis_to_string(b) +
           " differs by " + diff.to_string();
  };

  const std::vector<std::pair<Current, Current>> rels = {{Current::e, Current::e}, {Current::h, Current::e},
                                                         {Current::h, Current::f}, {Current::e, Current::f},
                                                         {Current::h, Current::h}, {Current::f, Current::f}};
  for (const auto& [x, y] : rels) {
    RelationCheck chk{"[" + name(x) + "," + name(y) + "]", true, ""};
    const Rational kappa = critical_form(x, y);
    const auto br = sl2_bracket(x, y);
    for (int n = -window; n <= window && chk.passed; ++n)
      for (int m = -window; m <= window && chk.passed; ++m)
        for (const FockBasis& b : states) {
          const FockState s = FockState::basis(b);
          FockState expect;
          if (br) expect += mod.apply({br->second, n + m}, s).times(UPoly(br->first));
          if (n + m == 0 && kappa != 0) expect += s.times(UPoly(-kappa * m));
          FockState diff = mod.commutator({x, n}, {y, m}, s) - expect;
          if (!diff.is_zero()) {
            chk.passed = false;
            chk.detail = describe({x, n}, {y, m}, b, diff);
            break;
          }
        }
    rep.checks.push_back(chk);
  }

  // S_n is linear, so its action is cached on basis vectors.
  std::map<std::pair<int, FockBasis>, FockState> cache;
  auto sugawara = [&](int n, const FockState& s) {
    FockState out;
    for (const auto& [b, c] : s.terms()) {
      auto key = std::pair{n, b};
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, mod.sugawara(n, FockState::basis(b))).first;
      out += it->second.times(c);
    }
    return out;
  };
  const int wc = std::min(window, 2);
  const std::vector<FockBasis> small = basis_states(std::min(window, 3), std::min(degree, 3));
  for (Current j : {Current::e, Current::h, Current::f}) {
    RelationCheck chk{"[S," + name(j) + "]", true, ""};
    for (int n = -wc; n <= wc && chk.passed; ++n)
      for (int m = -wc; m <= wc && chk.passed; ++m)
        for (const FockBasis& b : small) {
          const FockState st = FockState::basis(b);
          FockState diff = sugawara(n, mod.apply({j, m}, st)) - mod.apply({j, m}, sugawara(n, st));
          if (!diff.is_zero()) {
            chk.passed = false;
            chk.detail = describe({Current::S, n}, {j, m}, b, diff);
            break;
          }
        }
    rep.checks.push_back(chk);
  }

  // S_n s = X_n s with X_n independent of s, then X_n = c (w^2 - w')_n.
  RelationCheck character{"S scalar", true, ""};
  std::map<int, UPoly> scalars;
  for (int n = -wc; n <= wc && character.passed; ++n) {
    const FockState vac = sugawara(n, FockState::vacuum());
    const UPoly x = vac.terms().count({}) ? vac.terms().at({}) : UPoly();
    scalars[n] = x;
    for (const FockBasis& b : small) {
      const FockState s = FockState::basis(b);
      FockState diff = sugawara(n, s) - s.times(x);
      if (!diff.is_zero()) {
        character.passed = false;
        character.detail = "S_" + std::to_string(n) + " on " + basis_to_string(b) + " differs by " + diff.to_string();
        break;
      }
    }
  }
  rep.checks.push_back(character);

  RelationCheck miura{"S=c(w^2-w'),w=u/2", true, ""};
  for (const auto& [n, x] : scalars) {
    const UPoly v = mod.miura_mode(n, kWakimotoMiuraScale);
    if (!rep.sugawara_constant && !v.is_zero()) {
      const auto& [mono, coeff] = *v.terms().begin();
      auto it = x.terms().find(mono);
      rep.sugawara_constant = it == x.terms().end() ? Rational(0) : it->second / coeff;
    }
    if (x != v.scaled(rep.sugawara_constant.value_or(0))) {
      miura.passed = false;
      miura.detail = "S_" + std::to_string(n) + " acts by " + x.to_string();
      break;
    }
  }
  if (!rep.sugawara_constant || *rep.sugawara_constant == 0) miura.passed = false;
  rep.checks.push_back(miura);
  return rep;
}

}  // namespace opera
