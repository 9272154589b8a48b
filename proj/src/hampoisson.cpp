#include "opera/hampoisson.hpp"

#include <stdexcept>

#include "opera/oper.hpp"
#include "opera/psdo.hpp"

namespace opera {

CartanData CartanData::type_a(int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  CartanData c;
  c.rank = rank;
  c.cartan.assign(rank, std::vector<int>(rank, 0));
  c.inner.assign(rank, std::vector<Rational>(rank, Rational(0)));
  for (int i = 0; i < rank; ++i) {
    c.cartan[i][i] = 2;
    if (i + 1 < rank) c.cartan[i][i + 1] = c.cartan[i + 1][i] = -1;
  }
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) c.inner[i][j] = Rational(c.cartan[i][j]);
  for (int i = 1; i <= rank; ++i) c.rho_vee.push_back(make_rational(i * (rank + 1 - i), 2));
  c.dual_coxeter = rank + 1;
  return c;
}

OperatorMatrix adjoint(const OperatorMatrix& p) {
  const std::size_t n = p.size();
  OperatorMatrix r(n, std::vector<DiffOp>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) r[a][b] = p[b][a].adjoint();
  return r;
}

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
  const std::size_t rows = a.size(), inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  OperatorMatrix r(rows, std::vector<DiffOp>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

HamiltonianOperator::HamiltonianOperator(OperatorMatrix m) : m_(std::move(m)) {
  for (const auto& row : m_)
    if (row.size() != m_.size()) throw std::invalid_argument("Hamiltonian operator matrix is not square");
  OperatorMatrix adj = adjoint(m_);
  for (std::size_t a = 0; a < m_.size(); ++a)
    for (std::size_t b = 0; b < m_.size(); ++b)
      if (!(adj[a][b] == -m_[a][b])) throw std::invalid_argument("Hamiltonian operator is not skew-adjoint");
}

std::string HamiltonianOperator::to_string(const FieldNames& names) const {
  if (size() == 1) return m_[0][0].to_string(names);
  std::string s = "[";
  for (int a = 0; a < size(); ++a) {
    s += a ? ", [" : "[";
    for (int b = 0; b < size(); ++b) s += (b ? ", " : "") + m_[a][b].to_string(names);
    s += "]";
  }
  return s + "]";
}

HamiltonianOperator heisenberg_operator(const CartanData& c) {
  OperatorMatrix m(c.rank, std::vector<DiffOp>(c.rank));
  for (int i = 0; i < c.rank; ++i)
    for (int j = 0; j < c.rank; ++j)
      if (c.inner[i][j] != 0) m[i][j] = DiffOp::derivative() * ParamRational(-c.inner[i][j] / 4);
  return HamiltonianOperator(std::move(m));
}

HamiltonianOperator miura_heisenberg_operator(int n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  OperatorMatrix m(n - 1, std::vector<DiffOp>(n - 1));
  for (int a = 0; a < n - 1; ++a)
    for (int b = 0; b < n - 1; ++b)
      m[a][b] = DiffOp::derivative() * ParamRational(-(Rational(a == b ? 1 : 0) - make_rational(1, n)));
  return HamiltonianOperator(std::move(m));
}

HamiltonianOperator virasoro_operator() {
  DiffOp p = DiffOp::term(3, JetPolynomial(make_rational(1, 2))) - DiffOp::term(1, JetPolynomial(Rational(2)) * JetPolynomial::var(1)) -
             DiffOp::multiplication(JetPolynomial::var(1, 1));
  return HamiltonianOperator::scalar(p);
}

// ---- rewriting in target fields ----

namespace {

int weight_of(const FieldWeights& w, int field) {
  return field - 1 < static_cast<int>(w.size()) ? w[field - 1] : 1;
}

std::optional<int> monomial_weight(const JetMonomial& m, const FieldWeights& w) {
  if (m.z() != 0) return std::nullopt;
  int total = 0;
  for (const auto& [v, e] : m.factors()) total += (weight_of(w, v.field) + v.order) * e;
  return total;
}

// Solves sum_j c_j cols[j] = rhs exactly; nullopt if inconsistent.
std::optional<std::vector<ParamRational>> solve_linear(const std::vector<JetPolynomial>& cols, const JetPolynomial& rhs) {
  std::map<JetMonomial, int> row_of;
  auto index = [&](const JetMonomial& m) {
    auto [it, inserted] = row_of.try_emplace(m, static_cast<int>(row_of.size()));
    return it->second;
  };
  for (const auto& c : cols)
    for (const auto& [m, x] : c.terms()) index(m);
  for (const auto& [m, x] : rhs.terms()) index(m);
  const int rows = static_cast<int>(row_of.size());
  const int ncols = static_cast<int>(cols.size());
  std::vector<std::vector<ParamRational>> a(rows, std::vector<ParamRational>(ncols + 1));
  for (int j = 0; j < ncols; ++j)
    for (const auto& [m, x] : cols[j].terms()) a[row_of[m]][j] = x;
  for (const auto& [m, x] : rhs.terms()) a[row_of[m]][ncols] = x;

  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < ncols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    ParamRational inv = a[r][c].inverse();
    for (int k = c; k <= ncols; ++k)
      if (!a[r][k].is_zero()) a[r][k] = a[r][k] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      ParamRational f = a[i][c];
      for (int k = c; k <= ncols; ++k)
        if (!a[r][k].is_zero()) a[i][k] = a[i][k] - f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (!a[i][ncols].is_zero()) return std::nullopt;
  std::vector<ParamRational> sol(ncols);
  for (int i = 0; i < r; ++i) sol[pivot_col[i]] = a[i][ncols];
  return sol;
}

struct TargetBasis {
  std::vector<JetMonomial> monomials;
  std::vector<JetPolynomial> images;
};

void enumerate(const std::vector<std::pair<JetVar, int>>& vars, std::size_t start, int remaining, const JetMonomial& mono,
               const JetPolynomial& image, const std::vector<JetPolynomial>& var_images, TargetBasis& out) {
  if (remaining == 0) {
    out.monomials.push_back(mono);
    out.images.push_back(image);
    return;
  }
  for (std::size_t i = start; i < vars.size(); ++i) {
    if (vars[i].second > remaining) continue;
    enumerate(vars, i, remaining - vars[i].second, mono * JetMonomial::of(vars[i].first), image * var_images[i], var_images, out);
  }
}

}  // namespace

std::optional<JetPolynomial> rewrite_in_targets(const JetPolynomial& p, const std::vector<JetPolynomial>& mu,
                                                const FieldWeights& source_weights) {
  std::vector<int> target_weight;
  for (const auto& m : mu) {
    std::optional<int> w;
    for (const auto& [mono, c] : m.terms()) {
      auto mw = monomial_weight(mono, source_weights);
      if (!mw || (w && *w != *mw)) return std::nullopt;
      w = mw;
    }
    if (!w || *w < 1) return std::nullopt;
    target_weight.push_back(*w);
  }
  std::map<int, JetPolynomial> by_weight;
  for (const auto& [mono, c] : p.terms()) {
    auto w = monomial_weight(mono, source_weights);
    if (!w) return std::nullopt;
    by_weight[*w].add_term(mono, c);
  }
  JetPolynomial result;
  for (const auto& [w, part] : by_weight) {
    std::vector<std::pair<JetVar, int>> vars;
    std::vector<JetPolynomial> var_images;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      JetPolynomial d = mu[a];
      for (int k = 0; target_weight[a] + k <= w; ++k) {
        vars.push_back({JetVar{static_cast<int>(a) + 1, k}, target_weight[a] + k});
        var_images.push_back(d);
        d = d.total_derivative();
      }
    }
    TargetBasis basis;
    enumerate(vars, 0, w, JetMonomial(), JetPolynomial(Rational(1)), var_images, basis);
    auto sol = solve_linear(basis.images, part);
    if (!sol) return std::nullopt;
    for (std::size_t j = 0; j < sol->size(); ++j) result.add_term(basis.monomials[j], (*sol)[j]);
  }
  return result;
}

Pushforward pushforward_structure(const std::vector<JetPolynomial>& mu, const HamiltonianOperator& p,
                                  const FieldWeights& source_weights) {
  const int src = p.size();
  const int tgt = static_cast<int>(mu.size());
  OperatorMatrix d(tgt, std::vector<DiffOp>(src));
  for (int a = 0; a < tgt; ++a)
    for (int i = 0; i < src; ++i) d[a][i] = mu[a].frechet(i + 1);
  OperatorMatrix q = compose(compose(d, p.matrix()), adjoint(d));
  OperatorMatrix rewritten = q;
  bool ok = true;
  for (auto& row : rewritten) {
    for (auto& entry : row) {
      DiffOp r;
      for (const auto& [k, c] : entry.coefficients()) {
        auto w = rewrite_in_targets(c, mu, source_weights);
        if (!w) {
          ok = false;
          break;
        }
        r.add(k, *w);
      }
      if (!ok) break;
      entry = r;
    }
    if (!ok) break;
  }
  return ok ? Pushforward{HamiltonianOperator(std::move(rewritten)), true} : Pushforward{HamiltonianOperator(std::move(q)), false};
}

// ---- modes ----

void ModeExpr::add_mode(int field, int n, const ParamRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = modes.try_emplace({field, n}, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) modes.erase(it);
  }
}

ModeExpr& ModeExpr::operator+=(const ModeExpr& o) {
  for (const auto& [k, c] : o.modes) add_mode(k.first, k.second, c);
  central = central + o.central;
  return *this;
}

ModeExpr ModeExpr::operator-() const { return scaled(ParamRational(-1)); }

ModeExpr ModeExpr::scaled(const ParamRational& c) const {
  ModeExpr r;
  for (const auto& [k, x] : modes) r.add_mode(k.first, k.second, x * c);
  r.central = central * c;
  return r;
}

std::string ModeExpr::to_string(const std::string& letter, bool indexed_fields) const {
  std::string s;
  auto append = [&](const ParamRational& c, const std::string& sym) {
    std::string cs = c.to_string();
    bool negative = !cs.empty() && cs[0] == '-';
    if (negative) cs = cs.substr(1);
    bool paren = cs.find_first_of("+-") != std::string::npos;
    if (paren) cs = "(" + cs + ")";
    std::string body = sym.empty() ? cs : (cs == "1" ? sym : cs + "*" + sym);
    if (s.empty())
      s = negative ? "-" + body : body;
    else
      s += negative ? " - " + body : " + " + body;
  };
  for (const auto& [k, c] : modes) {
    std::string sym = letter + (indexed_fields ? std::to_string(k.first) : "") + "_{" + std::to_string(k.second) + "}";
    append(c, sym);
  }
  if (!central.is_zero()) append(central, "");
  return s.empty() ? "0" : s;
}

ModeExpr mode_bracket_entry(const HamiltonianOperator& p, const FieldWeights& weights, int i, int n, int j, int m) {
  const int di = weight_of(weights, i), dj = weight_of(weights, j);
  ModeExpr out;
  for (const auto& [k, a] : p.entry(i - 1, j - 1).coefficients()) {
    const ParamRational kernel(Rational(falling_factorial(m + dj - 1, k)));
    if (kernel.is_zero()) continue;
    // Needed: coefficient of t^e in a(t).
    const int e = k + 1 - n - m - di - dj;
    for (const auto& [mono, c] : a.terms()) {
      const int shifted = e - mono.z();  // z^s multiplies by t^s
      if (mono.degree() == 0) {
        if (shifted == 0) out.central = out.central + c * kernel;
        continue;
      }
      if (mono.degree() != 1) throw std::invalid_argument("mode brackets need coefficients affine in the fields");
      const JetVar v = mono.factors()[0].first;
      const int dl = weight_of(weights, v.field);
      // w^(r)(t) = sum_p w_p ff(-p-D, r) t^(-p-D-r)
      const int mode = -shifted - dl - v.order;
      out.add_mode(v.field, mode, c * kernel * ParamRational(Rational(falling_factorial(-mode - dl, v.order))));
    }
  }
  return out;
}

ModeBracketTable::ModeBracketTable(const HamiltonianOperator& p, FieldWeights weights, int window)
    : p_(p), weights_(std::move(weights)), window_(window) {
  if (window < 0) throw std::invalid_argument("window must be nonnegative");
  weights_.resize(p.size(), 1);
  for (int i = 1; i <= fields(); ++i)
    for (int j = 1; j <= fields(); ++j)
      for (int n = -window; n <= window; ++n)
        for (int m = -window; m <= window; ++m) table_[{i, n, j, m}] = mode_bracket_entry(p_, weights_, i, n, j, m);
}

bool ModeBracketTable::is_skew_symmetric() const {
  for (const auto& [key, e] : table_) {
    auto [i, n, j, m] = key;
    ModeExpr sum = e;
    sum += at(j, m, i, n);
    if (!sum.is_zero()) return false;
  }
  return true;
}

ModeExpr ModeBracketTable::bracket_with(int i, int n, const ModeExpr& e) const {
  ModeExpr out;
  for (const auto& [k, c] : e.modes) out += mode_bracket_entry(p_, weights_, i, n, k.first, k.second).scaled(c);
  return out;
}

std::vector<std::string> ModeBracketTable::jacobi_violations() const {
  std::vector<std::string> bad;
  const int w = window_;
  for (int a = 1; a <= fields(); ++a)
    for (int b = 1; b <= fields(); ++b)
      for (int c = 1; c <= fields(); ++c)
        for (int x = -w; x <= w; ++x)
          for (int y = -w; y <= w; ++y)
            for (int z = -w; z <= w; ++z) {
              ModeExpr sum = bracket_with(a, x, at(b, y, c, z));
              sum += bracket_with(b, y, at(c, z, a, x));
              sum += bracket_with(c, z, at(a, x, b, y));
              if (!sum.is_zero())
                bad.push_back("(" + std::to_string(a) + "," + std::to_string(x) + "),(" + std::to_string(b) + "," + std::to_string(y) +
                              "),(" + std::to_string(c) + "," + std::to_string(z) + "): " + sum.to_string("w", true));
            }
  return bad;
}

ModeBracketTable mode_bracket(const HamiltonianOperator& p, const FieldWeights& weights, int window) {
  return ModeBracketTable(p, weights, window);
}

// ---- flows ----

std::vector<JetPolynomial> hamiltonian_flow(const HamiltonianOperator& p, const JetPolynomial& h) {
  std::vector<JetPolynomial> grad;
  for (int b = 1; b <= p.size(); ++b) grad.push_back(h.euler(b));
  std::vector<JetPolynomial> out(p.size());
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b) out[a] += p.entry(a, b).apply(grad[b]);
  return out;
}

std::vector<JetPolynomial> miura_field_map(int n) { return miura_expand(miura_diagonal(n)); }

namespace {

std::map<int, JetPolynomial> as_assignment(const std::vector<JetPolynomial>& mu) {
  std::map<int, JetPolynomial> a;
  for (std::size_t i = 0; i < mu.size(); ++i) a[static_cast<int>(i) + 1] = mu[i];
  return a;
}

}  // namespace

std::vector<JetPolynomial> mkdv_flow(int n, int m, int depth) {
  JetPolynomial density = conserved_density(n, m, depth).substitute(as_assignment(miura_field_map(n)));
  return hamiltonian_flow(miura_heisenberg_operator(n), density);
}

Intertwining mkdv_kdv_intertwining(int n, int m, int depth) {
  const std::vector<JetPolynomial> mu = miura_field_map(n);
  const std::vector<JetPolynomial> flow = mkdv_flow(n, m, depth);
  const std::vector<JetPolynomial> kdv = lax_rhs(n, m, depth).rhs;
  const auto assignment = as_assignment(mu);
  Intertwining out;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    JetPolynomial l;
    for (std::size_t i = 0; i < flow.size(); ++i) l += mu[a].frechet(static_cast<int>(i) + 1).apply(flow[i]);
    out.lhs.push_back(l);
    out.rhs.push_back(kdv[a].substitute(assignment));
  }
  std::optional<ParamRational> c;
  for (std::size_t a = 0; a < mu.size() && !c; ++a)
    if (!out.rhs[a].is_zero()) {
      const auto& [mono, x] = *out.rhs[a].terms().begin();
      c = out.lhs[a].coefficient(mono) / x;
    }
  if (!c) {
    bool all_zero = true;
    for (const auto& l : out.lhs) all_zero = all_zero && l.is_zero();
    if (all_zero) out.constant = ParamRational(1);
    return out;
  }
  for (std::size_t a = 0; a < mu.size(); ++a)
    if (!(out.lhs[a] == out.rhs[a] * *c)) return out;
  out.constant = c;
  return out;
}

}  // namespace opera
