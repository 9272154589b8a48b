#pragma once

// q-difference operators with (D g)(z) = g(z q^2), q-Miura factorization and
// q-KdV Lax flows, formal distributions in x = w/z, the classical limit
// q = e^h and the deformed structure function.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opera/jet.hpp"
#include "opera/series.hpp"

namespace opera {

enum class SymbolKind { Lambda, Baxter, T, Root };  // Lambda_i, Q, t_i, rho_j
enum class Point { z, w };

// kind_index(point * q^(2 shift))
struct ShiftedSymbol {
  SymbolKind kind = SymbolKind::Lambda;
  int index = 1;
  Point point = Point::z;
  int shift = 0;
  auto operator<=>(const ShiftedSymbol&) const = default;
};

struct SymbolStyle {
  bool latex = false;
  bool bare_lambda = false;  // Lambda instead of Lambda_1 (sl_2)
};

std::string symbol_name(const ShiftedSymbol& s, const SymbolStyle& style = {});

// Laurent monomial in shifted symbols; exponents nonzero.
class SymbolMonomial {
 public:
  SymbolMonomial() = default;
  static SymbolMonomial of(const ShiftedSymbol& s, int e = 1);
  const std::map<ShiftedSymbol, int>& powers() const { return p_; }
  bool is_one() const { return p_.empty(); }
  SymbolMonomial operator*(const SymbolMonomial& o) const;
  SymbolMonomial inverse() const;
  // Symbols at point p shifted by k.
  SymbolMonomial shifted(int k, Point p = Point::z) const;
  // Symbols at point from are moved to point to with extra shift k.
  SymbolMonomial moved(Point from, Point to, int k) const;
  bool only_at(Point p) const;
  auto operator<=>(const SymbolMonomial&) const = default;
  std::string to_string(const SymbolStyle& style = {}) const;

 private:
  std::map<ShiftedSymbol, int> p_;
};

class SymbolPoly {
 public:
  using TermMap = std::map<SymbolMonomial, ParamRational>;
  SymbolPoly() = default;
  explicit SymbolPoly(const ParamRational& c);
  static SymbolPoly symbol(const ShiftedSymbol& s, int e = 1);
  static SymbolPoly lambda(int i, int shift = 0, int e = 1, Point p = Point::z) { return symbol({SymbolKind::Lambda, i, p, shift}, e); }
  static SymbolPoly monomial(const SymbolMonomial& m, const ParamRational& c);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  ParamRational constant_value() const;
  ParamRational coefficient(const SymbolMonomial& m) const;

  SymbolPoly operator-() const;
  SymbolPoly& operator+=(const SymbolPoly& o);
  SymbolPoly& operator-=(const SymbolPoly& o);
  friend SymbolPoly operator+(SymbolPoly a, const SymbolPoly& b) { return a += b; }
  friend SymbolPoly operator-(SymbolPoly a, const SymbolPoly& b) { return a -= b; }
  friend SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b);
  friend SymbolPoly operator*(const SymbolPoly& a, const ParamRational& c);
  bool operator==(const SymbolPoly&) const = default;
  // Negative powers only for monomials.
  SymbolPoly pow(int k) const;
  SymbolPoly shifted(int k, Point p = Point::z) const;
  SymbolPoly moved(Point from, Point to, int k) const;
  // Replaces every symbol s with rule(s) when it returns a value; negative
  // exponents require a monomial replacement.
  template <class F>
  SymbolPoly substitute(F&& rule) const;
  template <class F>
  SymbolPoly map_coefficients(F&& f) const {
    SymbolPoly r;
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  std::string to_string(const SymbolStyle& style = {}) const;
  void add_term(const SymbolMonomial& m, const ParamRational& c);

 private:
  TermMap terms_;
};

template <class F>
SymbolPoly SymbolPoly::substitute(F&& rule) const {
  SymbolPoly out;
  for (const auto& [m, c] : terms_) {
    SymbolPoly acc(c);
    SymbolMonomial kept;
    for (const auto& [s, e] : m.powers()) {
      std::optional<SymbolPoly> r = rule(s);
      if (r)
        acc = acc * r->pow(e);
      else
        kept = kept * SymbolMonomial::of(s, e);
    }
    out += acc * SymbolPoly::monomial(kept, ParamRational(1));
  }
  return out;
}

// Relations sum_{a=0}^{n-1} S^a rho_j = rhs_j for the unknowns of a q-root.
// Normal form keeps rho_j only at shifts 0..n-2.
class RootRelations {
 public:
  explicit RootRelations(int n) : n_(n) {}
  int n() const { return n_; }
  void add(int index, const SymbolPoly& rhs) { rhs_[index] = rhs; }
  const std::map<int, SymbolPoly>& relations() const { return rhs_; }
  SymbolPoly reduce(const SymbolPoly& p) const;

 private:
  int n_;
  std::map<int, SymbolPoly> rhs_;
};

class QDepthExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sum_k a_k(z) D^k; truncated operators carry a certified depth as in psdo.
class QDiffOp {
 public:
  QDiffOp() = default;
  static QDiffOp term(int k, const SymbolPoly& a, std::optional<int> depth = std::nullopt);
  static QDiffOp truncated(int top, int depth, const std::map<int, SymbolPoly>& coeffs);

  bool is_exact() const { return !depth_; }
  std::optional<int> depth() const { return depth_; }
  int top() const;
  int floor() const;
  const std::map<int, SymbolPoly>& coefficients() const { return coeffs_; }
  SymbolPoly coeff(int k) const;

  QDiffOp operator-() const;
  friend QDiffOp operator+(const QDiffOp& a, const QDiffOp& b);
  friend QDiffOp operator-(const QDiffOp& a, const QDiffOp& b) { return a + (-b); }
  bool operator==(const QDiffOp&) const = default;
  QDiffOp pow(int k) const;
  QDiffOp positive_part() const;
  template <class F>
  QDiffOp map_coefficients(F&& f) const {
    QDiffOp r = *this;
    r.coeffs_.clear();
    for (const auto& [k, c] : coeffs_) r.put(k, f(c));
    return r;
  }
  std::string to_string(const SymbolStyle& style = {}) const;

  // a D^i o b D^j = a S^i(b) D^(i+j)
  friend QDiffOp q_compose(const QDiffOp& a, const QDiffOp& b);

 private:
  std::map<int, SymbolPoly> coeffs_;
  std::optional<int> depth_;
  int top_ = 0;
  void put(int k, const SymbolPoly& a);
  void drop_below_floor();
};

inline QDiffOp q_shift_operator(int k = 1) { return QDiffOp::term(k, SymbolPoly(ParamRational(1))); }

struct QMiura {
  std::vector<SymbolPoly> t;  // t_1..t_{n-1}
  SymbolPoly constant;        // D^0 coefficient, equal to prod Lambda_i(z)
  QDiffOp product;
};

// Expands (D + Lambda_1(z)) ... (D + Lambda_n(z)).
QMiura q_miura_expand(int n);
// Lambda_n -> (Lambda_1 ... Lambda_{n-1})^-1 at the same argument.
SymbolPoly impose_product_constraint(const SymbolPoly& p, int n);

struct QLaxFlow {
  std::vector<SymbolPoly> rhs;  // d t_i / d t_m, i = 1..n-1
  QDiffOp root;
  QDiffOp commutator;
  RootRelations relations{2};
};

// L_q = D^n + t_1 D^(n-1) + ... + t_{n-1} D + 1; generic symbols t_i(z) when
// coefficients are omitted.
QLaxFlow q_root_lax(int n, int m, int depth, std::optional<std::vector<SymbolPoly>> coefficients = std::nullopt);

// ---- formal distributions in x = w/z ----

enum class AtomKind { F, Delta, Power };

// F, Delta: g(x q^(2 shift)); Power: x^power.
struct DistAtom {
  AtomKind kind = AtomKind::Delta;
  int shift = 0;
  int power = 0;
  auto operator<=>(const DistAtom&) const = default;
  std::string to_string() const;
};

// n-th coefficient (q^n - q^-n)/(q^n + q^-n) of f.
ParamRational f_coefficient(int n);

class DistributionExpr {
 public:
  using Group = std::map<DistAtom, ParamRational>;
  DistributionExpr() = default;
  // coeff * g(num/den * q^(2 shift)), oriented to the variable w/z.
  static DistributionExpr atom(AtomKind kind, Point num, Point den, int shift, const SymbolPoly& coeff, int power = 0);

  const std::map<SymbolMonomial, Group>& groups() const { return groups_; }
  bool is_zero() const { return groups_.empty(); }
  DistributionExpr& operator+=(const DistributionExpr& o);
  DistributionExpr operator-() const;
  friend DistributionExpr operator+(DistributionExpr a, const DistributionExpr& b) { return a += b; }
  friend DistributionExpr operator-(DistributionExpr a, const DistributionExpr& b) { return a += -b; }
  DistributionExpr times(const SymbolPoly& p) const;
  bool operator==(const DistributionExpr&) const = default;
  void add(const SymbolMonomial& m, const DistAtom& a, const ParamRational& c);
  std::string to_string(const SymbolStyle& style = {}) const;

 private:
  std::map<SymbolMonomial, Group> groups_;
};

struct CoefficientRow {
  SymbolMonomial monomial;
  std::map<int, ParamRational> coefficients;  // n -> c_n for |n| <= W
};

struct NormalizedDistribution {
  DistributionExpr normal;
  std::vector<CoefficientRow> table;  // one row per monomial, atoms summed
  // (monomial, n) entries with nonzero coefficient.
  std::vector<std::pair<SymbolMonomial, int>> nonzero() const;
};

// Converts shifted f's to delta's, collapses delta supports, merges atoms.
DistributionExpr dist_canonical(const DistributionExpr& e);
NormalizedDistribution dist_normalize(const DistributionExpr& e, int window);
std::map<int, ParamRational> coefficient_sequence(const DistributionExpr::Group& g, int window);

// {A(p_a), B(p_b)} for sl_2 from {Lambda(z), Lambda(w)} = (q - q^-1) f(w/z) Lambda(z) Lambda(w), by Leibniz.
DistributionExpr lambda_bracket(const SymbolPoly& a, Point pa, const SymbolPoly& b, Point pb);

struct TBracketReport {
  int window = 0;
  NormalizedDistribution lhs;
  NormalizedDistribution residual;
  bool passed() const { return residual.normal.is_zero() && residual.nonzero().empty(); }
};
TBracketReport verify_t_bracket(int window);

// ---- limits and specializations ----

// t(z) = Lambda(z) + Lambda(z q^2)^-1 with q = e^h, Lambda(z) = exp(2 h u(z) z), as a series in h.
TruncatedSeries<JetPolynomial> classical_limit(int order);

struct BaxterResult {
  ParamRational t;
  ParamRational lambda;  // Q(z q^-2) / Q(z)
};
// Q: nonzero Laurent polynomial in z.
BaxterResult baxter_substitute(const ParamRational& Q);

// f(z) of the deformed Virasoro algebra; t_value specializes t before expanding.
TruncatedSeries<ParamRational> deformed_structure_function(int order, std::optional<ParamRational> t_value = std::nullopt);
// First-order coefficients g_n of f = 1 + (t - 1) g(z) + O((t-1)^2).
std::vector<ParamRational> structure_function_t_derivative(int order);
// (q - q^-1)(t - t^-1)
ParamRational deformed_relation_prefactor();
std::string deformed_relation_template();

}  // namespace opera
