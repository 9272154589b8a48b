#include "opera/psdo.hpp"

#include <algorithm>
#include <climits>

namespace opera {

PseudoDiffOp PseudoDiffOp::from_diffop(const DiffOp& d) {
  PseudoDiffOp r;
  for (const auto& [k, a] : d.coefficients()) r.put(k, a);
  return r;
}

PseudoDiffOp PseudoDiffOp::term(int order, const JetPolynomial& a, std::optional<int> depth) {
  if (order < 0 && !depth) throw std::invalid_argument("a pseudodifferential term of negative order needs a depth");
  PseudoDiffOp r;
  r.put(order, a);
  if (depth) {
    if (*depth < 1) throw DepthExhausted("depth must be at least 1");
    r.depth_ = depth;
    r.top_ = order;
  }
  return r;
}

PseudoDiffOp PseudoDiffOp::truncated(int top, int depth, const std::map<int, JetPolynomial>& coeffs) {
  if (depth < 1) throw DepthExhausted("depth must be at least 1");
  PseudoDiffOp r;
  r.depth_ = depth;
  r.top_ = top;
  for (const auto& [k, a] : coeffs) {
    if (k > top) throw std::invalid_argument("coefficient above the declared top order");
    r.put(k, a);
  }
  r.drop_below_floor();
  return r;
}

bool PseudoDiffOp::is_differential() const { return is_exact(); }

int PseudoDiffOp::top() const {
  if (depth_) return top_;
  return coeffs_.empty() ? 0 : coeffs_.rbegin()->first;
}

int PseudoDiffOp::floor() const {
  if (!depth_) return INT_MIN;
  return top_ - *depth_ + 1;
}

JetPolynomial PseudoDiffOp::coeff(int k) const {
  if (depth_ && k < floor()) throw DepthExhausted("coefficient of order " + std::to_string(k) + " is below the certified depth");
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? JetPolynomial() : it->second;
}

void PseudoDiffOp::put(int k, const JetPolynomial& a) {
  if (a.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(k, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

void PseudoDiffOp::drop_below_floor() {
  if (!depth_) return;
  coeffs_.erase(coeffs_.begin(), coeffs_.lower_bound(floor()));
}

PseudoDiffOp PseudoDiffOp::operator-() const {
  PseudoDiffOp r = *this;
  for (auto& [k, a] : r.coeffs_) a = -a;
  return r;
}

PseudoDiffOp PseudoDiffOp::scaled(const ParamRational& c) const {
  return map_coefficients([&](const JetPolynomial& a) { return a * c; });
}

bool PseudoDiffOp::operator==(const PseudoDiffOp& o) const {
  return coeffs_ == o.coeffs_ && depth_ == o.depth_ && (!depth_ || top_ == o.top_);
}

PseudoDiffOp operator+(const PseudoDiffOp& a, const PseudoDiffOp& b) {
  PseudoDiffOp r;
  if (a.depth_ || b.depth_) {
    const int top = std::max(a.top(), b.top());
    const int fl = std::max(a.floor(), b.floor());
    r.depth_ = top - fl + 1;
    r.top_ = top;
    if (*r.depth_ < 1) throw DepthExhausted("sum has no certified orders");
  }
  for (const auto& [k, x] : a.coeffs_) r.put(k, x);
  for (const auto& [k, x] : b.coeffs_) r.put(k, x);
  r.drop_below_floor();
  return r;
}

PseudoDiffOp compose(const PseudoDiffOp& a, const PseudoDiffOp& b) {
  PseudoDiffOp r;
  int fl = INT_MIN;
  if (a.depth_ || b.depth_) {
    const int top = a.top() + b.top();
    if (a.depth_) fl = std::max(fl, a.floor() + b.top());
    if (b.depth_) fl = std::max(fl, a.top() + b.floor());
    r.depth_ = top - fl + 1;
    r.top_ = top;
    if (*r.depth_ < 1) throw DepthExhausted("composition has no certified orders");
  }
  for (const auto& [i, ai] : a.coeffs_)
    for (const auto& [j, bj] : b.coeffs_) {
      JetPolynomial d = bj;
      for (int l = 0;; ++l) {
        if (i >= 0 && l > i) break;
        const int k = i + j - l;
        if (k < fl) break;
        r.put(k, ai * d * ParamRational(generalized_binomial(i, l)));
        d = d.total_derivative();
      }
    }
  return r;
}

PseudoDiffOp PseudoDiffOp::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative operator power");
  PseudoDiffOp r = term(0, JetPolynomial(Rational(1)));
  for (int i = 0; i < k; ++i) r = i == 0 ? *this : compose(r, *this);
  return r;
}

PseudoDiffOp PseudoDiffOp::with_depth(int depth) const {
  if (depth < 1) throw DepthExhausted("depth must be at least 1");
  if (depth_ && depth > *depth_) throw DepthExhausted("cannot widen the certified depth");
  return truncated(top(), depth, coeffs_);
}

PseudoDiffOp PseudoDiffOp::positive_part() const {
  if (depth_ && floor() > 0) throw DepthExhausted("positive part needs certified orders down to 0");
  PseudoDiffOp r;
  for (const auto& [k, a] : coeffs_)
    if (k >= 0) r.put(k, a);
  return r;
}

JetPolynomial PseudoDiffOp::residue() const {
  if (depth_ && floor() > -1) throw DepthExhausted("residue needs certified orders down to -1");
  return coeff(-1);
}

DiffOp PseudoDiffOp::to_diffop() const {
  if (depth_) throw std::logic_error("truncated operator is not a differential operator");
  DiffOp d;
  for (const auto& [k, a] : coeffs_) d.add(k, a);
  return d;
}

std::string PseudoDiffOp::to_string(const FieldNames& names) const {
  std::string s;
  if (coeffs_.empty()) s = "0";
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += "(" + it->second.to_string(names) + ")*d^" + std::to_string(it->first);
  }
  if (depth_) s += " + O(d^" + std::to_string(floor() - 1) + ")";
  return s;
}

PseudoDiffOp nth_root(const PseudoDiffOp& L, int n, int depth) {
  if (n < 1) throw std::invalid_argument("root index must be positive");
  if (depth < 1) throw DepthExhausted("depth must be at least 1");
  if (L.top() != n || !(L.coeff(n) == JetPolynomial(Rational(1))))
    throw std::invalid_argument("nth_root requires a monic operator of order n");
  if (n >= 2 && !L.coeff(n - 1).is_zero())
    throw std::invalid_argument("nth_root requires a vanishing subprincipal coefficient");
  if (L.depth() && *L.depth() < depth)
    throw DepthExhausted("input operator is not certified to the requested depth");
  std::map<int, JetPolynomial> r{{1, JetPolynomial(Rational(1))}};
  const ParamRational inv_n(make_rational(1, n));
  // Step j fixes the coefficient of d^(1-j); it enters R^n at order n-j with
  // coefficient n, all other contributions come from already-fixed orders.
  for (int j = 1; j < depth; ++j) {
    PseudoDiffOp partial = PseudoDiffOp::truncated(1, j + 1, r);
    JetPolynomial known = partial.pow(n).coeff(n - j);
    JetPolynomial rj = (L.coeff(n - j) - known) * inv_n;
    if (!rj.is_zero()) r[1 - j] = rj;
  }
  return PseudoDiffOp::truncated(1, depth, r);
}

PseudoDiffOp kdv_lax_operator(int n) {
  if (n < 2) throw std::invalid_argument("Lax operator needs n >= 2");
  PseudoDiffOp L = PseudoDiffOp::term(n, JetPolynomial(Rational(1)));
  for (int i = 1; i <= n - 1; ++i) L = L - PseudoDiffOp::term(n - 1 - i, JetPolynomial::var(i));
  return L;
}

namespace {

void check_flow_indices(int n, int m) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (m <= 0) throw std::invalid_argument("flow index m must be positive");
  if (m % n == 0) throw std::invalid_argument("flow index m must not be divisible by n");
}

}  // namespace

LaxFlow lax_rhs(int n, int m, int depth) {
  check_flow_indices(n, m);
  if (depth < m + 1) throw DepthExhausted("positive part of L^{m/n} needs depth at least m + 1");
  PseudoDiffOp L = kdv_lax_operator(n);
  PseudoDiffOp R = nth_root(L, n, depth);
  PseudoDiffOp A = R.pow(m).positive_part();
  PseudoDiffOp C = compose(A, L) - compose(L, A);
  LaxFlow out;
  out.commutator = C.to_diffop();
  if (out.commutator.order() > n - 2)
    throw std::logic_error("Lax commutator has order above n-2; truncation bookkeeping is inconsistent");
  for (int i = 1; i <= n - 1; ++i) out.rhs.push_back(-out.commutator.coeff(n - 1 - i));
  return out;
}

JetPolynomial conserved_density(int n, int m, int depth) {
  check_flow_indices(n, m);
  if (depth < m + 2) throw DepthExhausted("residue of L^{m/n} needs depth at least m + 2");
  return nth_root(kdv_lax_operator(n), n, depth).pow(m).residue();
}

}  // namespace opera
