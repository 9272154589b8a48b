#include "opera/series.hpp"

namespace opera {
namespace {

ParamRational param_part(const PochhammerArg& m) {
  Exponents e{};
  e[static_cast<std::size_t>(Var::q)] = m.q_exp;
  e[static_cast<std::size_t>(Var::t)] = m.t_exp;
  return ParamRational::monomial(m.coeff, e);
}

bool is_root_of_unity_candidate(const PochhammerArg& b) {
  return b.q_exp == 0 && b.t_exp == 0 && (b.coeff == 1 || b.coeff == -1);
}

}  // namespace

TruncatedSeries<ParamRational> q_pochhammer_series(const PochhammerArg& a, const PochhammerArg& b, int order) {
  using S = TruncatedSeries<ParamRational>;
  const ParamRational one(1);
  S out = S::constant('z', order, one);
  if (a.coeff == 0) return out;
  if (a.z_exp < 0 || b.z_exp < 0)
    throw SeriesError("non-truncating q-Pochhammer pattern: negative power of z");
  const ParamRational pa = param_part(a);
  if (b.coeff == 0) {
    out.add(a.z_exp, -pa);
    return out;
  }
  const ParamRational pb = param_part(b);
  if (b.z_exp >= 1) {
    // Factor n carries z^(a.z + n b.z); only finitely many are below order.
    ParamRational c = pa;
    for (int n = 0; a.z_exp + n * b.z_exp < order; ++n) {
      S factor = S::constant('z', order, one);
      factor.add(a.z_exp + n * b.z_exp, -c);
      out = out * factor;
      c *= pb;
    }
    return out;
  }
  if (a.z_exp >= 1 && !is_root_of_unity_candidate(b)) {
    // Euler: (a; b)_inf = sum_k (-1)^k b^(k(k-1)/2) a^k / ((1-b)...(1-b^k)).
    ParamRational term = one;
    for (int k = 1; k * a.z_exp < order; ++k) {
      term *= -(pa * pb.pow(k - 1)) / (one - pb.pow(k));
      out.add(k * a.z_exp, term);
    }
    return out;
  }
  throw SeriesError("non-truncating q-Pochhammer pattern");
}

}  // namespace opera
