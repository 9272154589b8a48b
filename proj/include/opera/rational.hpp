#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace opera {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Generalized binomial k(k-1)...(k-j+1)/j!, valid for negative k.
inline Rational generalized_binomial(long k, long j) {
  Rational out(1);
  for (long i = 0; i < j; ++i) {
    out *= Rational(k - i);
    out /= Rational(i + 1);
  }
  return out;
}

// x(x-1)...(x-k+1)
inline Integer falling_factorial(long x, long k) {
  Integer out(1);
  for (long i = 0; i < k; ++i) out *= (x - i);
  return out;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace opera
