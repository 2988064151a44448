#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>

namespace ffm {

// Exact arithmetic carriers. Counts are unbounded integers and sums are
// rationals; doubles appear only at the reporting boundary.
using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;
using BigFloat = boost::multiprecision::mpf_float_50;

inline Int int_pow(const Int& base, unsigned e) {
  Int r = 1;
  Int b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline Rat rat_pow(const Rat& base, unsigned e) {
  Rat r = 1;
  Rat b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

/// Binomial coefficient C(n, k) for small k; n may be a huge integer
/// (needed for binomial-series powers with exponents like pi_A(d)).
inline Int binomial(const Int& n, unsigned k) {
  Int num = 1;
  Int den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= n - Int(i);
    den *= Int(i + 1);
  }
  return num / den;
}

inline Int factorial(unsigned n) {
  Int r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= Int(i);
  return r;
}

inline double to_double(const Rat& r) {
  return static_cast<double>(BigFloat(r));
}

inline double to_double(const Int& n) {
  return static_cast<double>(BigFloat(n));
}

/// Rationals serialize as `num/den` decimal strings, denominator included
/// even when it is 1, so every column parses the same way.
inline std::string rat_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace ffm
