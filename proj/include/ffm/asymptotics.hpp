#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffm/errors.hpp"
#include "ffm/numbers.hpp"
#include "ffm/polynomial.hpp"
#include "ffm/sieve.hpp"

namespace ffm {

/// Power series in u with rational coefficients, truncated at a fixed
/// order; multiplication drops everything beyond the truncation.
struct SeriesPoly {
  std::vector<Rat> z;  // z[0] .. z[N]

  explicit SeriesPoly(int order) : z(std::size_t(order) + 1, Rat(0)) {}

  int order() const { return static_cast<int>(z.size()) - 1; }

  static SeriesPoly one(int order) {
    SeriesPoly s(order);
    s.z[0] = 1;
    return s;
  }

  SeriesPoly operator*(const SeriesPoly& o) const {
    SeriesPoly out(order());
    for (int i = 0; i <= order(); ++i) {
      if (z[std::size_t(i)] == 0) continue;
      for (int j = 0; i + j <= order() && j <= o.order(); ++j) {
        if (o.z[std::size_t(j)] == 0) continue;
        out.z[std::size_t(i + j)] += z[std::size_t(i)] * o.z[std::size_t(j)];
      }
    }
    return out;
  }

  bool is_zero() const {
    for (const auto& v : z) {
      if (v != 0) return false;
    }
    return true;
  }
};

/// (1 + v)^e truncated, where v has zero constant term and e may be huge
/// (an irreducible count): binomial series sum_j C(e, j) v^j, which is
/// finite because v^j vanishes past the truncation order.
inline SeriesPoly binomial_power(const SeriesPoly& v, const Int& e) {
  SeriesPoly out = SeriesPoly::one(v.order());
  SeriesPoly vj = SeriesPoly::one(v.order());
  Rat coeff = 1;
  for (int j = 1; j <= v.order(); ++j) {
    vj = vj * v;
    if (vj.is_zero()) break;
    coeff = coeff * Rat(e - (j - 1)) / Rat(j);
    for (int i = 0; i <= v.order(); ++i) {
      out.z[std::size_t(i)] += coeff * vj.z[std::size_t(i)];
    }
  }
  return out;
}

/// Coefficients of the weighted divisor series sum_m d_k(m^2) a_m u^{deg m}
/// via its Euler product. The degree-d local factor is
///   1 + (q^d / (q^d + 1)) * sum_{j>=1} C(2j+k-1, k-1) u^{dj},
/// raised to the number of irreducibles of degree d.
inline SeriesPoly zf_euler_coeffs(const PrimeField& field, int k, int order) {
  if (k < 1) throw std::domain_error("divisor order k must be >= 1");
  if (order < 0) throw std::domain_error("series order must be >= 0");
  SeriesPoly out = SeriesPoly::one(order);
  for (int d = 1; d <= order; ++d) {
    const Int qd = int_pow(Int(field.q()), unsigned(d));
    const Rat a_p(qd, qd + 1);
    SeriesPoly v(order);
    for (int j = 1; d * j <= order; ++j) {
      v.z[std::size_t(d * j)] =
          a_p * Rat(binomial(Int(2 * j + k - 1), unsigned(k - 1)));
    }
    out = out * binomial_power(v, count_irreducibles(field, d));
  }
  return out;
}

/// The per-term data of the weighted divisor series: the radical weight
/// a_m in (0, 1] and the divisor count d_k(m^2).
struct WeightedCoefficient {
  Rat weight;          // a_m, depends only on the radical of m
  Int d_k_of_square;   // d_k(m^2)

  Rat term() const { return Rat(d_k_of_square) * weight; }
};

inline WeightedCoefficient weighted_coefficient(const Factorization& fac,
                                                const PrimeField& field,
                                                int k) {
  WeightedCoefficient out;
  out.weight = radical_weight(fac, field);
  out.d_k_of_square = 1;
  for (const auto& [p, e] : fac.factors) {
    out.d_k_of_square *= binomial(Int(2 * e + k - 1), unsigned(k - 1));
  }
  return out;
}

/// The same coefficients by direct summation: factorize every monic m of
/// each degree and accumulate d_k(m^2) a_m. This is the oracle the Euler
/// path is checked against.
inline SeriesPoly zf_direct_coeffs(const PrimeField& field, int k, int order,
                                   const IrreducibleSieve& sieve,
                                   const Budget& budget = {}) {
  if (k < 1) throw std::domain_error("divisor order k must be >= 1");
  if (order < 0) throw std::domain_error("series order must be >= 0");
  SeriesPoly out(order);
  out.z[0] = 1;
  for (int n = 1; n <= order; ++n) {
    budget.checked_pow(field.q(), unsigned(n), "direct series shell q^n");
    Rat sum = 0;
    for (const Polynomial& m : MonicRange(field, n, budget)) {
      sum += weighted_coefficient(factorize(m, sieve), field, k).term();
    }
    out.z[std::size_t(n)] = sum;
  }
  return out;
}

/// sum_{deg m <= z} d_k(m^2) a_m / |m| = sum_{n <= z} z_n q^{-n}, through
/// the cheap Euler path.
inline Rat partial_weighted_sum(const PrimeField& field, int k, int z) {
  if (z < 0) throw std::domain_error("cutoff must be >= 0");
  const SeriesPoly s = zf_euler_coeffs(field, k, z);
  Rat out = 0;
  Rat qinv_pow = 1;
  const Rat qinv(1, field.q());
  for (int n = 0; n <= z; ++n) {
    out += s.z[std::size_t(n)] * qinv_pow;
    qinv_pow *= qinv;
  }
  return out;
}

/// Truncated value of the convergent part of the series at the edge of
/// convergence, and the assembled leading constant.
///
/// At s = 1 the degree-d local factor of the convergent product is
///   F_d = (1 + a_d (E(x) - 1)) (1 - x)^K,   x = q^{-d},  K = k(k+1)/2,
/// where E(x) = sum_{j>=0} C(2j+k-1, k-1) x^j has the closed form
///   E(x) = (sum_{2i <= k} C(k, 2i) x^i) / (1 - x)^k,
/// the even part of (1 - y)^{-k} under y^2 = x. alpha is the product of
/// F_d^{pi_A(d)} over d <= d_max, exact; increments |F_d^{pi_A(d)} - 1|
/// must shrink monotonically for the truncation to be trusted.
struct LeadingConstant {
  Rat alpha = 0;
  double c_k = 0.0;  // log(q)^K / (K-1)! * alpha
  std::vector<double> increments;  // |F_d^{pi_A(d)} - 1| for d = 1..d_max
};

inline Rat convergent_local_factor(const PrimeField& field, int k, int d) {
  const int bigk = k * (k + 1) / 2;
  const Rat x(1, int_pow(Int(field.q()), unsigned(d)));
  Rat even_part = 0;
  for (int i = 0; 2 * i <= k; ++i) {
    even_part += Rat(binomial(Int(k), unsigned(2 * i))) * rat_pow(x, unsigned(i));
  }
  const Rat e_x = even_part / rat_pow(1 - x, unsigned(k));
  const Rat a_d = Rat(1) / (1 + x);  // q^d / (q^d + 1)
  const Rat t = 1 + a_d * (e_x - 1);
  return t * rat_pow(1 - x, unsigned(bigk));
}

inline LeadingConstant leading_constant(const PrimeField& field, int k,
                                        int d_max) {
  if (k < 1 || d_max < 1) throw std::domain_error("need k >= 1 and d_max >= 1");
  const int bigk = k * (k + 1) / 2;
  LeadingConstant out;
  out.alpha = 1;
  for (int d = 1; d <= d_max; ++d) {
    const Int pi = count_irreducibles(field, d);
    if (pi > Int(1) << 32) {
      throw budget_error("leading constant truncation d_max = " +
                         std::to_string(d_max) + " needs factor exponents > 2^32");
    }
    const Rat factor = rat_pow(convergent_local_factor(field, k, d),
                               pi.convert_to<unsigned>());
    out.increments.push_back(std::fabs(to_double(factor - 1)));
    out.alpha *= factor;
  }
  const double logq = std::log(double(field.q()));
  out.c_k = std::pow(logq, bigk) / to_double(factorial(unsigned(bigk - 1))) *
            to_double(out.alpha);
  return out;
}

/// Shell-sum table: z_x against the expected q^x x^{K-1} scale. The ratio
/// column counts degrees (z = log_q of the norm); its limit is the same
/// constant the s-plane residue produces, so the stabilization of
/// ratio / c_k toward 1 is the diagnostic.
struct ShellRow {
  int x = 0;
  Rat z_x = 0;
  double ratio = 0.0;  // z_x / (q^x x^{K-1})
};

inline std::vector<ShellRow> shell_sum_diagnostic(const PrimeField& field,
                                                  int k, int x_max) {
  if (x_max < 1) throw std::domain_error("x_max must be >= 1");
  const int bigk = k * (k + 1) / 2;
  const SeriesPoly s = zf_euler_coeffs(field, k, x_max);
  std::vector<ShellRow> rows;
  for (int x = 1; x <= x_max; ++x) {
    ShellRow row;
    row.x = x;
    row.z_x = s.z[std::size_t(x)];
    const double scale = std::pow(double(field.q()), x) *
                         std::pow(double(x), bigk - 1);
    row.ratio = to_double(row.z_x) / scale;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Partial sums S(L') = sum_{deg l <= L', l monic} a_{r h l} / |l| for
/// L' = 0..L. First differences approach a positive constant (the sum
/// grows linearly in the cutoff).
inline std::vector<Rat> restricted_harmonic_partials(
    const Polynomial& r, const Polynomial& h, int cutoff,
    const IrreducibleSieve& sieve, const Budget& budget = {}) {
  if (r.is_zero() || !r.is_monic() || !is_squarefree(r)) {
    throw std::domain_error("r must be monic square-free");
  }
  if (h.is_zero() || !h.is_monic()) {
    throw std::domain_error("h must be monic");
  }
  if (cutoff < 0) throw std::domain_error("cutoff must be >= 0");
  const Polynomial rh = r * h;
  if (rh.degree() + cutoff > sieve.degree_max()) {
    throw budget_error("harmonic sum needs factorizations up to degree " +
                       std::to_string(rh.degree() + cutoff) +
                       " but sieve stops at " +
                       std::to_string(sieve.degree_max()));
  }
  std::vector<Rat> partials;
  Rat acc = radical_weight(factorize(rh, sieve), r.field());  // l = 1 term
  partials.push_back(acc);
  for (int ld = 1; ld <= cutoff; ++ld) {
    budget.checked_pow(r.field().q(), unsigned(ld), "harmonic shell q^L");
    const Rat inv_norm(1, int_pow(Int(r.field().q()), unsigned(ld)));
    for (const Polynomial& l : MonicRange(r.field(), ld, budget)) {
      acc += radical_weight(factorize(rh * l, sieve), r.field()) * inv_norm;
    }
    partials.push_back(acc);
  }
  return partials;
}

inline Rat restricted_harmonic_sum(const Polynomial& r, const Polynomial& h,
                                   int cutoff, const IrreducibleSieve& sieve,
                                   const Budget& budget = {}) {
  return restricted_harmonic_partials(r, h, cutoff, sieve, budget).back();
}

}  // namespace ffm
