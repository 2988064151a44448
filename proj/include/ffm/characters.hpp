#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffm/errors.hpp"
#include "ffm/family.hpp"
#include "ffm/numbers.hpp"
#include "ffm/polynomial.hpp"
#include "ffm/sieve.hpp"

namespace ffm {

namespace detail {

/// In-place a %= b on raw little-endian digit vectors, b monic.
inline void mod_in_place(std::vector<std::uint32_t>& a,
                         const std::vector<std::uint32_t>& b,
                         const PrimeField& F) {
  const std::size_t db = b.size();
  while (a.size() >= db) {
    const std::uint32_t c = a.back();
    const std::size_t k = a.size() - db;
    if (c != 0) {
      for (std::size_t i = 0; i + 1 < db; ++i) {
        a[k + i] = F.sub(a[k + i], F.mul(c, b[i]));
      }
    }
    a.pop_back();
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
}

/// Euclidean evaluation of (a / b) for monic b. Consumes both buffers.
///
/// Uses the reciprocity law for monic coprime arguments,
///   (a/b) = (b/a) * (-1)^{((q-1)/2) deg a deg b},
/// together with the constant rule (alpha/b) = chi(alpha)^{deg b} where
/// chi is the quadratic character of F_q^*.
inline int jacobi_kernel(std::vector<std::uint32_t>& a,
                         std::vector<std::uint32_t>& b, const PrimeField& F) {
  const bool half_odd = ((F.q() - 1) / 2) % 2 == 1;
  int result = 1;
  mod_in_place(a, b, F);
  while (true) {
    const int db = int(b.size()) - 1;
    if (db == 0) return result;
    if (a.empty()) return 0;
    const std::uint32_t alpha = a.back();
    if (alpha != 1) {
      if (db % 2 == 1 && F.legendre(alpha) == -1) result = -result;
      const std::uint32_t inv = F.inv(alpha);
      for (auto& v : a) v = F.mul(v, inv);
    }
    const int da = int(a.size()) - 1;
    if (half_odd && da % 2 == 1 && db % 2 == 1) result = -result;
    std::swap(a, b);
    mod_in_place(a, b, F);
  }
}

}  // namespace detail

/// Quadratic residue symbol (f / P) for monic irreducible P, by the Euler
/// criterion: 0 if P | f, else f^{(|P|-1)/2} reduced mod P, which lands in
/// {+1, -1} inside the base field.
inline int quadratic_residue_symbol(const Polynomial& f, const Polynomial& p) {
  if (!p.is_monic() || !is_irreducible(p)) {
    throw std::domain_error("residue symbol modulus must be monic irreducible: " +
                            to_text(p));
  }
  const Polynomial fm = f % p;
  if (fm.is_zero()) return 0;
  const Int e = (int_pow(Int(f.q()), unsigned(p.degree())) - 1) / 2;
  const Polynomial r = pow_mod(fm, e, p);
  if (r.is_one()) return 1;
  if (r.degree() == 0 && r.coeff(0) == f.q() - 1) return -1;
  throw std::logic_error("Euler criterion did not land in {+1,-1}");
}

/// Jacobi symbol (f / n) for monic n, by the Euclidean reciprocity walk.
/// This is the fast default path.
inline int jacobi_symbol(const Polynomial& f, const Polynomial& n) {
  if (f.field() != n.field()) {
    throw std::domain_error("jacobi_symbol: mixed fields");
  }
  if (n.is_zero() || !n.is_monic()) {
    throw std::domain_error("jacobi_symbol: modulus must be monic, got " +
                            to_text(n));
  }
  std::vector<std::uint32_t> a = f.coeffs();
  std::vector<std::uint32_t> b = n.coeffs();
  return detail::jacobi_kernel(a, b, f.field());
}

/// Jacobi symbol by factoring the modulus and multiplying prime symbols.
/// Independent of the Euclidean path; the two must agree everywhere.
inline int jacobi_symbol_factored(const Polynomial& f, const Polynomial& n,
                                  const IrreducibleSieve& sieve) {
  if (n.is_zero() || !n.is_monic()) {
    throw std::domain_error("jacobi_symbol: modulus must be monic, got " +
                            to_text(n));
  }
  if (n.degree() == 0) return 1;
  int out = 1;
  for (const auto& [p, e] : factorize(n, sieve).factors) {
    const Polynomial fm = f % p;
    int s;
    if (fm.is_zero()) {
      s = 0;
    } else {
      const Int ex = (int_pow(Int(f.q()), unsigned(p.degree())) - 1) / 2;
      const Polynomial r = pow_mod(fm, ex, p);
      s = r.is_one() ? 1 : -1;
    }
    if (s == 0) return 0;
    if (e % 2 == 1) out *= s;
  }
  return out;
}

/// The character chi_D(f) = (D / f) for a monic square-free discriminant D
/// of odd degree. Completely multiplicative in f and zero exactly on
/// arguments sharing a factor with D.
class QuadraticCharacter {
 public:
  QuadraticCharacter(Polynomial d, const IrreducibleSieve& sieve)
      : d_(std::move(d)), factorization_(validate_and_factor(d_, sieve)) {}

  const Polynomial& discriminant() const { return d_; }
  const Factorization& discriminant_factors() const { return factorization_; }
  int genus() const { return (d_.degree() - 1) / 2; }
  std::uint32_t q() const { return d_.q(); }

  int chi(const Polynomial& f) const {
    if (f.is_zero() || !f.is_monic()) {
      throw std::domain_error("chi_D expects a monic nonzero argument");
    }
    return jacobi_symbol(d_, f);
  }

 private:
  static Factorization validate_and_factor(const Polynomial& d,
                                           const IrreducibleSieve& sieve) {
    if (d.is_zero() || !d.is_monic() || d.degree() % 2 == 0) {
      throw std::domain_error(
          "discriminant must be monic of odd degree, got " + to_text(d));
    }
    if (!is_squarefree(d)) {
      throw std::domain_error("discriminant must be square-free, got " +
                              to_text(d));
    }
    return factorize(d, sieve);
  }

  Polynomial d_;
  Factorization factorization_;
};

/// Evaluates chi_D on every monic polynomial of degree <= N for one D at a
/// time, walking the sieve's smallest-prime-factor table so each composite
/// costs one multiply. Irreducible arguments go through the Euclidean
/// kernel. One instance per worker thread; rows are reused across D.
class ChiEvaluator {
 public:
  ChiEvaluator(const IrreducibleSieve& sieve, int max_degree)
      : sieve_(sieve), max_deg_(max_degree) {
    if (max_degree < 0 || max_degree > sieve.degree_max()) {
      throw std::domain_error("ChiEvaluator degree " + std::to_string(max_degree) +
                              " not covered by sieve bound " +
                              std::to_string(sieve.degree_max()));
    }
    if (max_degree > 0 &&
        max_degree * std::log2(double(sieve.field().q())) > 62) {
      throw budget_error("shell sums would overflow int64 at degree " +
                         std::to_string(max_degree));
    }
    rows_.resize(std::size_t(max_deg_) + 1);
    std::uint64_t qn = 1;
    for (int n = 0; n <= max_deg_; ++n) {
      rows_[std::size_t(n)].assign(qn, 0);
      qn *= sieve.field().q();
    }
  }

  const PrimeField& field() const { return sieve_.field(); }
  int max_degree() const { return max_deg_; }
  const IrreducibleSieve& sieve() const { return sieve_; }

  void set_discriminant(const Polynomial& d) {
    const PrimeField& F = field();
    rows_[0][0] = 1;
    std::uint64_t qn = 1;
    for (int n = 1; n <= max_deg_; ++n) {
      qn *= F.q();
      auto& row = rows_[std::size_t(n)];
      for (std::uint64_t r = 0; r < qn; ++r) {
        if (sieve_.is_irreducible_rank(n, r)) {
          a_ = d.coeffs();
          fill_monic(b_, n, r, F.q());
          row[r] = static_cast<std::int8_t>(detail::jacobi_kernel(a_, b_, F));
        } else {
          int pd;
          std::uint64_t pr, cr;
          sieve_.split_rank(n, r, &pd, &pr, &cr);
          row[r] = static_cast<std::int8_t>(rows_[std::size_t(pd)][pr] *
                                            rows_[std::size_t(n - pd)][cr]);
        }
      }
    }
  }

  int value(int n, std::uint64_t rank) const {
    return rows_[std::size_t(n)][rank];
  }

  /// Exact sum of chi_D over monic polynomials of degree n.
  std::int64_t shell_sum(int n) const {
    std::int64_t s = 0;
    for (auto v : rows_[std::size_t(n)]) s += v;
    return s;
  }

 private:
  static void fill_monic(std::vector<std::uint32_t>& out, int degree,
                         std::uint64_t rank, std::uint32_t q) {
    out.resize(std::size_t(degree) + 1);
    for (int i = 0; i < degree; ++i) {
      out[std::size_t(i)] = static_cast<std::uint32_t>(rank % q);
      rank /= q;
    }
    out[std::size_t(degree)] = 1;
  }

  const IrreducibleSieve& sieve_;
  int max_deg_;
  std::vector<std::vector<std::int8_t>> rows_;
  std::vector<std::uint32_t> a_, b_;
};

/// One character-sum experiment row: exact sum over a fixed-degree shell
/// and its size relative to |D|^{1/2}.
struct CharSumRecord {
  std::uint32_t q = 0;
  std::string modulus;  // discriminant, text format
  int x = 0;
  Int sum;
  double ratio = 0.0;  // |sum| / |D|^{1/2}
};

/// Exact sum of chi_D over the monic degree-x shell. The trivial bound is
/// |sum| <= q^x; the interesting scale is |D|^{1/2}.
inline CharSumRecord char_sum_fixed_degree(const QuadraticCharacter& chr,
                                           int x, const Budget& budget = {}) {
  if (x < 0) throw std::domain_error("char sum degree must be >= 0");
  budget.checked_pow(chr.q(), unsigned(x), "char sum shell q^x");
  Int sum = 0;
  if (x == 0) {
    sum = 1;
  } else {
    for (const Polynomial& f :
         MonicRange(chr.discriminant().field(), x, budget)) {
      sum += chr.chi(f);
    }
  }
  CharSumRecord rec;
  rec.q = chr.q();
  rec.modulus = to_text(chr.discriminant());
  rec.x = x;
  rec.sum = sum;
  rec.ratio = to_double(Int(abs(sum))) /
              std::sqrt(to_double(chr.discriminant().norm()));
  return rec;
}

/// Family-orthogonality experiment: sum of (D / n) over the whole family.
/// For square n the symbol is the indicator of gcd(D, n) = 1, so the sum
/// counts coprime discriminants; for non-square n the interesting scale is
/// |D|^{1/2} |n|^{1/4}.
struct OrthogonalityRecord {
  std::uint32_t q = 0;
  int genus = 0;
  std::string modulus;
  bool modulus_is_square = false;
  Int sum;
  double ratio = 0.0;  // |sum| / (|D|^{1/2} |n|^{1/4}); non-square n only
};

inline OrthogonalityRecord orthogonality_sum(const Polynomial& n,
                                             const FamilySpec& fam,
                                             const IrreducibleSieve& sieve,
                                             const Budget& budget = {}) {
  if (n.is_zero() || !n.is_monic()) {
    throw std::domain_error("orthogonality modulus must be monic nonzero");
  }
  OrthogonalityRecord rec;
  rec.q = fam.field.q();
  rec.genus = fam.genus;
  rec.modulus = to_text(n);
  rec.modulus_is_square = true;
  for (const auto& [p, e] : factorize(n, sieve).factors) {
    if (e % 2 != 0) rec.modulus_is_square = false;
  }
  Int sum = 0;
  for_each_discriminant(fam, budget,
                        [&](const Polynomial& d) { sum += jacobi_symbol(d, n); });
  rec.sum = sum;
  if (!rec.modulus_is_square) {
    const double scale =
        std::sqrt(to_double(fam.abs_discriminant())) *
        std::pow(to_double(n.norm()), 0.25);
    rec.ratio = to_double(Int(abs(sum))) / scale;
  }
  return rec;
}

}  // namespace ffm
