#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffm/errors.hpp"
#include "ffm/numbers.hpp"
#include "ffm/polynomial.hpp"

namespace ffm {

/// Prime-power decomposition: unit * product of factors reconstructs the
/// input exactly. Irreducibles are monic, distinct, sorted by (degree, rank).
struct Factorization {
  std::uint32_t unit = 1;
  std::vector<std::pair<Polynomial, int>> factors;
};

/// Sieve of monic irreducibles up to a degree bound, built once by striking
/// proper products, then shared read-only. Alongside the membership bit it
/// records, for every composite rank, the smallest irreducible factor and
/// the cofactor rank, which turns later factorizations into table walks.
class IrreducibleSieve {
 public:
  IrreducibleSieve(PrimeField field, int d_max, const Budget& budget = {})
      : field_(field), d_max_(d_max) {
    if (d_max < 1) throw std::domain_error("sieve degree bound must be >= 1");
    budget.checked_pow(field.q(), unsigned(d_max), "sieve size q^d_max");

    spf_.resize(std::size_t(d_max) + 1);
    irreducible_ranks_.resize(std::size_t(d_max) + 1);
    std::uint64_t qn = 1;
    for (int n = 1; n <= d_max; ++n) {
      qn *= field.q();
      spf_[std::size_t(n)].assign(qn, kUnset);
      // Strike products P*g over irreducibles P with deg P <= n/2; smaller
      // P are visited first, so the first strike records the smallest
      // prime factor.
      for (int dp = 1; dp * 2 <= n; ++dp) {
        for (std::uint64_t pr : irreducible_ranks_[std::size_t(dp)]) {
          const Polynomial p = monic_of_rank(field, dp, pr);
          const int dg = n - dp;
          std::uint64_t cof_count = 1;
          for (int i = 0; i < dg; ++i) cof_count *= field.q();
          for (std::uint64_t gr = 0; gr < cof_count; ++gr) {
            const Polynomial prod = p * monic_of_rank(field, dg, gr);
            auto& slot = spf_[std::size_t(n)][rank_of_monic(prod)];
            if (slot == kUnset) slot = pack(dp, pr, gr);
          }
        }
      }
      auto& irr = irreducible_ranks_[std::size_t(n)];
      for (std::uint64_t r = 0; r < qn; ++r) {
        if (spf_[std::size_t(n)][r] == kUnset) irr.push_back(r);
      }
    }
  }

  const PrimeField& field() const { return field_; }
  int degree_max() const { return d_max_; }

  std::uint64_t count_of_degree(int d) const {
    check_degree(d);
    return irreducible_ranks_[std::size_t(d)].size();
  }

  const std::vector<std::uint64_t>& ranks_of_degree(int d) const {
    check_degree(d);
    return irreducible_ranks_[std::size_t(d)];
  }

  Polynomial irreducible(int d, std::size_t i) const {
    return monic_of_rank(field_, d, ranks_of_degree(d)[i]);
  }

  /// All monic irreducibles of degree <= d_bound, sorted by (degree, rank).
  std::vector<Polynomial> irreducibles_upto(int d_bound) const {
    check_degree(d_bound);
    std::vector<Polynomial> out;
    for (int d = 1; d <= d_bound; ++d) {
      for (std::uint64_t r : irreducible_ranks_[std::size_t(d)]) {
        out.push_back(monic_of_rank(field_, d, r));
      }
    }
    return out;
  }

  bool contains(const Polynomial& f) const {
    if (!f.is_monic() || f.degree() < 1 || f.degree() > d_max_) return false;
    return is_irreducible_rank(f.degree(), rank_of_monic(f));
  }

  bool is_irreducible_rank(int d, std::uint64_t rank) const {
    return spf_[std::size_t(d)][rank] == kUnset;
  }

  /// Smallest prime factor of the monic polynomial with the given rank;
  /// only valid for composite ranks.
  void split_rank(int d, std::uint64_t rank, int* p_deg, std::uint64_t* p_rank,
                  std::uint64_t* cof_rank) const {
    const std::uint64_t v = spf_[std::size_t(d)][rank];
    *p_deg = int(v >> 56);
    *p_rank = (v >> 28) & kMask28;
    *cof_rank = v & kMask28;
  }

 private:
  static constexpr std::uint64_t kUnset = ~std::uint64_t{0};
  static constexpr std::uint64_t kMask28 = (std::uint64_t{1} << 28) - 1;

  static std::uint64_t pack(int p_deg, std::uint64_t p_rank,
                            std::uint64_t cof_rank) {
    return (std::uint64_t(p_deg) << 56) | (p_rank << 28) | cof_rank;
  }

  void check_degree(int d) const {
    if (d < 1 || d > d_max_) {
      throw std::domain_error("degree " + std::to_string(d) +
                              " outside sieve bound " + std::to_string(d_max_));
    }
  }

  PrimeField field_;
  int d_max_;
  std::vector<std::vector<std::uint64_t>> spf_;
  std::vector<std::vector<std::uint64_t>> irreducible_ranks_;
};

/// pi_A(n): number of monic irreducibles of degree n, by the necklace
/// formula (1/n) sum_{d|n} mu(d) q^{n/d}.
inline Int count_irreducibles(const PrimeField& field, int n) {
  if (n < 1) throw std::domain_error("count_irreducibles needs n >= 1");
  auto int_mobius = [](int m) {
    int out = 1;
    for (int d = 2; d * d <= m; ++d) {
      if (m % d == 0) {
        m /= d;
        if (m % d == 0) return 0;
        out = -out;
      }
    }
    if (m > 1) out = -out;
    return out;
  };
  Int total = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d == 0) {
      total += Int(int_mobius(d)) * int_pow(Int(field.q()), unsigned(n / d));
    }
  }
  return total / n;
}

/// Deterministic irreducibility test (Rabin): f of degree n is irreducible
/// iff T^{q^n} == T mod f and gcd(T^{q^{n/l}} - T, f) = 1 for every prime
/// l dividing n.
inline bool is_irreducible(const Polynomial& f) {
  if (f.is_zero() || f.degree() < 1) return false;
  const Polynomial fm = f.make_monic();
  const int n = fm.degree();
  const Polynomial t = Polynomial::variable(f.field());
  const Int q = f.q();
  std::vector<int> prime_divisors;
  int m = n;
  for (int d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      prime_divisors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) prime_divisors.push_back(m);
  for (int l : prime_divisors) {
    const Polynomial h = pow_mod(t, int_pow(q, unsigned(n / l)), fm);
    if (gcd(h - t, fm).degree() != 0) return false;
  }
  return pow_mod(t, int_pow(q, unsigned(n)), fm) == (t % fm);
}

/// Exact factorization. Uses the sieve's smallest-prime-factor table when
/// it covers deg f, otherwise falls back to trial division by sieve entries
/// of degree <= deg f / 2.
inline Factorization factorize(const Polynomial& f, const IrreducibleSieve& sieve) {
  if (f.is_zero()) throw std::domain_error("factorize of zero polynomial");
  if (f.field() != sieve.field()) {
    throw std::domain_error("factorize: polynomial and sieve fields differ");
  }
  Factorization out;
  out.unit = f.leading_coeff();
  Polynomial rem = f.make_monic();
  if (rem.degree() == 0) return out;

  auto push = [&out](const Polynomial& p) {
    if (!out.factors.empty() && out.factors.back().first == p) {
      ++out.factors.back().second;
    } else {
      out.factors.emplace_back(p, 1);
    }
  };

  if (f.degree() <= sieve.degree_max()) {
    // Table walk; smallest factors come first, so runs group naturally.
    int d = rem.degree();
    std::uint64_t rank = rank_of_monic(rem);
    while (d >= 1) {
      if (sieve.is_irreducible_rank(d, rank)) {
        push(monic_of_rank(sieve.field(), d, rank));
        break;
      }
      int pd;
      std::uint64_t pr, cr;
      sieve.split_rank(d, rank, &pd, &pr, &cr);
      push(monic_of_rank(sieve.field(), pd, pr));
      d -= pd;
      rank = cr;
    }
    return out;
  }

  if (f.degree() / 2 > sieve.degree_max()) {
    throw budget_error("factorize: deg f = " + std::to_string(f.degree()) +
                       " needs sieve entries up to degree " +
                       std::to_string(f.degree() / 2) + " but sieve stops at " +
                       std::to_string(sieve.degree_max()));
  }
  for (int d = 1; 2 * d <= f.degree() && rem.degree() > 0; ++d) {
    for (std::uint64_t r : sieve.ranks_of_degree(d)) {
      if (d > rem.degree() / 2) break;
      const Polynomial p = monic_of_rank(sieve.field(), d, r);
      while (true) {
        auto [quot, rest] = rem.divmod(p);
        if (!rest.is_zero()) break;
        push(p);
        rem = quot;
      }
    }
  }
  if (rem.degree() >= 1) push(rem);
  return out;
}

/// 0 unless square-free, else (-1)^{number of irreducible factors}.
inline int mobius(const Polynomial& f, const IrreducibleSieve& sieve) {
  const Factorization fac = factorize(f, sieve);
  for (const auto& [p, e] : fac.factors) {
    if (e > 1) return 0;
  }
  return fac.factors.size() % 2 == 0 ? 1 : -1;
}

/// d_k on a prime power P^e is C(e+k-1, k-1); multiplicative in general.
inline Int divisor_count_k(const Polynomial& f, int k,
                           const IrreducibleSieve& sieve) {
  if (k < 1) throw std::domain_error("divisor_count_k needs k >= 1");
  Int out = 1;
  for (const auto& [p, e] : factorize(f, sieve).factors) {
    out *= binomial(Int(e + k - 1), unsigned(k - 1));
  }
  return out;
}

inline Int divisor_count_k(const Factorization& fac, int k) {
  Int out = 1;
  for (const auto& [p, e] : fac.factors) {
    out *= binomial(Int(e + k - 1), unsigned(k - 1));
  }
  return out;
}

/// The orthogonality weight a_m = prod_{P | m} |P| / (|P| + 1); depends
/// only on the radical of m, and a_1 = 1.
inline Rat radical_weight(const Factorization& fac, const PrimeField& field) {
  Rat out = 1;
  for (const auto& [p, e] : fac.factors) {
    const Int np = int_pow(Int(field.q()), unsigned(p.degree()));
    out *= Rat(np, np + 1);
  }
  return out;
}

}  // namespace ffm
