#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffm/characters.hpp"
#include "ffm/errors.hpp"
#include "ffm/family.hpp"
#include "ffm/lfunction.hpp"
#include "ffm/numbers.hpp"
#include "ffm/parallel.hpp"
#include "ffm/quadratic_value.hpp"
#include "ffm/sieve.hpp"

namespace ffm {

/// One experiment row. Raw sums are exact ring elements; floats are
/// renderings for the report. x = -1 marks "no truncation parameter".
struct MomentReport {
  explicit MomentReport(std::uint32_t q_)
      : q(q_),
        moment(QuadraticValue::zero(q_)),
        s1(QuadraticValue::zero(q_)),
        s2(QuadraticValue::zero(q_)) {}

  std::uint32_t q;
  int genus = 0;
  int k = 0;
  int x = -1;
  Int family_size = 0;
  QuadraticValue moment;  // raw exact sum of L(1/2)^k (or of the S-pieces)
  QuadraticValue s1, s2;
  bool has_holder = false;
  bool holder_ok = true;
  bool degenerate = false;
  double holder_bound = 0.0;     // S1^k / S2^{k-1}
  double moment_float = 0.0;     // raw sum
  double normalized_moment = 0.0;  // raw sum / family size
  double seconds = 0.0;
};

/// Default truncation degree floor(2(2g)/(15k)) from the large-genus
/// analysis; near zero at desk scale, so callers expose x as a knob.
inline int default_cutoff(int g, int k) {
  if (g < 1 || k < 1) throw std::domain_error("cutoff needs g, k >= 1");
  return (4 * g) / (15 * k);
}

/// A(D) = sum over monic n with deg n <= x of chi_D(n) / |n|^{1/2},
/// assembled from the evaluator's shell sums for the current discriminant.
inline QuadraticValue dirichlet_from_shells(const ChiEvaluator& eval, int x) {
  const std::uint32_t q = eval.field().q();
  Rat a = 0, b = 0;
  for (int m = 0; m <= x; ++m) {
    const Rat shell(eval.shell_sum(m), int_pow(Int(q), unsigned(m / 2)));
    if (m % 2 == 0) {
      a += shell;
    } else {
      b += shell;
    }
  }
  return QuadraticValue(q, a, b);
}

inline QuadraticValue truncated_dirichlet(const QuadraticCharacter& chr,
                                          int x, ChiEvaluator& eval) {
  if (x < 0) throw std::domain_error("truncation degree must be >= 0");
  if (eval.max_degree() < x) {
    throw std::domain_error("chi evaluator does not cover degree " +
                            std::to_string(x));
  }
  eval.set_discriminant(chr.discriminant());
  return dirichlet_from_shells(eval, x);
}

namespace detail {

struct SweepSums {
  Rat s1a, s1b, s2a, s2b, ma, mb;
  Int count = 0;

  void add_s1(const QuadraticValue& v) { s1a += v.rational_part(); s1b += v.root_part(); }
  void add_s2(const QuadraticValue& v) { s2a += v.rational_part(); s2b += v.root_part(); }
  void add_m(const QuadraticValue& v) { ma += v.rational_part(); mb += v.root_part(); }
};

/// Shared family sweep: computes sums of L^k and, when x >= 0, the Hoelder
/// pieces S1 = sum L A^{k-1} and S2 = sum A^k. Partitioned over the monic
/// rank space; exact partial sums combine in range order.
inline SweepSums sweep_family(const FamilySpec& fam, int k, int x,
                              const IrreducibleSieve& sieve,
                              const Budget& budget, unsigned threads) {
  const int max_deg = std::max(2 * fam.genus, x);
  const std::uint64_t span = family_span(fam, budget);
  auto work = [&](std::uint64_t from, std::uint64_t to) -> SweepSums {
    SweepSums acc;
    ChiEvaluator eval(sieve, max_deg);
    for_each_discriminant(fam, from, to, [&](const Polynomial& d) {
      eval.set_discriminant(d);
      LPolynomial L;
      L.q = fam.field.q();
      L.genus = fam.genus;
      L.c.resize(std::size_t(2 * fam.genus) + 1);
      for (int n = 0; n <= 2 * fam.genus; ++n) {
        L.c[std::size_t(n)] = eval.shell_sum(n);
      }
      const QuadraticValue lval = central_value(L);
      acc.add_m(lval.pow(unsigned(k)));
      if (x >= 0) {
        const QuadraticValue a = dirichlet_from_shells(eval, x);
        acc.add_s1(lval * a.pow(unsigned(k - 1)));
        acc.add_s2(a.pow(unsigned(k)));
      }
      acc.count += 1;
    });
    return acc;
  };
  SweepSums total;
  for (const SweepSums& p : run_partitions<SweepSums>(span, threads, work)) {
    total.s1a += p.s1a; total.s1b += p.s1b;
    total.s2a += p.s2a; total.s2b += p.s2b;
    total.ma += p.ma;   total.mb += p.mb;
    total.count += p.count;
  }
  return total;
}

}  // namespace detail

/// Exact k-th moment of L(1/2, chi_D) over the family; k = 0 degenerates
/// to the family size.
inline MomentReport family_moment(const FamilySpec& fam, int k,
                                  const IrreducibleSieve& sieve,
                                  const Budget& budget = {},
                                  unsigned threads = 1) {
  if (k < 0) throw std::domain_error("moment order must be >= 0");
  const auto t0 = std::chrono::steady_clock::now();
  MomentReport rep(fam.field.q());
  rep.genus = fam.genus;
  rep.k = k;
  const detail::SweepSums sums =
      detail::sweep_family(fam, k, -1, sieve, budget, threads);
  rep.family_size = sums.count;
  rep.moment = QuadraticValue(fam.field.q(), sums.ma, sums.mb);
  rep.moment_float = rep.moment.to_double();
  rep.normalized_moment = rep.moment_float / to_double(rep.family_size);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Assembles the Hoelder bound S1^k / S2^{k-1} from exact sums and checks
/// the inequality S1^k <= M S2^{k-1} by exact sign analysis. S2 = 0 is
/// reported as degenerate, not an error.
inline void finish_holder(MomentReport& rep, const QuadraticValue& s1,
                          const QuadraticValue& s2, const QuadraticValue& m,
                          int k) {
  rep.has_holder = true;
  rep.s1 = s1;
  rep.s2 = s2;
  if (s2.is_zero()) {
    rep.degenerate = true;
    rep.holder_bound = 0.0;
    rep.holder_ok = s1.is_zero();  // both sides vanish
    return;
  }
  const QuadraticValue lhs = s1.pow(unsigned(k));
  const QuadraticValue rhs = m * s2.pow(unsigned(k - 1));
  rep.holder_ok = (rhs - lhs).sign() >= 0;
  rep.holder_bound = lhs.to_double() / s2.pow(unsigned(k - 1)).to_double();
}

/// The chain S1 = sum L A^{k-1}, S2 = sum A^k, with the unconditional
/// lower bound S1^k / S2^{k-1} <= sum L^k verified in exact arithmetic.
inline MomentReport holder_chain(const FamilySpec& fam, int k, int x,
                                 const IrreducibleSieve& sieve,
                                 const Budget& budget = {},
                                 unsigned threads = 1) {
  if (k < 2 || k % 2 != 0) {
    throw std::domain_error("Hoelder chain needs even k >= 2");
  }
  if (x < 0) throw std::domain_error("truncation degree must be >= 0");
  budget.checked_pow(fam.field.q(), unsigned(x), "truncation shell q^x");
  const auto t0 = std::chrono::steady_clock::now();
  MomentReport rep(fam.field.q());
  rep.genus = fam.genus;
  rep.k = k;
  rep.x = x;
  const detail::SweepSums sums =
      detail::sweep_family(fam, k, x, sieve, budget, threads);
  rep.family_size = sums.count;
  rep.moment = QuadraticValue(fam.field.q(), sums.ma, sums.mb);
  rep.moment_float = rep.moment.to_double();
  rep.normalized_moment = rep.moment_float / to_double(rep.family_size);
  finish_holder(rep,
                QuadraticValue(fam.field.q(), sums.s1a, sums.s1b),
                QuadraticValue(fam.field.q(), sums.s2a, sums.s2b),
                rep.moment, k);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Exact count of family discriminants coprime to f, with the sieve-density
/// main term q^{2g+1} (1 - 1/q) prod_{P|f} |P|/(|P|+1) and the residual
/// scaled by |D|^{1/2}.
struct SquarefreeCoprimeCount {
  Int exact = 0;
  Rat main_term = 0;
  double residual = 0.0;
};

inline SquarefreeCoprimeCount squarefree_coprime_count(
    const Polynomial& f, const FamilySpec& fam, const IrreducibleSieve& sieve,
    const Budget& budget = {}) {
  if (f.is_zero() || !f.is_monic()) {
    throw std::domain_error("coprimality count needs a monic nonzero f");
  }
  SquarefreeCoprimeCount out;
  for_each_discriminant(fam, budget, [&](const Polynomial& d) {
    if (gcd(d, f).degree() == 0) out.exact += 1;
  });
  const std::uint32_t q = fam.field.q();
  Rat main = Rat(fam.abs_discriminant()) * Rat(q - 1, q);
  main *= radical_weight(factorize(f, sieve), fam.field);
  out.main_term = main;
  out.residual = to_double(Rat(out.exact) - main) /
                 std::sqrt(to_double(fam.abs_discriminant()));
  return out;
}

/// Exact k-th moment over monic irreducibles of odd degree n (each is a
/// valid family discriminant); normalized by pi_A(n). The sieve count is
/// cross-checked against the necklace formula.
inline MomentReport prime_moment(const PrimeField& field, int n, int k,
                                 const IrreducibleSieve& sieve,
                                 const Budget& budget = {},
                                 unsigned threads = 1) {
  if (n < 1 || n % 2 == 0) {
    throw std::domain_error("prime moments need odd degree n");
  }
  if (k < 0) throw std::domain_error("moment order must be >= 0");
  if (sieve.degree_max() < n) {
    throw budget_error("prime moment at degree " + std::to_string(n) +
                       " exceeds sieve bound " +
                       std::to_string(sieve.degree_max()));
  }
  budget.checked_pow(field.q(), unsigned(n), "prime family span q^n");
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::uint64_t>& ranks = sieve.ranks_of_degree(n);
  if (Int(ranks.size()) != count_irreducibles(field, n)) {
    throw std::logic_error("sieve count disagrees with the necklace formula");
  }
  MomentReport rep(field.q());
  rep.genus = (n - 1) / 2;
  rep.k = k;
  rep.family_size = Int(ranks.size());

  const int g = rep.genus;
  auto work = [&](std::uint64_t from, std::uint64_t to) -> detail::SweepSums {
    detail::SweepSums acc;
    ChiEvaluator eval(sieve, 2 * g);
    for (std::uint64_t i = from; i < to; ++i) {
      const Polynomial p = monic_of_rank(field, n, ranks[std::size_t(i)]);
      eval.set_discriminant(p);
      LPolynomial L;
      L.q = field.q();
      L.genus = g;
      L.c.resize(std::size_t(2 * g) + 1);
      for (int m = 0; m <= 2 * g; ++m) L.c[std::size_t(m)] = eval.shell_sum(m);
      acc.add_m(central_value(L).pow(unsigned(k)));
      acc.count += 1;
    }
    return acc;
  };
  detail::SweepSums total;
  for (const auto& p :
       run_partitions<detail::SweepSums>(ranks.size(), threads, work)) {
    total.ma += p.ma;
    total.mb += p.mb;
    total.count += p.count;
  }
  rep.moment = QuadraticValue(field.q(), total.ma, total.mb);
  rep.moment_float = rep.moment.to_double();
  rep.normalized_moment = rep.moment_float / to_double(rep.family_size);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace ffm
