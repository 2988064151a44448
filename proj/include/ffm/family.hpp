#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ffm/errors.hpp"
#include "ffm/numbers.hpp"
#include "ffm/polynomial.hpp"

namespace ffm {

/// The hyperelliptic family of monic square-free discriminants of odd
/// degree 2g+1 over F_q. Every member has |D| = q^{2g+1}.
struct FamilySpec {
  PrimeField field;
  int genus;

  FamilySpec(PrimeField f, int g) : field(f), genus(g) {
    if (g < 0) throw std::domain_error("genus must be >= 0");
  }

  int discriminant_degree() const { return 2 * genus + 1; }

  Int abs_discriminant() const {
    return int_pow(Int(field.q()), unsigned(discriminant_degree()));
  }

  /// Square-free monic count q^{2g+1} - q^{2g}; for g = 0 every monic
  /// linear qualifies.
  Int size() const {
    if (genus == 0) return Int(field.q());
    return int_pow(Int(field.q()), unsigned(2 * genus + 1)) -
           int_pow(Int(field.q()), unsigned(2 * genus));
  }
};

/// Visit the family over a contiguous rank range [from, to) of the monic
/// degree-(2g+1) rank space, in rank order, filtering to square-free
/// discriminants. Partitioning the rank space partitions the family.
template <typename Fn>
void for_each_discriminant(const FamilySpec& fam, std::uint64_t from,
                           std::uint64_t to, Fn&& fn) {
  for (std::uint64_t r = from; r < to; ++r) {
    Polynomial d = monic_of_rank(fam.field, fam.discriminant_degree(), r);
    if (is_squarefree(d)) fn(d);
  }
}

template <typename Fn>
void for_each_discriminant(const FamilySpec& fam, const Budget& budget, Fn&& fn) {
  const std::uint64_t total = budget.checked_pow(
      fam.field.q(), unsigned(fam.discriminant_degree()), "family span q^(2g+1)");
  for_each_discriminant(fam, 0, total, std::forward<Fn>(fn));
}

inline std::uint64_t family_span(const FamilySpec& fam, const Budget& budget) {
  return budget.checked_pow(fam.field.q(), unsigned(fam.discriminant_degree()),
                            "family span q^(2g+1)");
}

}  // namespace ffm
