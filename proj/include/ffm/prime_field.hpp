#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ffm {

/// The coefficient field F_q for an odd prime q. Elements are canonical
/// representatives in [0, q) stored as uint32_t; q is small enough that
/// products fit in uint64_t without reduction tricks.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t q) : q_(q) {
    if (q < 3 || q % 2 == 0 || !is_prime(q)) {
      throw std::domain_error("field cardinality must be an odd prime >= 3, got " +
                              std::to_string(q));
    }
  }

  std::uint32_t q() const { return q_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + q_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((std::uint64_t{a} * b) % q_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    std::uint32_t b = a % q_;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero field element");
    return pow(a, q_ - 2);
  }

  /// Quadratic character of the multiplicative group: +1 for nonzero
  /// squares, -1 for non-squares, 0 for zero.
  int legendre(std::uint32_t a) const {
    if (a % q_ == 0) return 0;
    return pow(a, (q_ - 1) / 2) == 1 ? 1 : -1;
  }

  bool operator==(const PrimeField& o) const { return q_ == o.q_; }
  bool operator!=(const PrimeField& o) const { return q_ != o.q_; }

  static bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

 private:
  std::uint32_t q_;
};

}  // namespace ffm
