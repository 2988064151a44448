#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ffm {

/// Thrown when an enumeration would exceed the configured object budget.
/// The message names the limiting parameter so callers can report it.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a floating-point subroutine (root finder) fails to converge.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Cap on the number of objects any single enumeration may visit.
struct Budget {
  std::uint64_t max_objects = 10'000'000;

  void check(std::uint64_t n, const std::string& what) const {
    if (n > max_objects) {
      throw budget_error(what + " = " + std::to_string(n) +
                         " exceeds enumeration budget " +
                         std::to_string(max_objects));
    }
  }

  /// q^e if within budget, else throws naming `what`.
  std::uint64_t checked_pow(std::uint64_t q, unsigned e,
                            const std::string& what) const {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < e; ++i) {
      if (v > max_objects / q) {
        throw budget_error(what + " = " + std::to_string(q) + "^" +
                           std::to_string(e) + " exceeds enumeration budget " +
                           std::to_string(max_objects));
      }
      v *= q;
    }
    check(v, what);
    return v;
  }
};

}  // namespace ffm
