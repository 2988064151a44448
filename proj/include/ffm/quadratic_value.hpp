#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ffm/numbers.hpp"

namespace ffm {

/// Exact number a + b * q^{-1/2} with rational components. Since q is a
/// prime, q^{-1/2} is irrational and the representation is unique, so sign
/// questions can be settled exactly: compare a^2 against b^2/q when the
/// components disagree in sign.
class QuadraticValue {
 public:
  QuadraticValue(std::uint32_t q, Rat a, Rat b)
      : q_(q), a_(std::move(a)), b_(std::move(b)) {}

  static QuadraticValue zero(std::uint32_t q) { return {q, Rat(0), Rat(0)}; }
  static QuadraticValue one(std::uint32_t q) { return {q, Rat(1), Rat(0)}; }
  /// The element q^{-1/2} itself.
  static QuadraticValue root(std::uint32_t q) { return {q, Rat(0), Rat(1)}; }

  std::uint32_t q() const { return q_; }
  const Rat& rational_part() const { return a_; }
  const Rat& root_part() const { return b_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  QuadraticValue operator+(const QuadraticValue& o) const {
    require_same_ring(o);
    return {q_, a_ + o.a_, b_ + o.b_};
  }
  QuadraticValue operator-(const QuadraticValue& o) const {
    require_same_ring(o);
    return {q_, a_ - o.a_, b_ - o.b_};
  }
  QuadraticValue operator*(const QuadraticValue& o) const {
    require_same_ring(o);
    // (a + bt)(a' + b't) with t^2 = 1/q.
    return {q_, a_ * o.a_ + b_ * o.b_ / Rat(q_), a_ * o.b_ + b_ * o.a_};
  }
  QuadraticValue& operator+=(const QuadraticValue& o) {
    require_same_ring(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }

  QuadraticValue pow(unsigned k) const {
    QuadraticValue r = one(q_);
    QuadraticValue b = *this;
    while (k) {
      if (k & 1) r = r * b;
      b = b * b;
      k >>= 1;
    }
    return r;
  }

  /// Exact sign of a + b q^{-1/2}.
  int sign() const {
    const int sa = a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
    const int sb = b_ == 0 ? 0 : (b_ > 0 ? 1 : -1);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Components disagree: |a| vs |b| q^{-1/2}, squared to clear the root.
    const Rat lhs = a_ * a_;
    const Rat rhs = b_ * b_ / Rat(q_);
    if (lhs == rhs) return 0;  // impossible for q prime unless both zero
    return (lhs > rhs) ? sa : sb;
  }

  bool operator==(const QuadraticValue& o) const {
    return q_ == o.q_ && a_ == o.a_ && b_ == o.b_;
  }
  bool operator!=(const QuadraticValue& o) const { return !(*this == o); }
  bool operator<(const QuadraticValue& o) const {
    return (*this - o).sign() < 0;
  }
  bool operator<=(const QuadraticValue& o) const {
    return (*this - o).sign() <= 0;
  }

  /// Rendering at the reporting boundary: a + b / sqrt(q) evaluated in
  /// 50-digit floats and rounded once to double.
  double to_double() const {
    const BigFloat v = BigFloat(a_) + BigFloat(b_) / sqrt(BigFloat(q_));
    return static_cast<double>(v);
  }

 private:
  void require_same_ring(const QuadraticValue& o) const {
    if (q_ != o.q_) {
      throw std::domain_error("quadratic values over different q");
    }
  }

  std::uint32_t q_;
  Rat a_, b_;
};

}  // namespace ffm
