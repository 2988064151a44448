#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffm/errors.hpp"
#include "ffm/numbers.hpp"
#include "ffm/prime_field.hpp"

namespace ffm {

/// Element of F_q[T]: coefficient vector, lowest degree first, canonical
/// (no stored leading zeros). The zero polynomial has an empty vector and
/// degree -1.
class Polynomial {
 public:
  explicit Polynomial(PrimeField field) : field_(field) {}

  Polynomial(PrimeField field, std::vector<std::uint32_t> coeffs)
      : field_(field), c_(std::move(coeffs)) {
    for (auto& v : c_) v %= field_.q();
    trim();
  }

  static Polynomial zero(PrimeField f) { return Polynomial(f); }
  static Polynomial one(PrimeField f) { return constant(f, 1); }
  static Polynomial constant(PrimeField f, std::uint32_t a) {
    return Polynomial(f, {a});
  }
  /// The generator T.
  static Polynomial variable(PrimeField f) { return Polynomial(f, {0, 1}); }

  const PrimeField& field() const { return field_; }
  std::uint32_t q() const { return field_.q(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool is_constant() const { return c_.size() <= 1; }
  std::uint32_t leading_coeff() const { return c_.empty() ? 0 : c_.back(); }
  std::uint32_t coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[std::size_t(i)] : 0;
  }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }

  /// |f| = q^deg f, and 0 for the zero polynomial.
  Int norm() const {
    if (is_zero()) return 0;
    return int_pow(Int(field_.q()), static_cast<unsigned>(degree()));
  }

  std::uint32_t evaluate(std::uint32_t x) const {
    std::uint32_t acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = field_.add(field_.mul(acc, x), *it);
    }
    return acc;
  }

  Polynomial operator+(const Polynomial& o) const {
    require_same_field(o);
    std::vector<std::uint32_t> out(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = field_.add(coeff(int(i)), o.coeff(int(i)));
    }
    return Polynomial(field_, std::move(out));
  }

  Polynomial operator-(const Polynomial& o) const {
    require_same_field(o);
    std::vector<std::uint32_t> out(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = field_.sub(coeff(int(i)), o.coeff(int(i)));
    }
    return Polynomial(field_, std::move(out));
  }

  Polynomial operator*(const Polynomial& o) const {
    require_same_field(o);
    if (is_zero() || o.is_zero()) return zero(field_);
    std::vector<std::uint32_t> out(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) {
        out[i + j] =
            (out[i + j] + std::uint64_t{c_[i]} * o.c_[j]) % field_.q();
      }
    }
    return Polynomial(field_, std::move(out));
  }

  Polynomial scaled(std::uint32_t a) const {
    std::vector<std::uint32_t> out(c_);
    for (auto& v : out) v = field_.mul(v, a);
    return Polynomial(field_, std::move(out));
  }

  Polynomial make_monic() const {
    if (is_zero() || is_monic()) return *this;
    return scaled(field_.inv(leading_coeff()));
  }

  /// Quotient and remainder with deg rem < deg divisor.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& g) const {
    require_same_field(g);
    if (g.is_zero()) {
      throw std::domain_error("division by zero polynomial");
    }
    std::vector<std::uint32_t> rem(c_);
    const int dg = g.degree();
    std::vector<std::uint32_t> quot;
    if (static_cast<int>(rem.size()) - 1 >= dg) {
      quot.assign(rem.size() - std::size_t(dg), 0);
    }
    const std::uint32_t inv_lead = field_.inv(g.leading_coeff());
    while (static_cast<int>(rem.size()) - 1 >= dg && !rem.empty()) {
      const std::uint32_t c = field_.mul(rem.back(), inv_lead);
      const std::size_t k = rem.size() - 1 - std::size_t(dg);
      quot[k] = c;
      for (int i = 0; i <= dg; ++i) {
        rem[k + std::size_t(i)] =
            field_.sub(rem[k + std::size_t(i)], field_.mul(c, g.coeff(i)));
      }
      while (!rem.empty() && rem.back() == 0) rem.pop_back();
    }
    return {Polynomial(field_, std::move(quot)), Polynomial(field_, std::move(rem))};
  }

  Polynomial operator%(const Polynomial& g) const { return divmod(g).second; }
  Polynomial operator/(const Polynomial& g) const { return divmod(g).first; }

  bool operator==(const Polynomial& o) const {
    return field_ == o.field_ && c_ == o.c_;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  /// Total order: degree first, then rank of the coefficient word.
  bool operator<(const Polynomial& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    for (int i = degree(); i >= 0; --i) {
      if (coeff(i) != o.coeff(i)) return coeff(i) < o.coeff(i);
    }
    return false;
  }

 private:
  void require_same_field(const Polynomial& o) const {
    if (field_ != o.field_) {
      throw std::domain_error("polynomials over different fields");
    }
  }
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  PrimeField field_;
  std::vector<std::uint32_t> c_;
};

inline Polynomial derivative(const Polynomial& f) {
  std::vector<std::uint32_t> out;
  for (int i = 1; i <= f.degree(); ++i) {
    out.push_back(static_cast<std::uint32_t>(
        (std::uint64_t{f.coeff(i)} * std::uint32_t(i)) % f.q()));
  }
  return Polynomial(f.field(), std::move(out));
}

/// Monic gcd; gcd(f, 0) is the monic scaling of f.
inline Polynomial gcd(Polynomial f, Polynomial g) {
  while (!g.is_zero()) {
    Polynomial r = f % g;
    f = std::move(g);
    g = std::move(r);
  }
  return f.make_monic();
}

/// True iff gcd(f, f') is constant. Separable test for square factors.
inline bool is_squarefree(const Polynomial& f) {
  if (f.is_zero()) {
    throw std::domain_error("square-free test on the zero polynomial");
  }
  return gcd(f, derivative(f)).degree() == 0;
}

/// base^e mod m by square-and-multiply; the exponent may be huge (q^n).
inline Polynomial pow_mod(const Polynomial& base, Int e, const Polynomial& m) {
  Polynomial r = Polynomial::one(base.field());
  Polynomial b = base % m;
  while (e != 0) {
    if ((e & 1) != 0) r = (r * b) % m;
    b = (b * b) % m;
    e >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rank encoding of monic polynomials: the base-q digits of the rank are the
// non-leading coefficients, digit i = coefficient of T^i. Degree n gives a
// bijection [0, q^n) <-> monic polynomials of degree n.
// ---------------------------------------------------------------------------

inline std::uint64_t rank_of_monic(const Polynomial& f) {
  if (!f.is_monic()) {
    throw std::domain_error("rank encoding requires a monic polynomial");
  }
  std::uint64_t r = 0;
  for (int i = f.degree() - 1; i >= 0; --i) {
    r = r * f.q() + f.coeff(i);
  }
  return r;
}

inline Polynomial monic_of_rank(PrimeField field, int degree, std::uint64_t rank) {
  if (degree < 0) throw std::domain_error("monic polynomial needs degree >= 0");
  std::vector<std::uint32_t> c(std::size_t(degree) + 1, 0);
  for (int i = 0; i < degree; ++i) {
    c[std::size_t(i)] = static_cast<std::uint32_t>(rank % field.q());
    rank /= field.q();
  }
  if (rank != 0) throw std::domain_error("rank out of range for degree");
  c[std::size_t(degree)] = 1;
  return Polynomial(field, std::move(c));
}

/// Iterates monic polynomials of fixed degree in rank order; restartable
/// from any sub-range so family sweeps can be partitioned.
class MonicRange {
 public:
  MonicRange(PrimeField field, int degree, const Budget& budget)
      : MonicRange(field, degree, 0,
                   budget.checked_pow(field.q(), unsigned(degree),
                                      "monic count q^n"),
                   budget) {}

  MonicRange(PrimeField field, int degree, std::uint64_t from, std::uint64_t to,
             const Budget& budget)
      : field_(field), degree_(degree), from_(from), to_(to) {
    budget.check(to_ - from_, "monic range size");
  }

  class iterator {
   public:
    iterator(const MonicRange* r, std::uint64_t pos) : r_(r), pos_(pos) {}
    Polynomial operator*() const {
      return monic_of_rank(r_->field_, r_->degree_, pos_);
    }
    iterator& operator++() {
      ++pos_;
      return *this;
    }
    bool operator!=(const iterator& o) const { return pos_ != o.pos_; }

   private:
    const MonicRange* r_;
    std::uint64_t pos_;
  };

  iterator begin() const { return iterator(this, from_); }
  iterator end() const { return iterator(this, to_); }
  std::uint64_t size() const { return to_ - from_; }

 private:
  PrimeField field_;
  int degree_;
  std::uint64_t from_, to_;
};

// ---------------------------------------------------------------------------
// Text format: `q3:1021` means T^3 + 2T + 1 over F_3 -- coefficients as
// base-q digits, highest degree first. Digits beyond 9 use a..z so fields
// up to q = 31 still print one character per coefficient.
// ---------------------------------------------------------------------------

inline char digit_char(std::uint32_t v) {
  return v < 10 ? char('0' + v) : char('a' + (v - 10));
}

inline int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return 10 + (c - 'a');
  return -1;
}

inline std::string to_text(const Polynomial& f) {
  std::string s = "q" + std::to_string(f.q()) + ":";
  if (f.is_zero()) return s + "0";
  for (int i = f.degree(); i >= 0; --i) s += digit_char(f.coeff(i));
  return s;
}

inline Polynomial parse_polynomial(const std::string& text) {
  const auto colon = text.find(':');
  if (text.size() < 3 || text[0] != 'q' || colon == std::string::npos) {
    throw std::domain_error("bad polynomial literal '" + text +
                            "', expected e.g. q3:1021");
  }
  std::uint32_t q = 0;
  for (std::size_t i = 1; i < colon; ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::domain_error("bad field size in polynomial literal '" + text + "'");
    }
    q = q * 10 + std::uint32_t(text[i] - '0');
  }
  PrimeField field(q);
  const std::string digits = text.substr(colon + 1);
  if (digits.empty()) {
    throw std::domain_error("empty coefficient string in '" + text + "'");
  }
  std::vector<std::uint32_t> c;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    const int v = digit_value(*it);
    if (v < 0 || std::uint32_t(v) >= q) {
      throw std::domain_error("coefficient digit '" + std::string(1, *it) +
                              "' out of range in '" + text + "'");
    }
    c.push_back(std::uint32_t(v));
  }
  return Polynomial(field, std::move(c));
}

}  // namespace ffm
