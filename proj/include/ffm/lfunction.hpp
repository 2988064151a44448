#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffm/characters.hpp"
#include "ffm/numbers.hpp"
#include "ffm/polynomial.hpp"
#include "ffm/quadratic_value.hpp"

namespace ffm {

/// The L-polynomial of chi_D in the variable u = q^{-s}: integer
/// coefficients c_0 .. c_{2g}, where c_n sums chi_D over the monic
/// degree-n shell. Always satisfies c_0 = 1, |c_n| <= q^n, and the
/// functional-equation symmetry c_{2g-n} = q^{g-n} c_n.
struct LPolynomial {
  std::uint32_t q = 0;
  int genus = 0;
  std::vector<std::int64_t> c;  // size 2g + 1

  int degree() const { return 2 * genus; }
};

/// Exact shell sums c_n for n = 0 .. 2g. The evaluator must cover degree
/// 2g; the discriminant is taken from the character.
inline LPolynomial l_coefficients(const QuadraticCharacter& chr,
                                  ChiEvaluator& eval) {
  const int g = chr.genus();
  if (eval.max_degree() < 2 * g) {
    throw std::domain_error("chi evaluator covers degree " +
                            std::to_string(eval.max_degree()) +
                            ", need 2g = " + std::to_string(2 * g));
  }
  eval.set_discriminant(chr.discriminant());
  LPolynomial L;
  L.q = chr.q();
  L.genus = g;
  L.c.resize(std::size_t(2 * g) + 1);
  for (int n = 0; n <= 2 * g; ++n) {
    L.c[std::size_t(n)] = eval.shell_sum(n);
  }
  return L;
}

inline LPolynomial l_coefficients(const QuadraticCharacter& chr,
                                  const IrreducibleSieve& sieve) {
  ChiEvaluator eval(sieve, 2 * chr.genus());
  return l_coefficients(chr, eval);
}

/// Coefficient form of the functional equation: c_{2g-n} = q^{g-n} c_n for
/// all n. Returns false rather than throwing, so perturbed inputs can be
/// probed.
inline bool functional_equation_check(const LPolynomial& L) {
  if (L.c.size() != std::size_t(2 * L.genus) + 1) return false;
  for (int n = 0; n <= L.genus; ++n) {
    Int lhs = L.c[std::size_t(2 * L.genus - n)];
    Int rhs = int_pow(Int(L.q), unsigned(L.genus - n)) * Int(L.c[std::size_t(n)]);
    if (lhs != rhs) return false;
  }
  return true;
}

/// L(1/2): plug u = q^{-1/2} into the coefficient vector, splitting even
/// and odd degrees into the rational and root components.
inline QuadraticValue central_value(const LPolynomial& L) {
  Rat a = 0, b = 0;
  for (int n = 0; n < static_cast<int>(L.c.size()); ++n) {
    const Rat term(L.c[std::size_t(n)],
                   int_pow(Int(L.q), unsigned(n / 2)));
    if (n % 2 == 0) {
      a += term;
    } else {
      b += term;
    }
  }
  return QuadraticValue(L.q, a, b);
}

/// Same value through a different code path: Horner evaluation in the
/// quadratic ring at u = q^{-1/2}.
inline QuadraticValue evaluate_at_center(const LPolynomial& L) {
  const QuadraticValue u = QuadraticValue::root(L.q);
  QuadraticValue acc = QuadraticValue::zero(L.q);
  for (auto it = L.c.rbegin(); it != L.c.rend(); ++it) {
    acc = acc * u + QuadraticValue(L.q, Rat(*it), Rat(0));
  }
  return acc;
}

/// The two-truncation representation of the L-polynomial: the principal
/// sum runs over deg f1 <= g, the dual sum over deg f2 <= g-1 carries the
/// factor (q u^2)^g (q u)^{-deg f2}. Added coefficientwise, the result
/// must equal the direct coefficients exactly.
inline bool afe_identity_check(const QuadraticCharacter& chr,
                               ChiEvaluator& eval) {
  const LPolynomial L = l_coefficients(chr, eval);
  const int g = L.genus;
  std::vector<Int> two_sum(std::size_t(2 * g) + 1, 0);
  for (int n = 0; n <= g; ++n) {
    two_sum[std::size_t(n)] += Int(eval.shell_sum(n));
  }
  for (int m = 0; m <= g - 1; ++m) {
    two_sum[std::size_t(2 * g - m)] +=
        int_pow(Int(L.q), unsigned(g - m)) * Int(eval.shell_sum(m));
  }
  for (int n = 0; n <= 2 * g; ++n) {
    if (two_sum[std::size_t(n)] != Int(L.c[std::size_t(n)])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cache file format: one record per line,
//   q g D_text c_0,c_1,...,c_{2g}
// with decimal integer coefficients. The loader re-validates the three
// structural invariants and reports corrupt lines by number.
// ---------------------------------------------------------------------------

struct CachedLPolynomial {
  Polynomial discriminant;
  LPolynomial lpoly;
};

inline std::string format_cache_line(const Polynomial& d, const LPolynomial& L) {
  std::string s = std::to_string(L.q) + " " + std::to_string(L.genus) + " " +
                  to_text(d) + " ";
  for (std::size_t i = 0; i < L.c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(L.c[i]);
  }
  return s;
}

/// Parses and validates one cache line; throws std::domain_error with a
/// descriptive message on any structural violation.
inline CachedLPolynomial parse_cache_line(const std::string& line) {
  std::istringstream in(line);
  std::uint32_t q;
  int g;
  std::string d_text, coeffs;
  if (!(in >> q >> g >> d_text >> coeffs)) {
    throw std::domain_error("malformed cache line");
  }
  Polynomial d = parse_polynomial(d_text);
  if (d.q() != q) throw std::domain_error("field mismatch in cache line");
  if (d.degree() != 2 * g + 1) {
    throw std::domain_error("discriminant degree disagrees with genus");
  }
  LPolynomial L;
  L.q = q;
  L.genus = g;
  std::size_t pos = 0;
  while (pos <= coeffs.size()) {
    const auto comma = coeffs.find(',', pos);
    const std::string tok = coeffs.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) throw std::domain_error("empty coefficient in cache line");
    L.c.push_back(std::stoll(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (L.c.size() != std::size_t(2 * g) + 1) {
    throw std::domain_error("expected " + std::to_string(2 * g + 1) +
                            " coefficients, got " + std::to_string(L.c.size()));
  }
  if (L.c[0] != 1) throw std::domain_error("c_0 must be 1");
  Int qn = 1;
  for (int n = 0; n <= 2 * g; ++n) {
    if (Int(abs(Int(L.c[std::size_t(n)]))) > qn) {
      throw std::domain_error("coefficient c_" + std::to_string(n) +
                              " exceeds the shell bound q^n");
    }
    qn *= q;
  }
  if (!functional_equation_check(L)) {
    throw std::domain_error("functional-equation symmetry violated");
  }
  return CachedLPolynomial{std::move(d), std::move(L)};
}

}  // namespace ffm
