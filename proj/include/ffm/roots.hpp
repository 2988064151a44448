#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ffm/errors.hpp"
#include "ffm/lfunction.hpp"
#include "ffm/numbers.hpp"

namespace ffm {

/// Result of the critical-circle test: all roots of the L-polynomial must
/// sit on |u| = q^{-1/2} (Weil), and their product must equal q^{-g}.
struct CircleReport {
  double max_deviation = 0.0;       // max | |u_i| - q^{-1/2} |
  double root_product_rel_err = 0.0;
  bool pass = false;
  // distinct roots with multiplicities
  std::vector<std::pair<std::complex<double>, int>> roots;
};

namespace detail {

// Dense polynomials over Q, highest-degree coefficient last and nonzero.
using RatPoly = std::vector<Rat>;

inline void rp_trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly rp_derivative(const RatPoly& p) {
  RatPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * Rat(i));
  rp_trim(out);
  return out;
}

inline RatPoly rp_divide_exact(const RatPoly& a, const RatPoly& b) {
  RatPoly rem = a;
  RatPoly quot(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
  while (rem.size() >= b.size() && !rem.empty()) {
    const Rat c = rem.back() / b.back();
    const std::size_t k = rem.size() - b.size();
    quot[k] = c;
    for (std::size_t i = 0; i < b.size(); ++i) rem[k + i] -= c * b[i];
    rp_trim(rem);
  }
  return quot;
}

inline RatPoly rp_mod(RatPoly a, const RatPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const Rat c = a.back() / b.back();
    const std::size_t k = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] -= c * b[i];
    rp_trim(a);
  }
  return a;
}

inline RatPoly rp_gcd(RatPoly a, RatPoly b) {
  while (!b.empty()) {
    RatPoly r = rp_mod(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Rat lead = a.back();
    for (Rat& c : a) c /= lead;
  }
  return a;
}

inline RatPoly rp_sub(RatPoly a, const RatPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rat(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  rp_trim(a);
  return a;
}

/// Yun's square-free decomposition over Q: returns (factor, multiplicity)
/// with each factor square-free and pairwise coprime. Exact, so the
/// numerical stage downstream only ever sees simple roots.
inline std::vector<std::pair<RatPoly, int>> square_free_decomposition(
    const RatPoly& f) {
  std::vector<std::pair<RatPoly, int>> out;
  if (f.size() <= 1) return out;
  const RatPoly fp = rp_derivative(f);
  RatPoly g = rp_gcd(f, fp);
  if (g.size() <= 1) {
    out.emplace_back(f, 1);
    return out;
  }
  RatPoly c = rp_divide_exact(f, g);
  RatPoly d = rp_sub(rp_divide_exact(fp, g), rp_derivative(c));
  int i = 1;
  while (c.size() > 1) {
    RatPoly a = rp_gcd(c, d);
    if (a.size() > 1) out.emplace_back(a, i);
    c = rp_divide_exact(c, a);
    d = rp_sub(rp_divide_exact(d, a), rp_derivative(c));
    ++i;
  }
  return out;
}

}  // namespace detail

/// Roots of sum c_i v^i via companion-matrix eigenvalues, refined by a few
/// Newton steps against the input coefficients. Intended for square-free
/// inputs, where polishing reaches machine precision.
inline std::vector<std::complex<double>> polynomial_roots(
    const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  if (c[std::size_t(n)] == 0.0) {
    throw numeric_error("leading coefficient is zero");
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    companion(i, n - 1) = -c[std::size_t(i)] / c[std::size_t(n)];
    if (i > 0) companion(i, i - 1) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("eigenvalue iteration failed to converge");
  }
  std::vector<std::complex<double>> roots;
  for (int i = 0; i < n; ++i) {
    std::complex<double> v = solver.eigenvalues()[i];
    for (int iter = 0; iter < 8; ++iter) {
      std::complex<double> p(0.0, 0.0), dp(0.0, 0.0);
      for (int j = n; j >= 0; --j) {
        dp = dp * v + p;
        p = p * v + c[std::size_t(j)];
      }
      if (std::abs(dp) == 0.0) break;
      const std::complex<double> step = p / dp;
      v -= step;
      if (std::abs(step) <= 1e-16 * std::abs(v)) break;
    }
    roots.push_back(v);
  }
  return roots;
}

inline CircleReport critical_circle_check(const LPolynomial& L,
                                          double tol = 1e-9) {
  CircleReport rep;
  if (L.c.empty() || L.c.back() == 0) {
    throw numeric_error("degenerate L-polynomial at q = " +
                        std::to_string(L.q) + ", genus " +
                        std::to_string(L.genus));
  }
  const double radius = 1.0 / std::sqrt(double(L.q));

  detail::RatPoly exact(L.c.size());
  for (std::size_t i = 0; i < L.c.size(); ++i) exact[i] = Rat(L.c[i]);
  std::complex<double> product(1.0, 0.0);
  for (const auto& [factor, mult] : detail::square_free_decomposition(exact)) {
    // Substitute u = radius * v so the true roots land on |v| = 1, where
    // the companion matrix is well behaved; then map back.
    std::vector<double> scaled(factor.size());
    double r_pow = 1.0;
    for (std::size_t i = 0; i < factor.size(); ++i) {
      scaled[i] = to_double(factor[i]) * r_pow;
      r_pow *= radius;
    }
    std::vector<std::complex<double>> vroots;
    try {
      vroots = polynomial_roots(scaled);
    } catch (const numeric_error& e) {
      std::string coeffs;
      for (std::size_t i = 0; i < L.c.size(); ++i) {
        if (i) coeffs += ",";
        coeffs += std::to_string(L.c[i]);
      }
      throw numeric_error(std::string(e.what()) + " for L-polynomial [" +
                          coeffs + "] at q = " + std::to_string(L.q) +
                          ", genus " + std::to_string(L.genus));
    }
    for (const auto& v : vroots) {
      const std::complex<double> u = radius * v;
      rep.max_deviation =
          std::max(rep.max_deviation, std::abs(std::abs(u) - radius));
      for (int m = 0; m < mult; ++m) product *= u;
      rep.roots.emplace_back(u, mult);
    }
  }
  if (L.c.size() > 1) {
    const double expected = std::pow(double(L.q), -double(L.genus));
    rep.root_product_rel_err = std::abs(product - expected) / expected;
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace ffm
