#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ratmap/complex.hpp"
#include "ratmap/error.hpp"
#include "ratmap/polynomial.hpp"
#include "ratmap/solvers.hpp"

// Parameter relations for R(z) = z^n + a/z^n + c at a fixed point with
// multiplier lambda.
//
// Everything is phrased through the auxiliary quantity xi, which satisfies
//   c-side:  2 xi^n - (1 + lambda/n) xi + c = 0
//   a-side:  xi^{2n} - (lambda/n) xi^{n+1} - a = 0
// Adding and subtracting the fixed-point and multiplier equations shows that
// xi is the fixed point z itself, so every branch below names one fixed point
// of the resulting map.

namespace ratmap {

struct MapParams {
  int n = 2;
  Complex a{0.0, 0.0};
  Complex c{0.0, 0.0};

  MapParams() = default;
  MapParams(int n_, Complex a_, Complex c_) : n(n_), a(a_), c(c_) { validate(); }

  /// Skips the a = c = 0 exclusion. The bare power map z^n is still a
  /// well-defined map for the oracle; it is only excluded as a parameter pair.
  static MapParams unchecked(int n, Complex a, Complex c) {
    MapParams p;
    p.n = n;
    p.a = a;
    p.c = c;
    p.validate_map();
    return p;
  }

  void validate_map() const {
    if (n < 1) throw Error(ErrorKind::invalid_argument, "MapParams: n must be >= 1");
    require_finite(a, "parameter a");
    require_finite(c, "parameter c");
  }

  void validate() const {
    validate_map();
    if (a == Complex{0.0, 0.0} && c == Complex{0.0, 0.0})
      throw Error(ErrorKind::invalid_argument, "MapParams: a and c cannot both be zero");
  }
};

struct BranchedParameter {
  int k = 0;
  Complex xi;
  Complex value;                   // the computed a_k or c_k
  double residual_c_side = 0.0;    // |2 xi^n - (1 + lambda/n) xi + c|
  double residual_a_side = 0.0;    // |xi^{2n} - (lambda/n) xi^{n+1} - a|
  double alt_form_gap = std::numeric_limits<double>::quiet_NaN();
  bool approximate = false;
};

/// Thresholds for the asymptotic regimes. A "large" formula needs
/// ratio >= large_min, a "small" one needs ratio <= small_max.
struct ApproxConfig {
  double large_min = 10.0;
  double small_max = 0.1;
};

inline void require_lambda(Complex lambda) { require_finite(lambda, "lambda"); }

inline Complex a_of_xi(int n, Complex xi, Complex lambda) {
  return ipow(xi, 2 * n) - (lambda / static_cast<double>(n)) * ipow(xi, n + 1);
}

inline Complex c_of_xi(int n, Complex xi, Complex lambda) {
  return (1.0 + lambda / static_cast<double>(n)) * xi - 2.0 * ipow(xi, n);
}

/// c = (1 - lambda/n) xi - 2a / xi^n; equal to c_of_xi whenever xi solves the a-side equation.
inline Complex c_of_xi_alt(int n, Complex xi, Complex a, Complex lambda) {
  return (1.0 - lambda / static_cast<double>(n)) * xi - 2.0 * a / ipow(xi, n);
}

inline double residual_c_side(int n, Complex xi, Complex c, Complex lambda) {
  return std::abs(2.0 * ipow(xi, n) - (1.0 + lambda / static_cast<double>(n)) * xi + c);
}

inline double residual_a_side(int n, Complex xi, Complex a, Complex lambda) {
  return std::abs(a_of_xi(n, xi, lambda) - a);
}

namespace detail {

inline BranchedParameter make_branch(int n, int k, Complex xi, Complex a, Complex c,
                                     Complex lambda, Complex value, bool approximate) {
  BranchedParameter b;
  b.k = k;
  b.xi = xi;
  b.value = require_finite(value, "branch value");
  b.residual_c_side = residual_c_side(n, xi, c, lambda);
  b.residual_a_side = residual_a_side(n, xi, a, lambda);
  b.approximate = approximate;
  return b;
}

inline void require_exact_n(int n, int max_n, const char* op) {
  if (n < 1 || n > max_n)
    throw Error(ErrorKind::unsupported,
                std::string(op) + ": no closed form for n = " + std::to_string(n));
}

inline void require_not_lambda_one(int n, Complex lambda) {
  if (n == 1 && std::abs(lambda - 1.0) < 1e-15)
    throw Error(ErrorKind::pole, "lambda = 1 is a pole of the n = 1 relations");
}

}  // namespace detail

/// Roots in xi of the c-side equation, 1 <= n <= 4.
inline std::vector<Complex> xi_from_c(int n, Complex c, Complex lambda) {
  detail::require_exact_n(n, 4, "xi_from_c");
  require_finite(c, "c");
  require_lambda(lambda);
  const double dn = n;
  const Complex lin = -(1.0 + lambda / dn) / 2.0;  // coefficient of xi after dividing by 2
  const Complex con = c / 2.0;
  switch (n) {
    case 1:
      detail::require_not_lambda_one(n, lambda);
      return {-c / (1.0 - lambda)};
    case 2: return solve_quadratic(lin, con).roots;
    case 3: return solve_cubic(Complex{0.0, 0.0}, lin, con).roots;
    default: return solve_quartic(Complex{0.0, 0.0}, Complex{0.0, 0.0}, lin, con).roots;
  }
}

/// Roots in xi of the a-side equation, 1 <= n <= 3, a != 0.
///
/// n = 1 reads (1 - lambda) xi^2 = a, so xi = -c/(1 - lambda) for the two
/// branches c = +/- sqrt(a (1 - lambda)). n = 3 is a cubic in w = xi^2 whose
/// roots each contribute +sqrt(w), -sqrt(w).
inline std::vector<Complex> xi_from_a(int n, Complex a, Complex lambda) {
  detail::require_exact_n(n, 3, "xi_from_a");
  require_finite(a, "a");
  require_lambda(lambda);
  if (a == Complex{0.0, 0.0})
    throw Error(ErrorKind::invalid_argument, "xi_from_a: a = 0, use special_a_zero");
  switch (n) {
    case 1: {
      detail::require_not_lambda_one(n, lambda);
      const Complex root = principal_root(a * (1.0 - lambda), 2);
      return {-root / (1.0 - lambda), root / (1.0 - lambda)};
    }
    case 2:
      return solve_quartic(-lambda / 2.0, Complex{0.0, 0.0}, Complex{0.0, 0.0}, -a).roots;
    default: {
      const auto w = solve_cubic(-lambda / 3.0, Complex{0.0, 0.0}, -a).roots;
      std::vector<Complex> out;
      out.reserve(6);
      for (auto wk : w) {
        const Complex s = principal_root(wk, 2);
        out.push_back(s);
        out.push_back(-s);
      }
      return out;
    }
  }
}

/// a_k for fixed c != 0 and multiplier lambda, one branch per root of the c-side equation.
inline std::vector<BranchedParameter> a_from_c(int n, Complex c, Complex lambda) {
  detail::require_exact_n(n, 4, "a_from_c");
  if (c == Complex{0.0, 0.0})
    throw Error(ErrorKind::invalid_argument, "a_from_c: c = 0, use special_c_zero");
  const auto xis = xi_from_c(n, c, lambda);
  std::vector<BranchedParameter> out;
  out.reserve(xis.size());
  for (std::size_t k = 0; k < xis.size(); ++k) {
    Complex a = a_of_xi(n, xis[k], lambda);
    if (n == 1) a = c * c / (1.0 - lambda);
    out.push_back(detail::make_branch(n, static_cast<int>(k), xis[k], a, c, lambda, a, false));
  }
  return out;
}

/// c_k for fixed a != 0 and multiplier lambda, 1 <= n <= 3.
inline std::vector<BranchedParameter> c_from_a(int n, Complex a, Complex lambda) {
  detail::require_exact_n(n, 3, "c_from_a");
  const auto xis = xi_from_a(n, a, lambda);
  std::vector<BranchedParameter> out;
  out.reserve(xis.size());
  for (std::size_t k = 0; k < xis.size(); ++k) {
    const Complex xi = xis[k];
    Complex c = c_of_xi(n, xi, lambda);
    if (n == 1) c = (k == 0 ? 1.0 : -1.0) * principal_root(a * (1.0 - lambda), 2);
    auto b = detail::make_branch(n, static_cast<int>(k), xi, a, c, lambda, c, false);
    if (xi != Complex{0.0, 0.0}) b.alt_form_gap = std::abs(c_of_xi_alt(n, xi, a, lambda) - c);
    out.push_back(b);
  }
  return out;
}

/// a = 0: c_k = (1 - lambda/n) xi_k with xi_k the (n-1)-th roots of lambda/n.
inline std::vector<BranchedParameter> special_a_zero(int n, Complex lambda) {
  if (n < 2) throw Error(ErrorKind::unsupported, "special_a_zero: n = 1 is degenerate");
  require_lambda(lambda);
  const double dn = n;
  const auto xis = all_roots(lambda / dn, n - 1);
  std::vector<BranchedParameter> out;
  for (std::size_t k = 0; k < xis.size(); ++k) {
    const Complex c = (1.0 - lambda / dn) * xis[k];
    out.push_back(detail::make_branch(n, static_cast<int>(k), xis[k], Complex{0.0, 0.0}, c,
                                      lambda, c, false));
  }
  return out;
}

/// c = 0: a_k = (1/2)(1 - lambda/n) xi_k^{n+1} with xi_k the (n-1)-th roots of (1 + lambda/n)/2.
inline std::vector<BranchedParameter> special_c_zero(int n, Complex lambda) {
  if (n < 2) throw Error(ErrorKind::unsupported, "special_c_zero: n = 1 is degenerate");
  require_lambda(lambda);
  const double dn = n;
  const auto xis = all_roots((1.0 + lambda / dn) / 2.0, n - 1);
  std::vector<BranchedParameter> out;
  for (std::size_t k = 0; k < xis.size(); ++k) {
    const Complex a = 0.5 * (1.0 - lambda / dn) * ipow(xis[k], n + 1);
    out.push_back(detail::make_branch(n, static_cast<int>(k), xis[k], a, Complex{0.0, 0.0},
                                      lambda, a, false));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Asymptotic regimes for larger n.

/// |c| / (2^{1/(1-n)} |1 + lambda/n|^{n/(n-1)}).
inline double c_validity_ratio(int n, Complex c, Complex lambda) {
  const double dn = n;
  const double scale =
      std::pow(2.0, 1.0 / (1.0 - dn)) * std::pow(std::abs(1.0 + lambda / dn), dn / (dn - 1.0));
  return std::abs(c) / scale;
}

/// |a| / |lambda/n|^{2n/(2n-1)}; infinite for lambda = 0.
inline double a_validity_ratio(int n, Complex a, Complex lambda) {
  const double dn = n;
  const double scale = std::pow(std::abs(lambda / dn), 2.0 * dn / (2.0 * dn - 1.0));
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(a) / scale;
}

/// |c| dominant: 2 xi^n ~ -c, so xi_k = (c/2)^{1/n} e^{i(2k-1)pi/n}, k = 1..n
/// (stored as branch k-1). a_k from the a-side relation.
inline std::vector<BranchedParameter> approx_a_from_c_large(int n, Complex c, Complex lambda,
                                                            const ApproxConfig& cfg = {}) {
  if (n < 5) throw Error(ErrorKind::unsupported, "approx_a_from_c_large: requires n >= 5");
  require_finite(c, "c");
  require_lambda(lambda);
  const double ratio = c_validity_ratio(n, c, lambda);
  if (!(ratio >= cfg.large_min))
    throw ValidityError("approx_a_from_c_large: |c| not dominant (ratio " +
                            std::to_string(ratio) + ")",
                        ratio);
  const Complex base = principal_root(c / 2.0, n);
  std::vector<BranchedParameter> out;
  for (int k = 1; k <= n; ++k) {
    const Complex xi = base * std::polar(1.0, (2.0 * k - 1.0) * std::numbers::pi / n);
    const Complex a = a_of_xi(n, xi, lambda);
    out.push_back(detail::make_branch(n, k - 1, xi, a, c, lambda, a, true));
  }
  return out;
}

/// |c| small: xi = c / (1 + lambda/n).
inline BranchedParameter approx_a_from_c_small(int n, Complex c, Complex lambda,
                                               const ApproxConfig& cfg = {}) {
  if (n < 5) throw Error(ErrorKind::unsupported, "approx_a_from_c_small: requires n >= 5");
  require_finite(c, "c");
  require_lambda(lambda);
  const double dn = n;
  if (std::abs(1.0 + lambda / dn) < 1e-15)
    throw Error(ErrorKind::pole, "approx_a_from_c_small: lambda = -n");
  if (c == Complex{0.0, 0.0})
    throw Error(ErrorKind::invalid_argument, "approx_a_from_c_small: c must be nonzero");
  const double ratio = c_validity_ratio(n, c, lambda);
  if (!(ratio <= cfg.small_max))
    throw ValidityError("approx_a_from_c_small: |c| not small (ratio " +
                            std::to_string(ratio) + ")",
                        ratio);
  const Complex xi = c / (1.0 + lambda / dn);
  const Complex a = a_of_xi(n, xi, lambda);
  return detail::make_branch(n, 0, xi, a, c, lambda, a, true);
}

/// |a| dominant: xi_k = a^{1/(2n)} e^{i k pi/n}, k = 1..2n (stored as branch k-1).
/// Exact when lambda = 0, where the a-side equation is xi^{2n} = a.
inline std::vector<BranchedParameter> approx_c_from_a_large(int n, Complex a, Complex lambda,
                                                            const ApproxConfig& cfg = {}) {
  if (n < 4) throw Error(ErrorKind::unsupported, "approx_c_from_a_large: requires n >= 4");
  require_finite(a, "a");
  require_lambda(lambda);
  const double ratio = a_validity_ratio(n, a, lambda);
  if (lambda != Complex{0.0, 0.0} && !(ratio >= cfg.large_min))
    throw ValidityError("approx_c_from_a_large: |a| not dominant (ratio " +
                            std::to_string(ratio) + ")",
                        ratio);
  const Complex base = principal_root(a, 2 * n);
  std::vector<BranchedParameter> out;
  for (int k = 1; k <= 2 * n; ++k) {
    const Complex xi = base * std::polar(1.0, k * std::numbers::pi / n);
    const Complex c = c_of_xi(n, xi, lambda);
    out.push_back(detail::make_branch(n, k - 1, xi, a, c, lambda, c, true));
  }
  return out;
}

/// |a| small: xi = (-n a / lambda)^{1/(n+1)} on the principal branch.
inline BranchedParameter approx_c_from_a_small(int n, Complex a, Complex lambda,
                                               const ApproxConfig& cfg = {}) {
  if (n < 4) throw Error(ErrorKind::unsupported, "approx_c_from_a_small: requires n >= 4");
  require_finite(a, "a");
  require_lambda(lambda);
  if (a == Complex{0.0, 0.0})
    throw Error(ErrorKind::invalid_argument, "approx_c_from_a_small: a must be nonzero");
  if (lambda == Complex{0.0, 0.0})
    throw Error(ErrorKind::pole, "approx_c_from_a_small: lambda = 0");
  const double ratio = a_validity_ratio(n, a, lambda);
  if (!(ratio <= cfg.small_max))
    throw ValidityError("approx_c_from_a_small: |a| not small (ratio " +
                            std::to_string(ratio) + ")",
                        ratio);
  const Complex xi = principal_root(-static_cast<double>(n) * a / lambda, n + 1);
  const Complex c = c_of_xi(n, xi, lambda);
  return detail::make_branch(n, 0, xi, a, c, lambda, c, true);
}

// ---------------------------------------------------------------------------
// Numeric inversion through the iterative root finder, any n. Used where no
// closed form exists (c from a at n = 4, everything at n >= 5 without
// approximation).

inline std::vector<BranchedParameter> a_from_c_numeric(int n, Complex c, Complex lambda) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "n must be >= 1");
  require_finite(c, "c");
  require_lambda(lambda);
  const double dn = n;
  std::vector<Complex> coeffs(static_cast<std::size_t>(n) + 1, Complex{0.0, 0.0});
  coeffs[0] += c;
  coeffs[1] += -(1.0 + lambda / dn);
  coeffs[n] += 2.0;
  if (n == 1) detail::require_not_lambda_one(n, lambda);
  const auto roots = find_all_roots(ComplexPolynomial(std::move(coeffs))).roots;
  std::vector<BranchedParameter> out;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const Complex a = a_of_xi(n, roots[k], lambda);
    out.push_back(detail::make_branch(n, static_cast<int>(k), roots[k], a, c, lambda, a, false));
  }
  return out;
}

inline std::vector<BranchedParameter> c_from_a_numeric(int n, Complex a, Complex lambda) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "n must be >= 1");
  require_finite(a, "a");
  require_lambda(lambda);
  if (a == Complex{0.0, 0.0})
    throw Error(ErrorKind::invalid_argument, "c_from_a_numeric: a = 0, use special_a_zero");
  const double dn = n;
  std::vector<Complex> coeffs(2 * static_cast<std::size_t>(n) + 1, Complex{0.0, 0.0});
  coeffs[0] += -a;
  coeffs[n + 1] += -lambda / dn;
  coeffs[2 * n] += 1.0;
  if (n == 1) detail::require_not_lambda_one(n, lambda);
  const auto roots = find_all_roots(ComplexPolynomial(std::move(coeffs))).roots;
  std::vector<BranchedParameter> out;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const Complex c = c_of_xi(n, roots[k], lambda);
    auto b = detail::make_branch(n, static_cast<int>(k), roots[k], a, c, lambda, c, false);
    b.alt_form_gap = std::abs(c_of_xi_alt(n, roots[k], a, lambda) - c);
    out.push_back(b);
  }
  return out;
}

/// |a_sum - a_product| for the two on-shell expressions
///   a = (1/4) [xi (1 + lambda/n) - c] [xi (1 - lambda/n) - c]
///   a = (1/2) xi^n [(1 - lambda/n) xi - c]
/// which coincide whenever xi solves the c-side equation.
inline double appendix_identity_check(int n, Complex xi, Complex c, Complex lambda) {
  const double dn = n;
  const Complex l = lambda / dn;
  const Complex a_product = 0.25 * (xi * (1.0 + l) - c) * (xi * (1.0 - l) - c);
  const Complex a_power = 0.5 * ipow(xi, n) * ((1.0 - l) * xi - c);
  return std::abs(a_product - a_power);
}

}  // namespace ratmap
