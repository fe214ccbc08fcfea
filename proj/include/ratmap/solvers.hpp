#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ratmap/complex.hpp"
#include "ratmap/polynomial.hpp"

// Closed-form roots of monic complex quadratics, cubics and quartics.
// Branch order is part of the contract: callers index branches by position.

namespace ratmap {

enum class SolverMethod { quadratic, cardano, ferrari, oracle_fallback };

inline const char* to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::quadratic: return "quadratic";
    case SolverMethod::cardano: return "cardano";
    case SolverMethod::ferrari: return "ferrari";
    case SolverMethod::oracle_fallback: return "oracle_fallback";
  }
  return "unknown";
}

struct SolverResult {
  std::vector<Complex> roots;
  SolverMethod method;
  double max_residual = 0.0;
};

namespace detail {

inline double residual_of(std::span<const Complex> monic_low, const std::vector<Complex>& roots) {
  // monic_low holds c_0..c_{d-1}; the leading coefficient is 1.
  std::vector<Complex> c(monic_low.begin(), monic_low.end());
  c.push_back(Complex{1.0, 0.0});
  double worst = 0.0;
  for (auto r : roots) worst = std::max(worst, std::abs(eval_with_derivative(c, r).first));
  return worst;
}

inline double coefficient_scale(std::initializer_list<Complex> cs) {
  double s = 0.0;
  for (auto c : cs) s = std::max(s, std::abs(c));
  return s;
}

inline const Complex kOmega{-0.5, 0.8660254037844386};   // e^{i 2pi/3}
inline const Complex kOmega2{-0.5, -0.8660254037844386}; // e^{i 4pi/3}

}  // namespace detail

/// z^2 + b z + c = 0. Roots (-b + s)/2 then (-b - s)/2 with s the principal
/// square root of the discriminant.
inline SolverResult solve_quadratic(Complex b, Complex c) {
  require_finite(b, "quadratic b");
  require_finite(c, "quadratic c");
  const Complex s = principal_root(b * b - 4.0 * c, 2);
  Complex r0 = (-b + s) / 2.0;
  Complex r1 = (-b - s) / 2.0;
  // Recover the smaller root through Vieta when the subtraction cancels.
  if (std::abs(r0) < std::abs(r1)) {
    if (std::abs(r1) > 0.0) r0 = c / r1;
  } else if (std::abs(r0) > 0.0) {
    r1 = c / r0;
  }
  SolverResult out{{r0, r1}, SolverMethod::quadratic};
  const std::array<Complex, 2> low{c, b};
  out.max_residual = detail::residual_of(low, out.roots);
  return out;
}

/// z^3 + b z^2 + c z + d = 0 by Cardano.
///
/// With z = t - b/3 the cubic becomes t^3 + p t + q. The two cube-root
/// arguments are U = -q/2 + sqrt(D) and V = -q/2 - sqrt(D), D = q^2/4 + p^3/27,
/// with U V = -p^3/27. The larger of the two is formed directly and the other
/// through the product, so neither suffers cancellation. u0 is the principal
/// cube root of U and v0 = -p/(3 u0) pairs with it; the roots are
/// u0 w^k + v0 w^-k - b/3, k = 0, 1, 2.
inline SolverResult solve_cubic(Complex b, Complex c, Complex d) {
  require_finite(b, "cubic b");
  require_finite(c, "cubic c");
  require_finite(d, "cubic d");
  const double eps = 1e-12 * (1.0 + detail::coefficient_scale({b, c, d}));

  const Complex shift = b / 3.0;
  const Complex p = c - b * b / 3.0;
  const Complex q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const Complex sq = principal_root(q * q / 4.0 + p * p * p / 27.0, 2);
  Complex big_u = -q / 2.0 + sq;
  const Complex big_v_direct = -q / 2.0 - sq;
  if (std::abs(big_u) < std::abs(big_v_direct) && std::abs(big_v_direct) > 0.0)
    big_u = -(p * p * p / 27.0) / big_v_direct;

  const Complex u0 = principal_root(big_u, 3);
  Complex v0;
  if (std::abs(u0) > eps) {
    v0 = -p / (3.0 * u0);
  } else {
    v0 = principal_root(big_v_direct, 3);
  }

  SolverResult out{{u0 + v0 - shift,
                    u0 * detail::kOmega + v0 * detail::kOmega2 - shift,
                    u0 * detail::kOmega2 + v0 * detail::kOmega - shift},
                   SolverMethod::cardano};
  const std::array<Complex, 3> low{d, c, b};
  out.max_residual = detail::residual_of(low, out.roots);
  return out;
}

/// z^4 + b z^3 + c z^2 + d z + e = 0 by Ferrari.
///
/// With z = t - b/4 the quartic is t^4 + p t^2 + q t + r. For a root y of the
/// resolvent 8y^3 - 4p y^2 - 8r y + (4pr - q^2) and s = sqrt(2y - p),
///   t^4 + p t^2 + q t + r = (t^2 - s t + y + q/(2s)) (t^2 + s t + y - q/(2s)).
/// The resolvent root maximizing |2y - p| is used. Roots are ordered
/// (+,+), (+,-), (-,+), (-,-) in (sign of s, sign of the inner radical).
inline SolverResult solve_quartic(Complex b, Complex c, Complex d, Complex e) {
  require_finite(b, "quartic b");
  require_finite(c, "quartic c");
  require_finite(d, "quartic d");
  require_finite(e, "quartic e");
  const double scale = 1.0 + detail::coefficient_scale({b, c, d, e});
  const double eps = 1e-12 * scale;
  const std::array<Complex, 4> low{e, d, c, b};

  const Complex shift = b / 4.0;
  const Complex b2 = b * b;
  const Complex p = c - 3.0 * b2 / 8.0;
  const Complex q = b2 * b / 8.0 - b * c / 2.0 + d;
  const Complex r = -3.0 * b2 * b2 / 256.0 + b2 * c / 16.0 - b * d / 4.0 + e;

  const auto resolvent = solve_cubic(-p / 2.0, -r, (4.0 * p * r - q * q) / 8.0);
  Complex y = resolvent.roots[0];
  for (auto cand : resolvent.roots)
    if (std::abs(2.0 * cand - p) > std::abs(2.0 * y - p)) y = cand;

  const Complex s = principal_root(2.0 * y - p, 2);
  if (std::abs(s) < eps) {
    std::vector<Complex> coeffs(low.begin(), low.end());
    coeffs.push_back(Complex{1.0, 0.0});
    auto rs = find_all_roots(ComplexPolynomial(std::move(coeffs)));
    SolverResult out{rs.roots, SolverMethod::oracle_fallback, rs.max_residual};
    return out;
  }

  const Complex half_q_over_s = q / (2.0 * s);
  // t^2 - s t + (y + q/(2s)) = 0  and  t^2 + s t + (y - q/(2s)) = 0
  const auto plus = solve_quadratic(-s, y + half_q_over_s);
  const auto minus = solve_quadratic(s, y - half_q_over_s);

  SolverResult out{{plus.roots[0] - shift, plus.roots[1] - shift,
                    minus.roots[0] - shift, minus.roots[1] - shift},
                   SolverMethod::ferrari};
  out.max_residual = detail::residual_of(low, out.roots);
  return out;
}

}  // namespace ratmap
