#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "ratmap/complex.hpp"
#include "ratmap/error.hpp"

namespace ratmap {

/// Dense polynomial with coefficients in ascending order: coeffs()[i] multiplies z^i.
/// Trailing (leading-power) zero coefficients are trimmed on construction.
class ComplexPolynomial {
 public:
  explicit ComplexPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    for (auto c : coeffs_) require_finite(c, "polynomial coefficient");
    while (!coeffs_.empty() && std::abs(coeffs_.back()) == 0.0) coeffs_.pop_back();
    if (coeffs_.size() < 2)
      throw Error(ErrorKind::invalid_argument, "polynomial must have degree >= 1");
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex leading() const { return coeffs_.back(); }
  Complex operator[](std::size_t i) const { return coeffs_[i]; }

  /// Leading coefficient times prod (z - r_i).
  static ComplexPolynomial from_roots(std::span<const Complex> roots, Complex lead = {1.0, 0.0}) {
    std::vector<Complex> c{lead};
    for (auto r : roots) {
      c.push_back(Complex{0.0, 0.0});
      for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
      c[0] = -r * c[0];
    }
    return ComplexPolynomial(std::move(c));
  }

 private:
  std::vector<Complex> coeffs_;
};

/// Horner evaluation.
inline Complex poly_eval(const ComplexPolynomial& p, Complex z) {
  const auto c = p.coeffs();
  Complex acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * z + c[i];
  return require_finite(acc, "poly_eval");
}

namespace detail {

// p(z) and p'(z) in one Horner pass.
inline std::pair<Complex, Complex> eval_with_derivative(std::span<const Complex> c, Complex z) {
  Complex p = c.back();
  Complex dp{0.0, 0.0};
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
  return {p, dp};
}

// Rounding-level bound on |p(z)|: a few ulps of sum |c_i| |z|^i.
inline double rounding_bound(std::span<const Complex> c, Complex z) {
  const double r = std::abs(z);
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * r + std::abs(c[i]);
  return 64.0 * static_cast<double>(c.size()) * std::numeric_limits<double>::epsilon() * acc;
}

}  // namespace detail

struct RootSet {
  std::vector<Complex> roots;
  double max_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

class RootFindingError : public Error {
 public:
  RootFindingError(const std::string& what, RootSet best)
      : Error(ErrorKind::non_convergence, what), best_(std::move(best)) {}

  const RootSet& best_effort() const noexcept { return best_; }

 private:
  RootSet best_;
};

struct RootFinderOptions {
  double tol = 1e-14;      // relative update size at which a root is frozen
  int max_iterations = 500;
  double angle_offset = 0.4;
};

/// All roots of p by Aberth-Ehrlich simultaneous iteration.
///
/// Starting points sit on the circle of radius 1 + max|c_i / c_lead|, rotated
/// by `angle_offset` so that symmetric polynomials such as z^m - w do not start
/// on a fixed locus of the iteration. A root is frozen once its update is below
/// tol * (1 + |z|). Roots whose updates never settle are still accepted when
/// their residual is at rounding level, which is the normal situation at a
/// multiple root; otherwise RootFindingError carries the best-effort set.
inline RootSet find_all_roots(const ComplexPolynomial& p, const RootFinderOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw Error(ErrorKind::invalid_argument, "find_all_roots: tol must be > 0");
  const auto c = p.coeffs();
  const int deg = p.degree();
  const Complex lead = p.leading();

  RootSet out;
  if (deg == 1) {
    out.roots = {require_finite(-c[0] / lead, "linear root")};
    out.max_residual = std::abs(poly_eval(p, out.roots[0]));
    out.converged = true;
    return out;
  }

  double radius = 0.0;
  for (int i = 0; i < deg; ++i) radius = std::max(radius, std::abs(c[i] / lead));
  radius += 1.0;

  std::vector<Complex> z(deg);
  for (int k = 0; k < deg; ++k)
    z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / deg + opt.angle_offset);

  std::vector<bool> frozen(deg, false);
  int iter = 0;
  int remaining = deg;
  for (; iter < opt.max_iterations && remaining > 0; ++iter) {
    for (int k = 0; k < deg; ++k) {
      if (frozen[k]) continue;
      auto [pv, dpv] = detail::eval_with_derivative(c, z[k]);
      if (pv == Complex{0.0, 0.0}) {
        frozen[k] = true;
        --remaining;
        continue;
      }
      Complex sum{0.0, 0.0};
      for (int j = 0; j < deg; ++j) {
        if (j == k) continue;
        Complex d = z[k] - z[j];
        if (d == Complex{0.0, 0.0}) d = Complex{1e-300, 0.0};
        sum += 1.0 / d;
      }
      const Complex ratio = pv / dpv;
      Complex step = ratio / (1.0 - ratio * sum);
      if (!is_finite(step)) {
        // p'(z) == 0 or a pathological denominator: nudge off the critical point.
        step = Complex{1e-8 * (1.0 + std::abs(z[k])), 0.0} * std::polar(1.0, 0.7 * k + 0.3);
      }
      z[k] -= step;
      if (std::abs(step) <= opt.tol * (1.0 + std::abs(z[k]))) {
        frozen[k] = true;
        --remaining;
      }
    }
  }

  out.roots = z;
  out.iterations = iter;
  bool ok = true;
  for (int k = 0; k < deg; ++k) {
    if (!is_finite(z[k])) {
      ok = false;
      out.max_residual = INFINITY;
      continue;
    }
    const double res = std::abs(detail::eval_with_derivative(c, z[k]).first);
    out.max_residual = std::max(out.max_residual, res);
    if (!frozen[k] && res > detail::rounding_bound(c, z[k]) * 1e3) ok = false;
  }
  out.converged = ok;
  if (!ok) throw RootFindingError("find_all_roots: no convergence within iteration bound", out);
  return out;
}

}  // namespace ratmap
