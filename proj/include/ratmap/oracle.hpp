#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "ratmap/complex.hpp"
#include "ratmap/polynomial.hpp"
#include "ratmap/relations.hpp"

// Ground truth for a concrete map: fixed points from the cleared fixed-point
// polynomial, multipliers from the derivative, orbit iteration. Nothing here
// touches the closed forms.

namespace ratmap {

enum class Stability { superattracting, attracting, repelling, neutral };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::superattracting: return "superattracting";
    case Stability::attracting: return "attracting";
    case Stability::repelling: return "repelling";
    case Stability::neutral: return "neutral";
  }
  return "unknown";
}

struct OracleConfig {
  double classify_tol = 1e-9;
  double spurious_zero = 1e-9;   // |z| below this is rejected when a != 0
  double dedupe_radius = 1e-7;
  RootFinderOptions roots{};
};

struct FixedPointRecord {
  Complex z;
  Complex lambda;
  Stability classification = Stability::repelling;
  double residual_fixed = 0.0;       // |R(z) - z|
  double residual_multiplier = 0.0;  // |(n/z)(z^n - a/z^n) - lambda|, zero at a true fixed point
  int multiplicity = 1;
};

struct FixedPointList {
  std::vector<FixedPointRecord> points;
  int rejected_near_zero = 0;
};

/// R(z) = z^n + a/z^n + c.
inline Complex apply_map(const MapParams& p, Complex z) {
  const Complex zn = ipow(z, p.n);
  if (p.a == Complex{0.0, 0.0}) return zn + p.c;
  return zn + p.a / zn + p.c;
}

/// R'(z) = n z^{n-1} - n a z^{-(n+1)}.
inline Complex multiplier(Complex z, const MapParams& p) {
  require_finite(z, "z");
  const double dn = p.n;
  const bool has_a = p.a != Complex{0.0, 0.0};
  if (has_a && z == Complex{0.0, 0.0})
    throw Error(ErrorKind::domain, "multiplier: z = 0 is a pole of R when a != 0");
  Complex lam = dn * ipow(z, p.n - 1);
  if (has_a) lam -= dn * p.a / ipow(z, p.n + 1);
  return require_finite(lam, "multiplier");
}

/// Multiplier through the fixed-point form (n/z)(z^n - a/z^n); valid only at fixed points.
inline Complex multiplier_fixed_point_form(Complex z, const MapParams& p) {
  const Complex zn = ipow(z, p.n);
  return (static_cast<double>(p.n) / z) * (zn - p.a / zn);
}

inline Stability classify(Complex lambda, double tol = 1e-9) {
  const double m = std::abs(lambda);
  if (m < tol) return Stability::superattracting;
  if (std::abs(m - 1.0) <= tol) return Stability::neutral;
  if (m < 1.0) return Stability::attracting;
  return Stability::repelling;
}

/// Polynomial whose roots are the finite fixed points of R.
/// a != 0: z^{2n} - z^{n+1} + c z^n + a (from clearing z^n). For n = 1 the two
/// top terms cancel and the map has a single finite fixed point z = -a/c.
/// a == 0: z^n - z + c, the polynomial map's own fixed-point equation.
/// Returns nullopt when there are no finite fixed points (a translation, or a
/// nonzero constant).
inline std::optional<ComplexPolynomial> fixed_point_polynomial(const MapParams& p) {
  const int n = p.n;
  std::vector<Complex> c;
  if (p.a == Complex{0.0, 0.0}) {
    c.assign(static_cast<std::size_t>(n) + 1, Complex{0.0, 0.0});
    c[0] += p.c;
    c[1] += -1.0;
    c[n] += 1.0;
  } else {
    c.assign(2 * static_cast<std::size_t>(n) + 1, Complex{0.0, 0.0});
    c[0] += p.a;
    c[n] += p.c;
    c[n + 1] += -1.0;
    c[2 * n] += 1.0;
  }
  while (!c.empty() && c.back() == Complex{0.0, 0.0}) c.pop_back();
  if (c.size() < 2) return std::nullopt;
  return ComplexPolynomial(std::move(c));
}

inline FixedPointList fixed_points(const MapParams& params, const OracleConfig& cfg = {}) {
  params.validate_map();
  FixedPointList out;
  const auto poly = fixed_point_polynomial(params);
  if (!poly) return out;
  const auto roots = find_all_roots(*poly, cfg.roots).roots;

  const bool has_a = params.a != Complex{0.0, 0.0};
  std::vector<Complex> kept;
  for (auto z : roots) {
    if (has_a && std::abs(z) < cfg.spurious_zero) {
      ++out.rejected_near_zero;
      continue;
    }
    kept.push_back(z);
  }
  for (const auto& cl : cluster_points(kept, cfg.dedupe_radius)) {
    FixedPointRecord r;
    r.z = cl.center;
    r.multiplicity = cl.count;
    r.lambda = multiplier(r.z, params);
    r.classification = classify(r.lambda, cfg.classify_tol);
    r.residual_fixed = std::abs(apply_map(params, r.z) - r.z);
    r.residual_multiplier = std::abs(multiplier_fixed_point_form(r.z, params) - r.lambda);
    out.points.push_back(r);
  }
  return out;
}

struct AttractingWitness {
  bool attracting = false;
  std::optional<FixedPointRecord> witness;
};

/// True iff some fixed point has |lambda| < 1 - classify_tol; the witness is
/// the record of smallest |lambda|. Neutral points do not count.
inline AttractingWitness has_attracting_fixed_point(const MapParams& params,
                                                    const OracleConfig& cfg = {}) {
  AttractingWitness out;
  for (const auto& r : fixed_points(params, cfg).points) {
    if (std::abs(r.lambda) >= 1.0 - cfg.classify_tol) continue;
    if (!out.witness || std::abs(r.lambda) < std::abs(out.witness->lambda)) out.witness = r;
  }
  out.attracting = out.witness.has_value();
  return out;
}

enum class OrbitVerdict { converged_to_fixed_point, diverged, escaped_to_pole, undecided };

inline const char* to_string(OrbitVerdict v) {
  switch (v) {
    case OrbitVerdict::converged_to_fixed_point: return "converged_to_fixed_point";
    case OrbitVerdict::diverged: return "diverged";
    case OrbitVerdict::escaped_to_pole: return "escaped_to_pole";
    case OrbitVerdict::undecided: return "undecided";
  }
  return "unknown";
}

struct OrbitTrace {
  std::vector<Complex> points;
  OrbitVerdict verdict = OrbitVerdict::undecided;
  std::optional<Complex> limit;
  bool non_finite = false;
};

inline OrbitTrace iterate_orbit(Complex z0, const MapParams& params, int max_steps, double tol) {
  params.validate_map();
  require_finite(z0, "z0");
  if (max_steps < 1) throw Error(ErrorKind::invalid_argument, "iterate_orbit: max_steps >= 1");
  const bool has_a = params.a != Complex{0.0, 0.0};
  if (has_a && z0 == Complex{0.0, 0.0})
    throw Error(ErrorKind::domain, "iterate_orbit: z0 = 0 is a pole when a != 0");

  OrbitTrace t;
  t.points.push_back(z0);
  Complex z = z0;
  for (int step = 0; step < max_steps; ++step) {
    const Complex next = apply_map(params, z);
    if (!is_finite(next)) {
      t.verdict = OrbitVerdict::diverged;
      t.non_finite = true;
      return t;
    }
    t.points.push_back(next);
    if (std::abs(next) > 1e8) {
      t.verdict = OrbitVerdict::diverged;
      return t;
    }
    if (has_a && std::abs(next) < 1e-12) {
      t.verdict = OrbitVerdict::escaped_to_pole;
      return t;
    }
    if (std::abs(next - z) < tol && std::abs(apply_map(params, next) - next) < 10.0 * tol) {
      t.verdict = OrbitVerdict::converged_to_fixed_point;
      t.limit = next;
      return t;
    }
    z = next;
  }
  return t;
}

}  // namespace ratmap
