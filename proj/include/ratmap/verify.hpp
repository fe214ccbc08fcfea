#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ratmap/oracle.hpp"
#include "ratmap/parallel.hpp"
#include "ratmap/random.hpp"
#include "ratmap/relations.hpp"
#include "ratmap/solvers.hpp"

// Cross-module property suites. Random inputs are drawn sequentially from one
// seeded sampler before any parallel work, so reports depend only on the seed.

namespace ratmap {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;      // worst measured quantity
  double tolerance = 0.0;  // pass threshold for `worst`
  std::string detail;      // first failing case, or extra measurements
};

struct VerifyConfig {
  std::vector<int> ns{1, 2, 3, 4};
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  double multiplier_tol = 1e-6;
  double identity_tol = 1e-10;
  double solver_tol = 1e-8;
  double approx_large_tol = 0.15;
  double approx_small_tol = 0.01;
};

namespace detail {

inline std::string fmt_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", z.real(), z.imag());
  return buf;
}

struct Outcome {
  double measure = 0.0;
  bool ok = true;
  std::string note;
};

inline void fold(SuiteResult& s, const std::vector<Outcome>& outcomes) {
  for (const auto& o : outcomes) {
    ++s.cases;
    s.worst = std::max(s.worst, o.measure);
    if (!o.ok) {
      ++s.failures;
      if (s.detail.empty()) s.detail = o.note;
    }
  }
  s.passed = s.failures == 0;
}

// Smallest |lambda_oracle - lambda| over the finite fixed points of the map.
inline double oracle_multiplier_gap(const MapParams& p, Complex lambda) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : fixed_points(p).points) best = std::min(best, std::abs(r.lambda - lambda));
  return best;
}

}  // namespace detail

/// Every branch of a_from_c (and c_from_a for n <= 3) must produce a map whose
/// oracle fixed points include the requested multiplier.
inline SuiteResult verify_round_trip(const VerifyConfig& cfg) {
  struct Trial {
    int n;
    bool a_side;  // true: c fixed, solve for a
    Complex fixed, lambda;
  };
  std::vector<Trial> trials;
  Sampler rng(cfg.seed);
  for (int n : cfg.ns) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const Complex lambda = rng.in_disk(0.95);
      const Complex c = rng.in_box(2.0);
      const Complex a = rng.in_box(2.0);
      trials.push_back({n, true, c, lambda});
      if (n <= 3) trials.push_back({n, false, a, lambda});
    }
  }
  std::vector<std::vector<detail::Outcome>> out(trials.size());
  parallel_for(trials.size(), cfg.threads, [&](std::size_t i) {
    const auto& t = trials[i];
    const auto branches = t.a_side ? a_from_c(t.n, t.fixed, t.lambda) : c_from_a(t.n, t.fixed, t.lambda);
    for (const auto& b : branches) {
      const MapParams p = t.a_side ? MapParams(t.n, b.value, t.fixed) : MapParams(t.n, t.fixed, b.value);
      const double gap = detail::oracle_multiplier_gap(p, t.lambda);
      const double rel = gap / std::max(1.0, std::abs(t.lambda));
      detail::Outcome o{rel, rel <= cfg.multiplier_tol, {}};
      if (!o.ok)
        o.note = "n=" + std::to_string(t.n) + (t.a_side ? " a-from-c c=" : " c-from-a a=") +
                 detail::fmt_complex(t.fixed) + " lambda=" + detail::fmt_complex(t.lambda) +
                 " branch " + std::to_string(b.k) + " gap " + std::to_string(gap);
      out[i].push_back(o);
    }
  });
  SuiteResult s{"round-trip", true, 0, 0, 0.0, cfg.multiplier_tol, {}};
  for (const auto& o : out) detail::fold(s, o);
  return s;
}

/// The two on-shell expressions for a agree on every c-side root.
inline SuiteResult verify_on_shell_identity(const VerifyConfig& cfg) {
  struct Trial {
    int n;
    Complex c, lambda;
    std::size_t pick;
  };
  std::vector<Trial> trials;
  Sampler rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const int n = cfg.ns[t % cfg.ns.size()];
    const Complex c = rng.in_box(2.0);
    const Complex lambda = rng.in_disk(0.95);
    const auto pick = static_cast<std::size_t>(rng.uniform() * 1e9);
    trials.push_back({n, c, lambda, pick});
  }
  std::vector<detail::Outcome> out(trials.size());
  parallel_for(trials.size(), cfg.threads, [&](std::size_t i) {
    const auto& t = trials[i];
    const auto xis = xi_from_c(t.n, t.c, t.lambda);
    const Complex xi = xis[t.pick % xis.size()];
    const double gap = appendix_identity_check(t.n, xi, t.c, t.lambda);
    out[i] = {gap, gap < cfg.identity_tol, {}};
    if (!out[i].ok)
      out[i].note = "n=" + std::to_string(t.n) + " c=" + detail::fmt_complex(t.c) +
                    " lambda=" + detail::fmt_complex(t.lambda) + " gap " + std::to_string(gap);
  });
  SuiteResult s{"on-shell-identity", true, 0, 0, 0.0, cfg.identity_tol, {}};
  detail::fold(s, out);
  return s;
}

/// Closed-form quadratic/cubic/quartic roots against the iterative finder.
/// Degrees cycle 2, 3, 4; coefficients of the monic form lie in |z| <= 10.
inline SuiteResult verify_solvers(const VerifyConfig& cfg) {
  std::vector<std::vector<Complex>> polys;
  Sampler rng(cfg.seed ^ 0xd1b54a32d192ed03ULL);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const int deg = 2 + static_cast<int>(t % 3);
    std::vector<Complex> c(static_cast<std::size_t>(deg));
    for (auto& x : c) x = rng.in_disk(10.0);
    polys.push_back(std::move(c));
  }
  std::vector<detail::Outcome> out(polys.size());
  parallel_for(polys.size(), cfg.threads, [&](std::size_t i) {
    const auto& c = polys[i];
    SolverResult closed;
    if (c.size() == 2) closed = solve_quadratic(c[0], c[1]);
    else if (c.size() == 3) closed = solve_cubic(c[0], c[1], c[2]);
    else closed = solve_quartic(c[0], c[1], c[2], c[3]);
    // Ascending coefficients of t^d + c0 t^{d-1} + ... + c_{d-1}.
    std::vector<Complex> asc(c.rbegin(), c.rend());
    asc.push_back(1.0);
    const auto oracle = find_all_roots(ComplexPolynomial(std::move(asc))).roots;
    const double d = hausdorff_distance(closed.roots, oracle);
    out[i] = {d, d < cfg.solver_tol, {}};
    if (!out[i].ok) {
      out[i].note = "degree " + std::to_string(c.size()) + " coefficients";
      for (auto x : c) out[i].note += " " + detail::fmt_complex(x);
      out[i].note += " distance " + std::to_string(d);
    }
  });
  SuiteResult s{"solver-vs-oracle", true, 0, 0, 0.0, cfg.solver_tol, {}};
  detail::fold(s, out);
  return s;
}

/// n = 5 asymptotic branches on the unit lambda-circle: c = 16 (dominant c,
/// all branches) and c = 1/16 (small c, single branch). The worst residual
/// ratios are reported whether or not they pass.
inline std::vector<SuiteResult> verify_approximations(const VerifyConfig& cfg, int samples = 256) {
  const int n = 5;
  SuiteResult large{"approx-large-c16", true, 0, 0, 0.0, cfg.approx_large_tol, {}};
  SuiteResult small{"approx-small-c1/16", true, 0, 0, 0.0, cfg.approx_small_tol, {}};
  const Complex c_large = 16.0, c_small = 1.0 / 16.0;
  std::vector<detail::Outcome> lo, so;
  for (int j = 0; j < samples; ++j) {
    const Complex lambda = std::polar(1.0, 2.0 * std::numbers::pi * j / samples);
    try {
      for (const auto& b : approx_a_from_c_large(n, c_large, lambda)) {
        const double r = b.residual_c_side / std::abs(c_large);
        lo.push_back({r, r < cfg.approx_large_tol, "lambda=" + detail::fmt_complex(lambda)});
      }
    } catch (const Error& e) {
      lo.push_back({0.0, false, std::string("lambda=") + detail::fmt_complex(lambda) + ": " + e.what()});
    }
    try {
      const auto b = approx_a_from_c_small(n, c_small, lambda);
      const double r = b.residual_c_side / std::abs(b.xi);
      so.push_back({r, r < cfg.approx_small_tol, "lambda=" + detail::fmt_complex(lambda)});
    } catch (const Error& e) {
      so.push_back({0.0, false, std::string("lambda=") + detail::fmt_complex(lambda) + ": " + e.what()});
    }
  }
  detail::fold(large, lo);
  detail::fold(small, so);
  return {large, small};
}

inline std::vector<SuiteResult> verify_all(const VerifyConfig& cfg) {
  if (cfg.trials == 0) throw Error(ErrorKind::invalid_argument, "verify: trials must be >= 1");
  if (cfg.ns.empty()) throw Error(ErrorKind::invalid_argument, "verify: empty n list");
  for (int n : cfg.ns)
    if (n < 1 || n > 4) throw Error(ErrorKind::invalid_argument, "verify: n must be in 1..4");
  std::vector<SuiteResult> out{verify_round_trip(cfg), verify_on_shell_identity(cfg),
                               verify_solvers(cfg)};
  for (auto& s : verify_approximations(cfg)) out.push_back(std::move(s));
  return out;
}

}  // namespace ratmap
