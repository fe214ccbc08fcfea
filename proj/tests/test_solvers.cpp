#include <gtest/gtest.h>

#include "ratmap/random.hpp"
#include "ratmap/solvers.hpp"

using namespace ratmap;
using namespace std::complex_literals;

namespace {

std::vector<Complex> oracle_roots(std::vector<Complex> low) {
  low.push_back(1.0);
  return find_all_roots(ComplexPolynomial(std::move(low))).roots;
}

}  // namespace

TEST(Quadratic, Examples) {
  auto r = solve_quadratic(0.0, -1.0);
  EXPECT_EQ(r.method, SolverMethod::quadratic);
  EXPECT_LT(std::abs(r.roots[0] - 1.0), 1e-15);
  EXPECT_LT(std::abs(r.roots[1] + 1.0), 1e-15);

  // 2 xi^2 - xi = 0 in monic form: xi^2 - xi/2 = 0, '+' branch first.
  auto h = solve_quadratic(-0.5, 0.0);
  EXPECT_LT(std::abs(h.roots[0] - 0.5), 1e-16);
  EXPECT_EQ(h.roots[1], Complex(0.0, 0.0));
  for (auto x : h.roots) EXPECT_EQ(std::abs(2.0 * x * x - x), 0.0);

  auto d = solve_quadratic(-2.0, 1.0);
  EXPECT_LT(std::abs(d.roots[0] - 1.0), 1e-15);
  EXPECT_LT(std::abs(d.roots[1] - 1.0), 1e-15);
}

TEST(Cubic, Examples) {
  auto r = solve_cubic(0.0, 0.0, -1.0);
  EXPECT_EQ(r.method, SolverMethod::cardano);
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  EXPECT_LT(std::abs(r.roots[0] - 1.0), 1e-15);
  EXPECT_LT(std::abs(r.roots[1] - w), 1e-15);
  EXPECT_LT(std::abs(r.roots[2] - w * w), 1e-15);

  // 2 xi^3 - xi = 0 -> xi^3 - xi/2 = 0.
  auto h = solve_cubic(0.0, -0.5, 0.0);
  EXPECT_LT(hausdorff_distance(h.roots, {0.0, std::sqrt(0.5), -std::sqrt(0.5)}), 1e-15);
  for (auto x : h.roots) EXPECT_LT(std::abs(2.0 * x * x * x - x), 1e-15);

  auto g = solve_cubic(0.0, 1.0 + 1i, 2.0);
  EXPECT_LT(hausdorff_distance(g.roots, oracle_roots({2.0, 1.0 + 1i, 0.0})), 1e-10);
  EXPECT_LT(g.max_residual, 1e-10);
}

TEST(Cubic, TripleAndDegenerateRoots) {
  // (z - 1)^3
  auto t = solve_cubic(-3.0, 3.0, -1.0);
  for (auto x : t.roots) EXPECT_LT(std::abs(x - 1.0), 1e-5);
  // p = 0: z^3 + 8 = 0 exercises the u0 -> 0 guard for one sign choice.
  auto p0 = solve_cubic(0.0, 0.0, 8.0);
  for (auto x : p0.roots) EXPECT_LT(std::abs(x * x * x + 8.0), 1e-13);
}

TEST(Cubic, PairingConstraint) {
  Sampler rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const Complex b = rng.in_disk(10), c = rng.in_disk(10), d = rng.in_disk(10);
    const auto r = solve_cubic(b, c, d);
    // Recover u0, v0 from the k = 0, 1 roots and check u0 v0 = -p/3.
    const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
    const Complex t0 = r.roots[0] + b / 3.0, t1 = r.roots[1] + b / 3.0;
    // t0 = u + v, t1 = u w + v w^2  =>  u = (t0 w^2 - t1) / (w^2 - w) ... solve 2x2.
    const Complex u = (t1 - t0 * w * w) / (w - w * w);
    const Complex v = t0 - u;
    const Complex p = c - b * b / 3.0;
    if (std::abs(u) > 1e-6) {
      EXPECT_LT(std::abs(u * v + p / 3.0), 1e-9 * (1.0 + std::abs(p))) << trial;
    }
  }
}

TEST(Quartic, Examples) {
  auto r = solve_quartic(0.0, 0.0, 0.0, -1.0);
  EXPECT_EQ(r.method, SolverMethod::ferrari);
  EXPECT_LT(hausdorff_distance(r.roots, {1.0, 1i, -1.0, -1i}), 1e-14);

  // 2 xi^4 - xi = 0 -> xi^4 - xi/2 = 0.
  auto h = solve_quartic(0.0, 0.0, -0.5, 0.0);
  const double s = std::cbrt(0.5);
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  EXPECT_LT(hausdorff_distance(h.roots, {0.0, s, s * w, s * w * w}), 1e-14);
  for (auto x : h.roots) EXPECT_LT(std::abs(2.0 * x * x * x * x - x), 1e-14);
}

TEST(Quartic, AllEqualRootsFallBack) {
  auto r = solve_quartic(0.0, 0.0, 0.0, 0.0);
  EXPECT_EQ(r.method, SolverMethod::oracle_fallback);
  for (auto x : r.roots) EXPECT_LT(std::abs(x), 1e-3);
}

TEST(Quartic, Biquadratic) {
  // (z^2 - 1)(z^2 - 4): q = 0 after depression.
  auto r = solve_quartic(0.0, -5.0, 0.0, 4.0);
  EXPECT_EQ(r.method, SolverMethod::ferrari);
  EXPECT_LT(hausdorff_distance(r.roots, {1.0, -1.0, 2.0, -2.0}), 1e-14);
}

TEST(Solvers, DeterministicOrder) {
  const auto a = solve_quartic(1.0 + 2i, -0.5, 3i, 0.25);
  const auto b = solve_quartic(1.0 + 2i, -0.5, 3i, 0.25);
  EXPECT_EQ(a.roots, b.roots);
  const auto c = solve_cubic(1i, 2.0, -1.0);
  const auto d = solve_cubic(1i, 2.0, -1.0);
  EXPECT_EQ(c.roots, d.roots);
}

TEST(Solvers, MatchOracleOnRandomCoefficients) {
  Sampler rng(314);
  for (int trial = 0; trial < 2000; ++trial) {
    const Complex b = rng.in_disk(10), c = rng.in_disk(10), d = rng.in_disk(10),
                  e = rng.in_disk(10);
    const auto q = solve_quadratic(b, c);
    EXPECT_LT(hausdorff_distance(q.roots, oracle_roots({c, b})), 1e-8);
    const auto cu = solve_cubic(b, c, d);
    EXPECT_LT(hausdorff_distance(cu.roots, oracle_roots({d, c, b})), 1e-8);
    const auto qu = solve_quartic(b, c, d, e);
    EXPECT_LT(hausdorff_distance(qu.roots, oracle_roots({e, d, c, b})), 1e-8);
    const double scale = 1.0 + std::max({std::abs(b), std::abs(c), std::abs(d), std::abs(e)});
    EXPECT_LE(q.max_residual, 1e-9 * scale);
    EXPECT_LE(cu.max_residual, 1e-9 * scale);
    EXPECT_LE(qu.max_residual, 1e-9 * scale);
  }
}
