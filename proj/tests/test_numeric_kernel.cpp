#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ratmap/complex.hpp"
#include "ratmap/polynomial.hpp"
#include "ratmap/random.hpp"

using namespace ratmap;
using namespace std::complex_literals;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_near(Complex got, Complex want, double tol) {
  EXPECT_LT(std::abs(got - want), tol) << "got " << got << " want " << want;
}

}  // namespace

TEST(PrincipalRoot, IdentityAndMinusOne) {
  expect_near(principal_root(1.0, 2), 1.0, 1e-15);
  expect_near(principal_root(-1.0, 2), 1i, 1e-15);
  // -1 with a negative zero imaginary part still sits on arg = +pi.
  expect_near(principal_root(Complex{-1.0, -0.0}, 2), 1i, 1e-15);
  expect_near(principal_root(Complex{-8.0, -0.0}, 3), std::polar(2.0, kPi / 3), 1e-14);
  EXPECT_EQ(principal_root(0.0, 5), Complex(0.0, 0.0));
}

TEST(PrincipalRoot, CubeRootOfRotatedEight) {
  const Complex w = 8.0 * std::polar(1.0, kPi / 2);
  const Complex r = principal_root(w, 3);
  expect_near(r, 2.0 * std::polar(1.0, kPi / 6), 1e-14);
  expect_near(r * r * r, w, 1e-14);
}

TEST(PrincipalRoot, RejectsBadInput) {
  EXPECT_THROW(principal_root(1.0, 0), Error);
  EXPECT_THROW(principal_root(Complex{NAN, 0.0}, 2), Error);
}

TEST(AllRoots, Examples) {
  auto cube = all_roots(1.0, 3);
  ASSERT_EQ(cube.size(), 3u);
  expect_near(cube[0], 1.0, 1e-15);
  expect_near(cube[1], std::polar(1.0, 2 * kPi / 3), 1e-15);
  expect_near(cube[2], std::polar(1.0, 4 * kPi / 3), 1e-15);

  auto one = all_roots(1.0, 1);
  ASSERT_EQ(one.size(), 1u);
  expect_near(one[0], 1.0, 0.0 + 1e-300);

  auto fourth = all_roots(16.0, 4);
  ASSERT_EQ(fourth.size(), 4u);
  expect_near(fourth[0], 2.0, 1e-15);
  expect_near(fourth[1], 2i, 1e-15);
  expect_near(fourth[2], -2.0, 1e-15);
  expect_near(fourth[3], -2i, 1e-15);

  for (auto z : all_roots(0.0, 4)) EXPECT_EQ(z, Complex(0.0, 0.0));
}

TEST(AllRoots, PowerAndPrincipalProperties) {
  Sampler rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Complex w = rng.in_box(20.0);
    const int m = 1 + trial % 9;
    const auto roots = all_roots(w, m);
    ASSERT_EQ(static_cast<int>(roots.size()), m);
    for (auto r : roots) EXPECT_LE(std::abs(ipow(r, m) - w), 1e-12 * std::abs(w));
    // The principal root is the one with argument in (-pi/m, pi/m].
    int principal_count = 0;
    for (auto r : roots) {
      const double t = principal_arg(r);
      if (t > -kPi / m + 1e-12 && t <= kPi / m + 1e-12) ++principal_count;
    }
    EXPECT_GE(principal_count, 1);
    const double t0 = principal_arg(roots[0]);
    EXPECT_TRUE(t0 > -kPi / m - 1e-12 && t0 <= kPi / m + 1e-12) << w << " m=" << m;
    EXPECT_EQ(roots[0], principal_root(w, m));
  }
}

TEST(PolyEval, Examples) {
  expect_near(poly_eval(ComplexPolynomial({1.0, 0.0, 1.0}), 1i), 0.0, 1e-15);
  expect_near(poly_eval(ComplexPolynomial({0.0, -1.0, 0.0, 1.0}), 2.0), 6.0, 1e-15);
  expect_near(poly_eval(ComplexPolynomial({3.0, -1.0, 0.0, 0.0, 2.0}), 0.0), 3.0, 0.0 + 1e-300);
}

TEST(ComplexPolynomial, TrimsAndValidates) {
  ComplexPolynomial p({1.0, 2.0, 0.0, 0.0});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_THROW(ComplexPolynomial({1.0, 0.0}), Error);
  EXPECT_THROW(ComplexPolynomial({Complex{INFINITY, 0.0}, 1.0}), Error);
}

TEST(PolyEval, OverflowIsAnError) {
  ComplexPolynomial p({0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  EXPECT_THROW(poly_eval(p, 1e300), Error);
}

TEST(FindAllRoots, SimpleCases) {
  auto r2 = find_all_roots(ComplexPolynomial({-1.0, 0.0, 1.0}));
  ASSERT_EQ(r2.roots.size(), 2u);
  EXPECT_LT(r2.max_residual, 1e-12);
  EXPECT_LT(hausdorff_distance(r2.roots, {1.0, -1.0}), 1e-12);

  auto r4 = find_all_roots(ComplexPolynomial({-1.0, 0.0, 0.0, 0.0, 1.0}));
  EXPECT_LT(hausdorff_distance(r4.roots, {1.0, 1i, -1.0, -1i}), 1e-12);

  ComplexPolynomial p({0.3, -(1.0 + 1i), 0.0, 1.0});
  auto r3 = find_all_roots(p);
  ASSERT_EQ(r3.roots.size(), 3u);
  for (auto r : r3.roots) EXPECT_LT(std::abs(poly_eval(p, r)), 1e-10);
}

TEST(FindAllRoots, MultipleRootsAreAcceptedAtRoundingLevel) {
  // (z - 1)^2 (z + 2)
  ComplexPolynomial p({2.0, -3.0, 0.0, 1.0});
  auto rs = find_all_roots(p);
  EXPECT_LT(hausdorff_distance(rs.roots, {1.0, 1.0, -2.0}), 1e-6);
  // z^4 with a quadruple root at 0.
  auto z4 = find_all_roots(ComplexPolynomial({0.0, 0.0, 0.0, 0.0, 1.0}));
  for (auto r : z4.roots) EXPECT_LT(std::abs(r), 1e-3);
}

TEST(FindAllRoots, RejectsBadTolerance) {
  RootFinderOptions opt;
  opt.tol = 0.0;
  EXPECT_THROW(find_all_roots(ComplexPolynomial({-1.0, 1.0}), opt), Error);
}

TEST(FindAllRoots, NonConvergenceCarriesBestEffort) {
  RootFinderOptions opt;
  opt.max_iterations = 1;
  ComplexPolynomial p({0.3, -(1.0 + 1i), 0.5, 1.0, 2.0, -1.0});
  try {
    find_all_roots(p, opt);
    FAIL() << "expected non-convergence";
  } catch (const RootFindingError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_convergence);
    EXPECT_EQ(e.best_effort().roots.size(), 5u);
    EXPECT_FALSE(e.best_effort().converged);
  }
}

// Expanding the returned roots must reproduce the input coefficients.
TEST(FindAllRoots, ReconstructsRandomPolynomials) {
  Sampler rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const int deg = 1 + trial % 10;
    std::vector<Complex> c;
    for (int i = 0; i <= deg; ++i) c.push_back(rng.in_disk(10.0));
    if (std::abs(c.back()) < 0.5) c.back() = 1.0;
    ComplexPolynomial p(c);
    const auto rs = find_all_roots(p);
    ASSERT_EQ(static_cast<int>(rs.roots.size()), deg);
    const auto back = ComplexPolynomial::from_roots(rs.roots, p.leading());
    double scale = 0.0;
    for (auto x : c) scale = std::max(scale, std::abs(x));
    for (int i = 0; i <= deg; ++i)
      EXPECT_LE(std::abs(back[i] - c[i]), 1e-8 * scale) << "trial " << trial << " i=" << i;
  }
}

// Independent check: roots planted by construction are recovered.
TEST(FindAllRoots, RecoversPlantedRoots) {
  Sampler rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int deg = 2 + trial % 7;
    std::vector<Complex> planted;
    for (int i = 0; i < deg; ++i) planted.push_back(rng.in_box(3.0));
    const auto p = ComplexPolynomial::from_roots(planted, rng.in_box(1.0) + Complex{2.0, 0.0});
    const auto rs = find_all_roots(p);
    EXPECT_LT(hausdorff_distance(rs.roots, planted), 1e-7) << "trial " << trial;
  }
}

TEST(Clusters, MergesCloseRoots) {
  const auto cl = cluster_points({1.0, 1.0 + 1e-9, 2.0, Complex{1.0, 2e-9}});
  ASSERT_EQ(cl.size(), 2u);
  EXPECT_EQ(cl[0].count, 3);
  EXPECT_EQ(cl[1].count, 1);
  EXPECT_NEAR(cl[0].center.real(), 1.0, 1e-9);
}
