#include <gtest/gtest.h>

#include "ratmap/oracle.hpp"
#include "ratmap/random.hpp"

using namespace ratmap;
using namespace std::complex_literals;

namespace {

const FixedPointRecord* find_near(const FixedPointList& fps, Complex z, double tol = 1e-9) {
  for (const auto& r : fps.points)
    if (std::abs(r.z - z) < tol) return &r;
  return nullptr;
}

}  // namespace

TEST(FixedPoints, PolynomialCaseZSquared) {
  const auto fps = fixed_points(MapParams::unchecked(2, 0.0, 0.0));
  ASSERT_EQ(fps.points.size(), 2u);
  const auto* zero = find_near(fps, 0.0);
  const auto* one = find_near(fps, 1.0);
  ASSERT_TRUE(zero && one);
  EXPECT_EQ(zero->lambda, Complex(0.0, 0.0));
  EXPECT_EQ(zero->classification, Stability::superattracting);
  EXPECT_LT(std::abs(one->lambda - 2.0), 1e-12);
  EXPECT_EQ(one->classification, Stability::repelling);
}

TEST(FixedPoints, SuperattractingHalf) {
  // z^4 - z^3 + 1/16: a superattracting point is a simple root of the cleared polynomial.
  const auto fps = fixed_points(MapParams(2, 1.0 / 16.0, 0.0));
  EXPECT_EQ(fps.points.size(), 4u);
  const auto* half = find_near(fps, 0.5);
  ASSERT_NE(half, nullptr);
  EXPECT_EQ(half->multiplicity, 1);
  EXPECT_LT(std::abs(half->lambda), 1e-12);
  EXPECT_EQ(half->classification, Stability::superattracting);
}

TEST(FixedPoints, ParabolicPointIsDeduplicated) {
  // lambda = 1 makes z = 3/4 a double root of z^4 - z^3 + 27/256.
  const auto fps = fixed_points(MapParams(2, 27.0 / 256.0, 0.0));
  EXPECT_EQ(fps.points.size(), 3u);
  const auto* p = find_near(fps, 0.75, 1e-6);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->multiplicity, 2);
  EXPECT_LT(std::abs(p->lambda - 1.0), 1e-6);
}

TEST(FixedPoints, SimpleFixedPointOfDegreeOneMap) {
  // n = 1: z + 1/z + 2 has the single finite fixed point z = -1/2.
  const auto fps = fixed_points(MapParams(1, 1.0, 2.0));
  ASSERT_EQ(fps.points.size(), 1u);
  EXPECT_LT(std::abs(fps.points[0].z + 0.5), 1e-15);
  EXPECT_LT(std::abs(fps.points[0].lambda + 3.0), 1e-14);
  EXPECT_EQ(fps.points[0].classification, Stability::repelling);
  // Translation and constant maps have no finite fixed points.
  EXPECT_TRUE(fixed_points(MapParams(1, 0.0, 1.0)).points.empty());
  EXPECT_TRUE(fixed_points(MapParams(1, 1.0, 0.0)).points.empty());
}

TEST(FixedPoints, CountsWithMultiplicity) {
  Sampler rng(1);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      const Complex a = rng.in_box(2.0), c = rng.in_box(2.0);
      int total = 0;
      const auto fps = fixed_points(MapParams(n, a, c));
      for (const auto& r : fps.points) {
        total += r.multiplicity;
        EXPECT_LE(r.residual_fixed, 1e-8 * (1.0 + std::abs(r.z)));
        EXPECT_LT(r.residual_multiplier, 1e-8 * (1.0 + std::abs(r.lambda)));
        EXPECT_EQ(r.classification, classify(r.lambda));
      }
      EXPECT_EQ(total + fps.rejected_near_zero, 2 * n);
      int poly_total = 0;
      for (const auto& r : fixed_points(MapParams(n, 0.0, c)).points) poly_total += r.multiplicity;
      EXPECT_EQ(poly_total, n);
    }
  }
}

TEST(Multiplier, Examples) {
  EXPECT_EQ(multiplier(0.0, MapParams(2, 0.0, 3.0)), Complex(0.0, 0.0));
  EXPECT_EQ(multiplier(1.0, MapParams(2, 0.0, 1.0)), Complex(2.0, 0.0));
  EXPECT_LT(std::abs(multiplier(0.5, MapParams(2, 1.0 / 16.0, 0.0))), 1e-16);
  try {
    multiplier(0.0, MapParams(2, 1.0, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(Classify, Bands) {
  EXPECT_EQ(classify(0.0), Stability::superattracting);
  EXPECT_EQ(classify(0.5), Stability::attracting);
  EXPECT_EQ(classify(2.0), Stability::repelling);
  EXPECT_EQ(classify(std::polar(1.0, 0.3)), Stability::neutral);
  EXPECT_EQ(classify(1.0 + 5e-10), Stability::neutral);
  EXPECT_EQ(classify(1.0 - 2e-9), Stability::attracting);
  EXPECT_EQ(classify(5e-10), Stability::superattracting);
}

TEST(HasAttracting, Examples) {
  auto inside = has_attracting_fixed_point(MapParams(2, 0.0, 0.2));
  ASSERT_TRUE(inside.attracting);
  // z = (1 - sqrt(1 - 4c))/2, lambda = 2z.
  const double z = (1.0 - std::sqrt(1.0 - 0.8)) / 2.0;
  EXPECT_LT(std::abs(inside.witness->z - z), 1e-12);
  EXPECT_LT(std::abs(inside.witness->lambda - 2.0 * z), 1e-12);
  EXPECT_NEAR(z, 0.276, 1e-3);

  EXPECT_FALSE(has_attracting_fixed_point(MapParams(2, 0.0, -1.0)).attracting);

  auto sa = has_attracting_fixed_point(MapParams(2, 1.0 / 16.0, 0.0));
  ASSERT_TRUE(sa.attracting);
  EXPECT_LT(std::abs(sa.witness->lambda), 1e-6);
}

TEST(Orbit, Examples) {
  auto t = iterate_orbit(0.5, MapParams::unchecked(2, 0.0, 0.0), 200, 1e-12);
  EXPECT_EQ(t.verdict, OrbitVerdict::converged_to_fixed_point);
  EXPECT_LT(std::abs(*t.limit), 1e-12);

  auto s = iterate_orbit(0.4, MapParams(2, 1.0 / 16.0, 0.0), 200, 1e-12);
  EXPECT_EQ(s.verdict, OrbitVerdict::converged_to_fixed_point);
  EXPECT_LT(std::abs(*s.limit - 0.5), 1e-6);

  auto d = iterate_orbit(0.0, MapParams(2, 0.0, 2.0), 200, 1e-12);
  EXPECT_EQ(d.verdict, OrbitVerdict::diverged);
  ASSERT_GE(d.points.size(), 4u);
  EXPECT_EQ(d.points[1], Complex(2.0, 0.0));
  EXPECT_EQ(d.points[2], Complex(6.0, 0.0));
  EXPECT_EQ(d.points[3], Complex(38.0, 0.0));

  for (std::size_t i = 0; i + 1 < s.points.size(); ++i)
    EXPECT_EQ(s.points[i + 1], apply_map(MapParams(2, 1.0 / 16.0, 0.0), s.points[i]));

  EXPECT_THROW(iterate_orbit(0.0, MapParams(2, 1.0, 0.0), 10, 1e-12), Error);
  EXPECT_THROW(iterate_orbit(1.0, MapParams(2, 1.0, 0.0), 0, 1e-12), Error);
}

TEST(Orbit, EscapeAndUndecided) {
  // R(z) = z^2 + 1/z^2 - 2 maps z = 1 onto the pole at 0.
  auto t = iterate_orbit(1.0, MapParams(2, 1.0, -2.0), 10, 1e-12);
  EXPECT_EQ(t.verdict, OrbitVerdict::escaped_to_pole);
  // A rotation-like orbit on the neutral boundary does not settle in 3 steps.
  auto u = iterate_orbit(0.3, MapParams(2, 0.0, -0.75), 3, 1e-12);
  EXPECT_EQ(u.verdict, OrbitVerdict::undecided);
}

TEST(Orbit, AttractingWitnessHasBasin) {
  // Maps with an attracting fixed point, built by choosing the multiplier.
  Sampler rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    const Complex c = rng.in_box(1.0);
    const Complex lambda = rng.in_disk(0.9);
    const Complex a = a_from_c(n, c, lambda)[0].value;
    const MapParams p(n, a, c);
    const auto w = has_attracting_fixed_point(p);
    ASSERT_TRUE(w.attracting);
    EXPECT_LE(std::abs(w.witness->lambda), std::abs(lambda) + 1e-9);
    bool converged = false;
    for (int dir = 0; dir < 8 && !converged; ++dir) {
      const Complex z0 = w.witness->z + 0.01 * std::polar(1.0, dir * std::numbers::pi / 4);
      const auto t = iterate_orbit(z0, p, 20000, 1e-12);
      converged = t.verdict == OrbitVerdict::converged_to_fixed_point &&
                  std::abs(*t.limit - w.witness->z) < 1e-6;
    }
    EXPECT_TRUE(converged) << "n=" << n << " a=" << p.a << " c=" << p.c;
  }
}
