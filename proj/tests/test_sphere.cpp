#include <gtest/gtest.h>

#include "rtlab/sphere.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace rtlab;

namespace {

ComplexUnitVector into_half(ComplexUnitVector z, std::size_t coord, bool imaginary) {
  const double c = imaginary ? z[coord].imag() : z[coord].real();
  return c < 0.0 ? z.rotated(-1.0) : z;
}

}  // namespace

TEST(UnitVectors, NormalizedOnConstruction) {
  RealUnitVector x({3.0, 4.0});
  EXPECT_NEAR(x[0], 0.6, 1e-15);
  EXPECT_NEAR(x[1], 0.8, 1e-15);
  ComplexUnitVector z({Complex(1, 1), Complex(0, 0)});
  EXPECT_NEAR(std::norm(z[0]), 1.0, 1e-15);
  EXPECT_THROW(RealUnitVector({0.0, 0.0}), DomainError);
}

TEST(UnitVectors, InnerProductConjugatesSecondArgument) {
  auto e = ComplexUnitVector::basis(2, 0);
  auto f = ComplexUnitVector::basis(2, 0, Complex(0, 1));
  // <e, i e> = 1 * conj(i) = -i
  EXPECT_NEAR(inner(e, f).real(), 0.0, 1e-15);
  EXPECT_NEAR(inner(e, f).imag(), -1.0, 1e-15);
}

TEST(UnitVectors, RealImageIsAnIsometry) {
  Rng rng = make_stream(11, {1});
  for (int i = 0; i < 200; ++i) {
    auto a = sample_complex_sphere(5, rng), b = sample_complex_sphere(5, rng);
    EXPECT_NEAR(distance(a, b), distance(complex_to_real(a), complex_to_real(b)), 1e-12);
    auto back = real_to_complex(complex_to_real(a));
    EXPECT_NEAR(distance(a, back), 0.0, 1e-12);
  }
}

TEST(UnitVectors, RotatedDistance) {
  Rng rng = make_stream(3, {2});
  auto v = sample_complex_sphere(4, rng);
  const Complex rho = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  EXPECT_NEAR(rotated_distance(v.rotated(rho), v, rho), 0.0, 1e-12);
  // |1 - rho| = sqrt(3)
  EXPECT_NEAR(rotated_distance(v, v, rho), std::sqrt(3.0), 1e-12);
}

TEST(CapBounds, UpperFormula) {
  EXPECT_DOUBLE_EQ(cap_measure_upper_bound(7, 0.0), 1.0);
  EXPECT_NEAR(cap_measure_upper_bound(10, 0.5), 0.082085, 1e-6);
  EXPECT_THROW(cap_measure_upper_bound(10, 1.0), DomainError);
  EXPECT_THROW(cap_measure_upper_bound(10, -0.1), DomainError);
}

TEST(CapBounds, LowerFormula) {
  EXPECT_NEAR(cap_measure_lower_bound(5, 0.1), 0.358579, 1e-6);
  EXPECT_DOUBLE_EQ(cap_measure_lower_bound(5, 0.4), 0.0);
  EXPECT_THROW(cap_measure_lower_bound(2, 0.1), DomainError);
  EXPECT_THROW(cap_measure_lower_bound(5, 0.0), DomainError);
}

TEST(CapBounds, MonteCarloUpper) {
  auto est = monte_carlo_upper_cap(40, 0.3, 200000, 5);
  EXPECT_LE(est.fraction(), std::exp(-3.6));
}

TEST(CapBounds, MonteCarloLower) {
  auto est = monte_carlo_lower_cap(50, 0.2, 200000, 6);
  EXPECT_GE(est.fraction(), 0.5 - 0.2 * std::sqrt(2.0) - 4.0 * est.standard_error());
}

TEST(CapBounds, MonteCarloIndependentOfThreads) {
  set_thread_count(1);
  auto a = monte_carlo_upper_cap(8, 0.2, 30000, 9);
  set_thread_count(4);
  auto b = monte_carlo_upper_cap(8, 0.2, 30000, 9);
  set_thread_count(0);
  EXPECT_EQ(a.hits, b.hits);
}

TEST(TwoSets, SmallCases) {
  auto e = ComplexUnitVector::basis(3, 0);
  std::vector<ComplexUnitVector> A{e}, B{e.rotated(-1.0)}, C{e};
  EXPECT_TRUE(two_set_distance_check(A, B, 0.0));
  EXPECT_FALSE(two_set_distance_check(A, C, 1.0));
  EXPECT_THROW(two_set_distance_check(A, std::vector<ComplexUnitVector>{}, 0.5), DomainError);
}

TEST(TwoSets, HalfMeasureSamplesAreFarApart) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = make_stream(seed, {0x2A});
    std::vector<ComplexUnitVector> A, B;
    for (int i = 0; i < 500; ++i) A.push_back(into_half(sample_complex_sphere(30, rng), 0, false));
    for (int i = 0; i < 500; ++i) B.push_back(into_half(sample_complex_sphere(30, rng), 1, true));
    EXPECT_TRUE(two_set_distance_check(A, B, 0.5)) << "seed " << seed;
  }
}

TEST(Rhombus, OrthogonalAxesAreNotAWitness) {
  std::vector<RealUnitVector> P{RealUnitVector::basis(4, 0), RealUnitVector::basis(4, 0, -1.0)};
  std::vector<RealUnitVector> Q{RealUnitVector::basis(4, 1), RealUnitVector::basis(4, 1, -1.0)};
  EXPECT_FALSE(rhombus_search(P, Q, 0.1).has_value());
  // the same square is a witness once the cross threshold reaches sqrt 2
  EXPECT_TRUE(find_rhombus(P, Q, 2.0, std::sqrt(2.0)).has_value());
}

TEST(Rhombus, NoFarPair) {
  std::vector<RealUnitVector> P{RealUnitVector::basis(4, 0)};
  EXPECT_FALSE(rhombus_search(P, P, 0.2).has_value());
  EXPECT_THROW(rhombus_search(P, P, 0.25), DomainError);
  EXPECT_THROW(rhombus_search(P, P, 0.0), DomainError);
}

TEST(Rhombus, RandomSamplesHaveNone) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng = make_stream(seed, {0x4B});
    std::vector<RealUnitVector> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(sample_real_sphere(4, rng));
    EXPECT_FALSE(rhombus_search(pts, pts, 0.2).has_value());
  }
}

TEST(Rhombus, PlantedAntipodesStillHaveNone) {
  // Far pairs exist here, so the cross-distance test actually runs.
  Rng rng = make_stream(4, {0x4C});
  std::vector<RealUnitVector> pts;
  for (int i = 0; i < 60; ++i) {
    auto x = sample_real_sphere(4, rng);
    pts.push_back(x);
    pts.push_back(-x);
  }
  EXPECT_FALSE(rhombus_search(pts, pts, 0.2).has_value());
}
