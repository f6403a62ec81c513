#include <gtest/gtest.h>

#include "rtlab/partition.hpp"
#include "rtlab/random.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <vector>

using namespace rtlab;

namespace {

std::vector<std::size_t> hit_counts(const ZonalPartition& part, std::size_t samples, std::uint64_t seed) {
  std::vector<std::size_t> hits(part.size(), 0);
  Rng rng = make_stream(seed, {0x417});
  for (std::size_t i = 0; i < samples; ++i) ++hits[part.locate(sample_real_sphere(part.dim(), rng))];
  return hits;
}

// Pearson statistic plus a Bonferroni-corrected per-cell z test, both at the
// one-sided 4 sigma level.
void expect_equal_measure(const ZonalPartition& part, std::size_t samples, std::uint64_t seed) {
  const auto hits = hit_counts(part, samples, seed);
  const double n = static_cast<double>(part.size());
  const double expect = static_cast<double>(samples) / n;
  double chi2 = 0.0;
  for (std::size_t h : hits) chi2 += (h - expect) * (h - expect) / expect;
  const double alpha = boost::math::cdf(boost::math::complement(boost::math::normal(), 4.0));
  if (part.size() > 1) {
    boost::math::chi_squared dist(n - 1.0);
    EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(dist, alpha)));
  }
  const double z = boost::math::quantile(boost::math::complement(boost::math::normal(), alpha / (2.0 * n)));
  const double sd = std::sqrt(samples * (1.0 / n) * (1.0 - 1.0 / n));
  for (std::size_t c = 0; c < hits.size(); ++c) EXPECT_LE(std::abs(hits[c] - expect), z * sd) << "cell " << c;
}

}  // namespace

TEST(ZonalPartition, CircleQuarters) {
  auto part = make_sphere_partition(1, 4, 0);
  EXPECT_EQ(part.cells->size(), 4u);
  EXPECT_NEAR(part.max_diameter, std::sqrt(2.0), 1e-12);
  expect_equal_measure(*part.cells, 100000, 1);
}

TEST(ZonalPartition, SingleCellIsWholeSphere) {
  auto part = make_sphere_partition(3, 1, 0);
  EXPECT_DOUBLE_EQ(part.max_diameter, 2.0);
  EXPECT_THROW(partition_sphere(3, 1, 1.5, 0), InfeasiblePartition);
  EXPECT_NO_THROW(partition_sphere(3, 1, 2.0, 0));
}

TEST(ZonalPartition, RejectsBadArguments) {
  EXPECT_THROW(ZonalPartition(1, 4), DomainError);
  EXPECT_THROW(ZonalPartition(3, 0), DomainError);
  EXPECT_THROW(ZonalPartition(3, 5, true), DomainError);
  EXPECT_THROW(partition_sphere(2, 10, 0.0, 0), DomainError);
}

TEST(ZonalPartition, SmallDiameterWithFewCellsIsInfeasible) {
  // S^5 cannot be cut into 5000 cells of diameter 0.4 by this scheme.
  EXPECT_THROW(partition_sphere(3, 5000, 0.4, 1), InfeasiblePartition);
}

TEST(ZonalPartition, RepresentativesLocateToTheirCells) {
  for (std::size_t k : {1u, 2u, 3u}) {
    auto part = make_sphere_partition(k, 300, 17);
    for (std::size_t i = 0; i < part.n; ++i) EXPECT_EQ(part.locate(part.representatives[i]), i);
  }
}

TEST(ZonalPartition, SampledPointsStayInsideDiameterBound) {
  ZonalPartition part(4, 50);
  Rng rng = make_stream(2, {0x51});
  for (std::size_t c = 0; c < part.size(); ++c) {
    std::vector<RealUnitVector> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(part.sample(c, rng));
    for (const auto& x : pts) {
      EXPECT_EQ(part.locate(x), c);
      for (const auto& y : pts) EXPECT_LE(distance(x, y), part.cell_diameter_bound(c) + 1e-9);
    }
  }
}

TEST(ZonalPartition, LocateIsTotal) {
  ZonalPartition part(6, 777);
  Rng rng = make_stream(3, {0x52});
  for (int i = 0; i < 100000; ++i) EXPECT_LT(part.locate(sample_real_sphere(6, rng)), part.size());
}

TEST(ZonalPartition, EqualMeasureHighCount) {
  // 5000 cells on S^5 with 10^6 samples
  expect_equal_measure(ZonalPartition(6, 5000), 1000000, 4);
}

TEST(ZonalPartition, EqualMeasureVariousShapes) {
  expect_equal_measure(ZonalPartition(3, 37), 200000, 5);
  expect_equal_measure(ZonalPartition(5, 64, true), 200000, 6);
  expect_equal_measure(ZonalPartition(11, 16, true), 200000, 7);
}

TEST(ZonalPartition, DiameterShrinksWithCellCount) {
  double prev = 3.0;
  for (std::size_t n : {8u, 64u, 512u, 4096u}) {
    ZonalPartition part(3, n);
    EXPECT_LT(part.max_diameter(), prev);
    prev = part.max_diameter();
  }
  EXPECT_LT(prev, 0.2);
}

TEST(ZonalPartition, AntipodalMirror) {
  for (std::size_t d : {2u, 3u, 5u}) {
    ZonalPartition part(d, 40, true);
    Rng rng = make_stream(d, {0x53});
    for (std::size_t c = 0; c < part.size(); ++c) {
      EXPECT_EQ(part.mirror(part.mirror(c)), c);
      auto x = part.sample(c, rng);
      EXPECT_EQ(part.locate(-x), part.mirror(c));
    }
  }
  EXPECT_THROW(ZonalPartition(3, 40).mirror(0), DomainError);
}

TEST(SpherePartition, ReachesDiameterWhenFeasible) {
  auto part = partition_sphere(1, 64, 0.1, 9);
  EXPECT_EQ(part.n, 64u);
  EXPECT_LE(part.max_diameter, 0.1);
}

TEST(SpherePartition, DeterministicRepresentatives) {
  auto a = make_sphere_partition(2, 40, 123), b = make_sphere_partition(2, 40, 123);
  auto c = make_sphere_partition(2, 40, 124);
  bool differ = false;
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(distance(a.representatives[i], b.representatives[i]), 0.0);
    differ = differ || distance(a.representatives[i], c.representatives[i]) > 0.0;
  }
  EXPECT_TRUE(differ);
}
