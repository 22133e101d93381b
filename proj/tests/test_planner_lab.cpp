#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tcmap/planner_lab.hpp"

namespace {

using tcmap::Path;
using tcmap::Planner;
using tcmap::Point;
using tcmap::ValidationOptions;

ValidationOptions options(std::size_t samples, std::uint64_t seed = 1, std::size_t k = 64) {
  ValidationOptions o;
  o.samples = samples;
  o.seed = seed;
  o.path_samples = k;
  return o;
}

TEST(Planner, SphereCoverPartitionsAndHitsEndpoints) {
  for (int n = 1; n <= 3; ++n) {
    const Planner p = tcmap::sphere_cover_planner(n);
    EXPECT_EQ(p.domains.size(), 2u);
    const auto r = tcmap::validate_planner(p, options(10000, 17));
    EXPECT_EQ(r.uncovered, 0u) << n;
    EXPECT_EQ(r.overlapping, 0u) << n;
    EXPECT_DOUBLE_EQ(r.coverage(), 1.0);
    EXPECT_LT(r.max_endpoint_error, 1e-9) << n;
    EXPECT_GT(r.domain_hits[1], 0u) << "antipodal pairs are sampled";
    EXPECT_TRUE(r.deterministic);
    EXPECT_TRUE(r.passed);
  }
}

TEST(Planner, AntipodalPairsGiveTheSameConstantPoint) {
  const Planner p = tcmap::sphere_cover_planner(2);
  const tcmap::ModelSpace rp2 = tcmap::ModelSpace::real_projective(2);
  const Point x{0.6, 0.0, 0.8};
  const Point y{-0.6, -0.0, -0.8};
  ASSERT_EQ(p.locate(x, y), 1u);
  ASSERT_EQ(p.locate(y, x), 1u);
  const Path a = p.domains[1].path(x, y, 16);
  const Path b = p.domains[1].path(y, x, 16);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k], a.front());
    EXPECT_EQ(b[k], b.front());
  }
  EXPECT_LT(rp2.distance(a.front(), b.front()), 1e-12);
}

TEST(Planner, IdenticalPairIsConstantGeodesic) {
  const Planner p = tcmap::sphere_cover_planner(3);
  const Point x{0.5, 0.5, 0.5, 0.5};
  ASSERT_EQ(p.locate(x, x), 0u);
  const Path path = p.domains[0].path(x, x, 8);
  for (const Point& q : path) EXPECT_LT(p.target.distance(q, x), 1e-12);
}

TEST(Planner, CircleConventions) {
  const Planner c = tcmap::circle_identity_planner();
  const Point zero{0.0}, pi{std::numbers::pi}, quarter{std::numbers::pi / 2};
  ASSERT_EQ(c.locate(zero, pi), 1u);
  const Path half = c.domains[1].path(zero, pi, 3);
  EXPECT_NEAR(half[1][0], std::numbers::pi / 2, 1e-12);
  ASSERT_EQ(c.locate(zero, quarter), 0u);
  const Path arc = c.domains[0].path(zero, quarter, 3);
  EXPECT_NEAR(arc[1][0], std::numbers::pi / 4, 1e-12);
  EXPECT_TRUE(tcmap::validate_planner(c, options(5000)).passed);
}

TEST(Planner, TorusHasDimensionPlusOneDomains) {
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(tcmap::torus_identity_planner(n).domains.size(), static_cast<std::size_t>(n + 1));
  const auto r = tcmap::validate_planner(tcmap::torus_identity_planner(2), options(10000, 17));
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.max_endpoint_error, 1e-9);
  EXPECT_EQ(r.overlapping, 0u);
  for (std::size_t hits : r.domain_hits) EXPECT_GT(hits, 0u);
}

TEST(Planner, TorusDiagonalPairIsConstant) {
  const Planner t = tcmap::torus_identity_planner(2);
  const Point x{1.0, 4.0};
  const auto i = t.locate(x, x);
  ASSERT_EQ(i, 0u);
  for (const Point& q : t.domains[*i].path(x, x, 10)) EXPECT_LT(t.target.distance(q, x), 1e-12);
}

TEST(Planner, DoublingPathSamplesHalvesStep) {
  for (const Planner& p : {tcmap::sphere_cover_planner(2), tcmap::torus_identity_planner(2)}) {
    const double coarse = tcmap::validate_planner(p, options(2000, 5, 64)).max_step;
    const double fine = tcmap::validate_planner(p, options(2000, 5, 128)).max_step;
    ASSERT_GT(fine, 0.0);
    EXPECT_GE(coarse / fine, 2.0);
    EXPECT_LE(coarse / fine, 2.2);
  }
}

TEST(Planner, DeletedDomainReportsUncoveredPair) {
  Planner p = tcmap::sphere_cover_planner(2);
  p.domains.pop_back();
  const auto r = tcmap::validate_planner(p, options(2000));
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.coverage_ok);
  EXPECT_GT(r.uncovered, 0u);
  ASSERT_TRUE(r.first_uncovered);
  EXPECT_FALSE(p.locate(r.first_uncovered->first, r.first_uncovered->second));
}

TEST(Planner, CoverModeToleratesOverlap) {
  Planner p = tcmap::sphere_cover_planner(1);
  p.domains.push_back(p.domains[0]);
  auto o = options(2000);
  EXPECT_FALSE(tcmap::validate_planner(p, o).coverage_ok);
  o.mode = tcmap::CoverageMode::Cover;
  const auto r = tcmap::validate_planner(p, o);
  EXPECT_GT(r.overlapping, 0u);
  EXPECT_TRUE(r.passed);
}

TEST(Planner, LooseToleranceStillPasses) {
  auto o = options(1000);
  o.tol = 0.1;
  EXPECT_TRUE(tcmap::validate_planner(tcmap::sphere_cover_planner(3), o).passed);
  o.tol = 0;
  EXPECT_THROW(tcmap::validate_planner(tcmap::sphere_cover_planner(3), o), tcmap::InvalidInput);
}

TEST(Planner, DigestDependsOnSeedOnly) {
  const Planner p = tcmap::torus_identity_planner(2);
  const auto a = tcmap::validate_planner(p, options(1000, 9));
  const auto b = tcmap::validate_planner(p, options(1000, 9));
  const auto c = tcmap::validate_planner(p, options(1000, 10));
  EXPECT_EQ(a.digest, b.digest);
  EXPECT_NE(a.digest, c.digest);
}

TEST(Planner, ProductRequiresPartitions) {
  Planner overlapping = tcmap::circle_identity_planner();
  overlapping.domains.push_back(overlapping.domains[0]);
  EXPECT_THROW(tcmap::product_planner(overlapping, tcmap::circle_identity_planner()), tcmap::InvalidInput);
  Planner cover = tcmap::circle_identity_planner();
  cover.partition = false;
  EXPECT_THROW(tcmap::product_planner(tcmap::circle_identity_planner(), cover), tcmap::InvalidInput);

  Planner single = tcmap::circle_identity_planner();
  single.domains.pop_back();
  single.domains[0].contains = [](const Point&, const Point&) { return true; };
  EXPECT_EQ(tcmap::product_planner(single, single).domains.size(), 1u);
}

TEST(Planner, PathCallbackSeesEverySample) {
  auto o = options(300);
  std::size_t calls = 0;
  o.on_path = [&](std::size_t, std::size_t domain, const Path& path) {
    ++calls;
    EXPECT_LT(domain, 3u);
    EXPECT_EQ(path.size(), 64u);
  };
  tcmap::validate_planner(tcmap::torus_identity_planner(2), o);
  EXPECT_EQ(calls, 300u);
}

TEST(Planner, RejectsBadArguments) {
  EXPECT_THROW(tcmap::sphere_cover_planner(0), tcmap::InvalidInput);
  EXPECT_THROW(tcmap::torus_identity_planner(0), tcmap::InvalidInput);
  EXPECT_THROW(tcmap::validate_planner(tcmap::sphere_cover_planner(1), options(10, 1, 1)), tcmap::InvalidInput);
}

}  // namespace
