#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rayspace/geom.hpp"
#include "rayspace/presets.hpp"

using namespace rayspace;

namespace {

std::mt19937 rng(42);

Vec3 rand_vec(double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  return {d(rng), d(rng), d(rng)};
}

double grid_seg_seg(const Vec3& ai, const Vec3& bi, const Vec3& aj, const Vec3& bj) {
  double best = INFINITY;
  const int n = 200;
  for (int i = 0; i <= n; ++i) {
    const Vec3 p = ai + (bi - ai) * (double(i) / n);
    for (int j = 0; j <= n; ++j) best = std::min(best, (p - (aj + (bj - aj) * (double(j) / n))).norm());
  }
  return best;
}

Mat3 random_rotation() {
  Eigen::Quaterniond q(Eigen::Vector4d::Random().normalized());
  return q.toRotationMatrix();
}

}  // namespace

TEST(SegSeg, Examples) {
  Clearance c = seg_seg({0, 0, 0}, {1, 0, 0}, {0, 0, 1}, {0, 1, 1}, 0.5);
  EXPECT_NEAR(c.distance, 1.0, 1e-15);
  EXPECT_FALSE(c.interferes);
  EXPECT_NEAR(c.param_i, 0, 1e-15);
  EXPECT_NEAR(c.param_j, 0, 1e-15);

  c = seg_seg({0, 0, 0}, {1, 0, 0}, {0.5, -0.5, 0}, {0.5, 0.5, 0}, 0.0);
  EXPECT_NEAR(c.distance, 0.0, 1e-15);
  EXPECT_TRUE(c.interferes);

  c = seg_seg({0, 0, 0}, {1, 0, 0}, {0, 0.5, 0}, {1, 0.5, 0}, 0.1);
  EXPECT_NEAR(c.distance, 0.5, 1e-15);
  EXPECT_EQ(c.branch, "parallel");
  EXPECT_FALSE(c.interferes);

  EXPECT_THROW(seg_seg({0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, 0.1), Error);
}

TEST(SegSeg, GridOracleSymmetryAndRigidInvariance) {
  for (int k = 0; k < 60; ++k) {
    const Vec3 ai = rand_vec(), bi = rand_vec(), aj = rand_vec(), bj = rand_vec();
    const double d = seg_seg(ai, bi, aj, bj, 0).distance;
    EXPECT_NEAR(d, grid_seg_seg(ai, bi, aj, bj), 1e-3);
    EXPECT_LE(d, grid_seg_seg(ai, bi, aj, bj) + 1e-12);
    EXPECT_NEAR(d, seg_seg(aj, bj, ai, bi, 0).distance, 1e-12);
    const Mat3 r = random_rotation();
    const Vec3 t = rand_vec(-5, 5);
    EXPECT_NEAR(d, seg_seg(r * ai + t, r * bi + t, r * aj + t, r * bj + t, 0).distance, 1e-10);
  }
}

TEST(SegPoint, Branches) {
  Clearance c = seg_point({0, 0, 0}, {1, 0, 0}, {0.5, 0, 0.3}, 0.1);
  EXPECT_NEAR(c.distance, 0.3, 1e-15);
  EXPECT_EQ(c.branch, "middle");
  c = seg_point({0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, 0.1);
  EXPECT_NEAR(c.distance, 1.0, 1e-15);
  EXPECT_EQ(c.branch, "start");
  c = seg_point({0, 0, 0}, {1, 0, 0}, {2, 0, 0}, 0.1);
  EXPECT_NEAR(c.distance, 1.0, 1e-15);
  EXPECT_EQ(c.branch, "end");
}

TEST(SegTriangle, Examples) {
  const Vec3 v0(0, 0, 0), v1(1, 0, 0), v2(0, 1, 0);
  Clearance c = seg_triangle({0.25, 0.25, -1}, {0.25, 0.25, 1}, v0, v1, v2, 0.0);
  EXPECT_TRUE(c.interferes);
  EXPECT_NEAR(c.param_i, 0.5, 1e-15);
  c = seg_triangle({2, 2, -1}, {2, 2, 1}, v0, v1, v2, 0.1);
  EXPECT_FALSE(c.interferes);
  c = seg_triangle({0.1, 0.1, 0.05}, {0.3, 0.2, 0.05}, v0, v1, v2, 0.1);
  EXPECT_EQ(c.branch, "parallel");
  EXPECT_TRUE(c.interferes);
  EXPECT_NEAR(c.distance, 0.05, 1e-15);
  EXPECT_THROW(seg_triangle({0, 0, 1}, {0, 0, 2}, v0, v1, Vec3(2, 0, 0), 0.1), Error);
}

TEST(SegTriangle, SampledDistanceOracle) {
  for (int k = 0; k < 40; ++k) {
    const Vec3 a = rand_vec(), b = rand_vec(), v0 = rand_vec(), v1 = rand_vec(), v2 = rand_vec();
    const double d = seg_triangle(a, b, v0, v1, v2, 0).distance;
    double best = INFINITY;
    const int n = 60;
    for (int i = 0; i <= n; ++i) {
      const Vec3 p = a + (b - a) * (double(i) / n);
      for (int j = 0; j <= n; ++j) {
        for (int l = 0; l <= n - j; ++l) {
          const Vec3 q = v0 + (v1 - v0) * (double(j) / n) + (v2 - v0) * (double(l) / n);
          best = std::min(best, (p - q).norm());
        }
      }
    }
    EXPECT_LE(d, best + 1e-12);
    EXPECT_NEAR(d, best, 0.05);
  }
}

TEST(Obstacles, TreeSphere) {
  const Sphere crown{{2, 2, 1.5}, 0.4};
  const ClearanceSpec spec = ClearanceSpec::from_cable(presets::kCdprCableDiameter, 0.0);
  // passes 0.6 m from the center
  const Clearance c = seg_sphere({1, 2.6, 0}, {3, 2.6, 3}, crown, spec.cable_obstacle);
  EXPECT_FALSE(c.interferes);
  EXPECT_NEAR(c.distance, 0.2, 1e-12);
}

TEST(Obstacles, CylinderIsCapsuleDistance) {
  const Cylinder cyl{{0, 0, 0}, {0, 0, 1}, 0.2};
  Clearance c = seg_cylinder({0.5, -1, 0.5}, {0.5, 1, 0.5}, cyl, 0.01);
  EXPECT_NEAR(c.distance, 0.3, 1e-12);
  EXPECT_FALSE(c.interferes);
  c = seg_cylinder({0.2, -1, 0.5}, {0.2, 1, 0.5}, cyl, 0.01);
  EXPECT_TRUE(c.interferes);
}

TEST(Obstacles, UnitEllipsoidMatchesUnitSphere) {
  const Ellipsoid e{Vec3::Zero(), Mat3::Identity()};
  for (int k = 0; k < 100; ++k) {
    const Vec3 a = rand_vec(-2, 2), b = rand_vec(-2, 2);
    const Clearance ce = seg_ellipsoid(a, b, e);
    const Clearance cs = seg_point(a, b, Vec3::Zero(), 1.0);
    EXPECT_EQ(ce.interferes, cs.interferes);
    EXPECT_NEAR(ce.distance, cs.distance, 1e-14);
  }
}

TEST(Obstacles, EllipsoidBoundaryMapsToUnitSphere) {
  for (int k = 0; k < 50; ++k) {
    const Mat3 r = random_rotation();
    const Vec3 axes = rand_vec(0.2, 2.0).cwiseAbs() + Vec3::Constant(0.1);
    const Mat3 a = r * axes.cwiseInverse().cwiseAbs2().asDiagonal() * r.transpose();
    const Ellipsoid e{rand_vec(), a};
    const Vec3 dir = rand_vec().normalized();
    const Vec3 x = e.center + dir / std::sqrt(dir.dot(a * dir));
    EXPECT_NEAR((ellipsoid_normalizer(e) * (x - e.center)).norm(), 1.0, 1e-10);
  }
}

TEST(Obstacles, ConeExamples) {
  const Cone cone{Vec3::Zero(), Vec3::UnitZ(), std::numbers::pi / 6, 2.0};
  // a horizontal line at height 1 through (0, 3, 1) misses the double cone
  const Clearance miss = seg_cone({-1, 3, 1}, {1, 3, 1}, cone);
  EXPECT_FALSE(miss.interferes);
  EXPECT_LT(miss.param_j, 0);
  EXPECT_TRUE(seg_cone({-1, 0, 1}, {1, 0, 1}, cone).interferes);
  // a vertical line meets the double cone at any offset
  EXPECT_TRUE(seg_cone({3, 0, 0}, {3, 0, 1}, cone).interferes);
}

TEST(Obstacles, ConeConservative) {
  const Cone cone{{0, 0, -0.5}, Vec3(0.2, 0.1, 1).normalized(), 0.4, 1.5};
  int free_count = 0;
  for (int k = 0; k < 400; ++k) {
    const Vec3 a = rand_vec(-2, 2), b = rand_vec(-2, 2);
    if (seg_cone(a, b, cone).interferes) continue;
    ++free_count;
    for (int s = 0; s <= 1000; ++s) ASSERT_FALSE(inside_cone(a + (b - a) * (s / 1000.0), cone));
  }
  EXPECT_GT(free_count, 10);
}

TEST(Oracle, CdprExamples) {
  const RobotModel m = presets::cdpr();
  Pose q(6);
  q << 2, 2, 3.5, 0, 0, 0;
  EXPECT_FALSE(pose_interference_oracle(m, q, {}, ClearanceSpec::uniform(0.02)).interferes);
  Pose low(6);
  low << 3, 2, 0.35, 0, 0, 0;
  const OracleResult r = pose_interference_oracle(m, low, {presets::box()}, ClearanceSpec::uniform(0.02));
  EXPECT_TRUE(r.interferes);
  EXPECT_NE(r.pair.find("box"), std::string::npos);
  EXPECT_TRUE(pose_interference_oracle(m, q, {}, ClearanceSpec::uniform(10.0)).interferes);
}

TEST(Obstacles, Validation) {
  EXPECT_FALSE(validate(Obstacle{"s", Sphere{Vec3::Zero(), -1.0}, 0}).empty());
  EXPECT_FALSE(validate(Obstacle{"c", Cone{Vec3::Zero(), Vec3(0, 0, 2), 0.3, 1.0}, 0}).empty());
  EXPECT_FALSE(validate(Obstacle{"e", Ellipsoid{Vec3::Zero(), -Mat3::Identity()}, 0}).empty());
  TriMesh bad;
  bad.vertices = {Vec3::Zero()};
  bad.triangles = {{0, 1, 2}};
  EXPECT_FALSE(validate(Obstacle{"m", bad, 0}).empty());
  EXPECT_TRUE(validate(presets::box()).empty());
}
