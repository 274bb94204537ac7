#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rayspace/model.hpp"
#include "rayspace/presets.hpp"

using namespace rayspace;

namespace {

Pose pose(std::initializer_list<double> v) {
  Pose p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) p[k++] = x;
  return p;
}

Mat3 rot(int axis, double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m = Mat3::Identity();
  const int i = (axis + 1) % 3, j = (axis + 2) % 3;
  m(i, i) = c;
  m(i, j) = -s;
  m(j, i) = s;
  m(j, j) = c;
  return m;
}

}  // namespace

TEST(Model, RotationChain) {
  const RobotModel m = presets::mcdr();
  EXPECT_TRUE(rotation_chain(m, Pose::Zero(4), 2).isApprox(Mat3::Identity()));

  RobotModel r;
  r.links = {{"arm", Vec3::Zero()}};
  r.coordinates = {{"q", CoordKind::orientation, 1, Vec3::UnitZ()}};
  r.segments = {{1, 0, Vec3(1, 0, 0), 1, Vec3(0, 1, 0)}};
  const Mat3 rz = rotation_chain(r, pose({std::numbers::pi / 2}), 1);
  Mat3 expect;
  expect << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LT((rz - expect).cwiseAbs().maxCoeff(), 1e-15);

  std::mt19937 rng(1);
  std::uniform_real_distribution<double> a(-3, 3);
  for (int k = 0; k < 20; ++k) {
    const Mat3 r2 = rotation_chain(m, pose({a(rng), a(rng), a(rng), a(rng)}), 2);
    EXPECT_LT((r2.transpose() * r2 - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r2.determinant(), 1.0, 1e-12);
  }
  EXPECT_THROW(rotation_chain(m, Pose::Zero(4), 3), Error);
}

TEST(Model, CdprAttachments) {
  const RobotModel m = presets::cdpr();
  const auto [a, b] = attachment_positions(m, pose({2, 2, 2, 0, 0, 0}), 0);
  EXPECT_TRUE(a.isApprox(Vec3(0, 1, 0)));
  EXPECT_LT((b - Vec3(1.85, 1.9, 2.3)).norm(), 1e-15);
  EXPECT_LT((segment_vector(m, pose({2, 2, 2, 0, 0, 0}), 0) - Vec3(1.85, 0.9, 2.3)).norm(), 1e-15);
  EXPECT_THROW(segment_vector(m, Pose::Zero(6), 7), Error);
}

TEST(Model, McdrIndependentChain) {
  const RobotModel m = presets::mcdr();
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> a(-1, 1);
  for (int k = 0; k < 20; ++k) {
    const Pose q = pose({a(rng), a(rng), a(rng), a(rng)});
    const Mat3 r1 = rot(0, q[0]) * rot(1, q[1]) * rot(2, q[2]);
    const Mat3 r2 = r1 * rot(0, q[3]);
    const Vec3 expect = r1 * Vec3(0, 0, 0.6) + r2 * Vec3(0, 0.1, 0.4);
    EXPECT_LT((attachment_positions(m, q, 3).second - expect).norm(), 1e-14);
    const auto [s, e] = attachment_positions(m, q, 3);
    EXPECT_LT((segment_vector(m, q, 3) + s - e).norm(), 1e-15);
  }
}

TEST(Model, Validate) {
  EXPECT_TRUE(validate(presets::cdpr()).empty());
  EXPECT_TRUE(validate(presets::mcdr()).empty());

  RobotModel bad = presets::mcdr();
  bad.segments[0].start_link = 2;
  bad.segments[0].end_link = 1;
  EXPECT_FALSE(validate(bad).empty());

  RobotModel dup = presets::cdpr();
  dup.coordinates[1].name = "x";
  EXPECT_FALSE(validate(dup).empty());

  RobotModel coincident = presets::cdpr();
  coincident.segments[0].start = coincident.segments[0].end;
  EXPECT_FALSE(validate(coincident).empty());

  EXPECT_FALSE(validate_pose(presets::cdpr(), pose({0, 0, 0, std::numbers::pi, 0, 0})).empty());
}

TEST(Model, RigidTranslationConsistency) {
  RobotModel m = presets::cdpr();
  const Vec3 shift(0.3, -0.2, 0.7);
  RobotModel moved = m;
  for (auto& s : moved.segments) s.start += shift;
  moved.links[0].offset += shift;
  const Pose q = pose({1.5, 2.1, 1.2, 0.2, -0.1, 0.3});
  for (int i = 0; i < 7; ++i) {
    EXPECT_LT((attachment_positions(moved, q, i).first - attachment_positions(m, q, i).first - shift).norm(), 1e-14);
    EXPECT_LT((segment_vector(moved, q, i) - segment_vector(m, q, i)).norm(), 1e-14);
  }
}

TEST(Model, TranslationEntersAffinely) {
  const RobotModel m = presets::cdpr();
  const Pose q = pose({1.5, 2.1, 1.2, 0.2, -0.1, 0.3});
  const double h = 0.1;
  for (int c = 0; c < 3; ++c) {
    Pose qp = q, qm = q;
    qp[c] += h;
    qm[c] -= h;
    for (int i = 0; i < 7; ++i) {
      const Vec3 d2 = attachment_positions(m, qp, i).second - 2 * attachment_positions(m, q, i).second +
                      attachment_positions(m, qm, i).second;
      EXPECT_LT(d2.norm(), 1e-13);
    }
  }
}
