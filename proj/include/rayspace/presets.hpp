#pragma once

// The two case-study robots and their obstacles.

#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "rayspace/geom.hpp"
#include "rayspace/interval_set.hpp"
#include "rayspace/model.hpp"

namespace rayspace::presets {

// 6-DoF platform robot with 7 cables, q = [x, y, z, alpha, beta, gamma]
// (XYZ Euler angles of the platform).
inline RobotModel cdpr() {
  RobotModel m;
  m.name = "cdpr-7";
  m.links = {{"platform", Vec3::Zero()}};
  m.coordinates = {{"x", CoordKind::translation, 1, Vec3::UnitX()},
                   {"y", CoordKind::translation, 1, Vec3::UnitY()},
                   {"z", CoordKind::translation, 1, Vec3::UnitZ()},
                   {"alpha", CoordKind::orientation, 1, Vec3::UnitX()},
                   {"beta", CoordKind::orientation, 1, Vec3::UnitY()},
                   {"gamma", CoordKind::orientation, 1, Vec3::UnitZ()}};
  const std::vector<std::pair<Vec3, Vec3>> cables = {
      {{0, 1, 0}, {-0.15, -0.1, 0.3}}, {{0, 3, 0}, {-0.15, 0.1, 0.3}},
      {{4, 2, 0}, {0.15, 0, 0.3}},     {{0, 0, 4}, {-0.15, -0.2, -0.3}},
      {{0, 4, 4}, {-0.15, 0.2, -0.3}}, {{4, 4, 4}, {0.15, 0.2, -0.3}},
      {{4, 0, 4}, {0.15, -0.2, -0.3}}};
  for (std::size_t i = 0; i < cables.size(); ++i) {
    m.segments.push_back({static_cast<int>(i + 1), 0, cables[i].first, 1, cables[i].second});
  }
  return m;
}

inline std::map<std::string, Interval> cdpr_ranges() {
  const double q = std::numbers::pi / 4;
  return {{"x", {0.2, 3.8}}, {"y", {1.1, 2.9}}, {"z", {0.3, 3.7}},
          {"alpha", {-q, q}}, {"beta", {-q, q}},  {"gamma", {-q, q}}};
}

inline constexpr double kCdprCableDiameter = 0.02;

inline Obstacle box() {
  return {"box", make_box(Vec3(3, 2, 0.15), Vec3(0.3, 0.5, 0.3)), 0};
}

// Trunk cylinder A8-B8, crown sphere at B8 and a cone opening upwards from M.
inline std::vector<Obstacle> tree() {
  return {{"trunk", Cylinder{Vec3(2, 2, 0), Vec3(2, 2, 1.5), 0.12}, 0},
          {"crown", Sphere{Vec3(2, 2, 1.5), 0.4}, 0},
          {"cone", Cone{Vec3(2, 2, 0.3), Vec3::UnitZ(), std::numbers::pi / 6, 1.2}, 0}};
}

// 4-DoF two-link robot: spherical joint (alpha, beta, gamma) at the base
// origin, then a revolute joint theta about the x axis of link 1 at 0.6 m.
inline RobotModel mcdr() {
  RobotModel m;
  m.name = "mcdr-2link";
  m.links = {{"link1", Vec3::Zero()}, {"link2", Vec3(0, 0, 0.6)}};
  m.coordinates = {{"alpha", CoordKind::orientation, 1, Vec3::UnitX()},
                   {"beta", CoordKind::orientation, 1, Vec3::UnitY()},
                   {"gamma", CoordKind::orientation, 1, Vec3::UnitZ()},
                   {"theta", CoordKind::orientation, 2, Vec3::UnitX()}};
  m.segments = {{1, 0, Vec3(1, 1, 0), 1, Vec3(-0.2121, 0.2121, 0.6)},
                {2, 0, Vec3(-1, -1, 0), 1, Vec3(0.2121, -0.2121, 0.6)},
                {3, 0, Vec3(1, -1, 0), 1, Vec3(-0.3536, -0.3536, 0.6)},
                {4, 0, Vec3(0, 0.3, 0), 2, Vec3(0, 0.1, 0.4)},
                {5, 0, Vec3(0, -0.3, 0), 2, Vec3(0, -0.1, 0.4)}};
  return m;
}

inline std::map<std::string, Interval> mcdr_ranges() {
  const double q = std::numbers::pi / 4;
  return {{"alpha", {-q, q}}, {"beta", {-q, q}}, {"gamma", {-q, q}}, {"theta", {-q, q}}};
}

// The links as capsules fixed to their own frames.
inline std::vector<Obstacle> mcdr_links() {
  return {{"link1", Cylinder{Vec3::Zero(), Vec3(0, 0, 0.6), 0.03}, 1},
          {"link2", Cylinder{Vec3::Zero(), Vec3(0, 0, 0.4), 0.03}, 2}};
}

inline constexpr double kMcdrClearance = 0.02;

}  // namespace rayspace::presets
