#pragma once

// Runtime comparison of ray-based workspace generation against point-wise
// sampling on a 3-coordinate box.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <vector>

#include "rayspace/geom.hpp"
#include "rayspace/rayifw.hpp"

namespace rayspace {

struct BenchSetup {
  const RobotModel* model = nullptr;
  Pose base;                  // values of the coordinates outside the box
  std::array<int, 3> axes{};  // axes[0] carries the rays
  std::array<Interval, 3> ranges{};
  std::vector<Obstacle> obstacles;
  ClearanceSpec clearance;
};

struct BenchRow {
  int steps = 0;
  double ray_s = 0.0;    // tau^2 rays along axes[0]
  double point_s = 0.0;  // tau^3 oracle evaluations
  std::size_t free_points = 0;
};

namespace detail {

template <class F>
double median_seconds(int repeats, F&& f) {
  std::vector<double> t;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

}  // namespace detail

// Runs single-threaded.
inline BenchRow bench_once(const BenchSetup& s, int steps, int repeats = 3) {
  BenchRow row;
  row.steps = steps;
  const auto v1 = linspace(s.ranges[1].lo, s.ranges[1].hi, steps);
  const auto v2 = linspace(s.ranges[2].lo, s.ranges[2].hi, steps);
  const auto v0 = linspace(s.ranges[0].lo, s.ranges[0].hi, steps);
  row.ray_s = detail::median_seconds(repeats, [&] {
    for (double a : v1) {
      for (double b : v2) {
        Pose k = s.base;
        k[s.axes[1]] = a;
        k[s.axes[2]] = b;
        RayQuery q{s.model, s.axes[0], k, s.ranges[0], s.clearance, s.obstacles, true};
        (void)compute_ray(q);
      }
    }
  });
  row.point_s = detail::median_seconds(repeats, [&] {
    std::size_t free = 0;
    for (double a : v1) {
      for (double b : v2) {
        for (double c : v0) {
          Pose k = s.base;
          k[s.axes[1]] = a;
          k[s.axes[2]] = b;
          k[s.axes[0]] = c;
          if (!pose_interference_oracle(*s.model, k, s.obstacles, s.clearance).interferes) ++free;
        }
      }
    }
    row.free_points = free;
  });
  return row;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace rayspace
