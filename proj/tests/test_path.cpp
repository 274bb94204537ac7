#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <queue>
#include <random>

#include "rayspace/graph.hpp"
#include "rayspace/path.hpp"
#include "rayspace/presets.hpp"

using namespace rayspace;

namespace {

Quaternion random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n;
  Eigen::Vector4d v(n(rng), n(rng), n(rng), n(rng));
  v.normalize();
  return {v[0], Vec3(v[1], v[2], v[3])};
}

Vec3 de_casteljau(std::vector<Vec3> p, double t) {
  for (std::size_t n = p.size(); n > 1; --n) {
    for (std::size_t i = 0; i + 1 < n; ++i) p[i] = (1 - t) * p[i] + t * p[i + 1];
  }
  return p[0];
}

double dijkstra(const PlanGraph& g, int s, int t) {
  std::vector<double> dist(static_cast<std::size_t>(g.size()), INFINITY);
  using E = std::pair<double, int>;
  std::priority_queue<E, std::vector<E>, std::greater<>> q;
  dist[static_cast<std::size_t>(s)] = 0;
  q.push({0, s});
  while (!q.empty()) {
    auto [d, v] = q.top();
    q.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (const auto& [w, c] : g.adjacency[static_cast<std::size_t>(v)]) {
      if (d + c < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = d + c;
        q.push({d + c, w});
      }
    }
  }
  return dist[static_cast<std::size_t>(t)];
}

}  // namespace

TEST(Slerp, Endpoints) {
  std::mt19937 rng(1);
  for (int k = 0; k < 50; ++k) {
    const Quaternion a = random_unit(rng), b = random_unit(rng);
    const Quaternion s0 = slerp(a, b, 0), s1 = slerp(a, b, 1);
    EXPECT_NEAR(std::abs(s0.dot(a)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(s1.dot(b)), 1.0, 1e-12);
  }
  EXPECT_THROW(slerp({2, Vec3::Zero()}, {1, Vec3::Zero()}, 0.5), Error);
}

TEST(Slerp, RationalFormMatchesSlerp) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> un(0, 1);
  for (int k = 0; k < 200; ++k) {
    const Quaternion a = random_unit(rng), b = random_unit(rng);
    if (quaternion_angle(a, b) > std::numbers::pi - 1e-3) continue;
    const RationalQuaternion r = slerp_to_rational(a, b);
    const double t = un(rng);
    const Quaternion p = r.at(std::tan(0.5 * t * r.theta));
    const Quaternion e = slerp(a, b, t);
    EXPECT_NEAR(p.s, e.s, 1e-12);
    EXPECT_LT((p.v - e.v).norm(), 1e-12);
  }
}

TEST(Slerp, DegenerateAngles) {
  const Quaternion a = Quaternion::axis_angle(Vec3::UnitZ(), 0.3);
  EXPECT_THROW(slerp_to_rational(a, a), Error);
  // -a is the same orientation
  EXPECT_THROW(slerp_to_rational(a, -a), Error);
  const Quaternion half_turn = a * Quaternion::axis_angle(Vec3::UnitX(), std::numbers::pi);
  EXPECT_NEAR(slerp_to_rational(a, half_turn).t_max(), 1.0, 1e-12);
  const RayPath rp = build_ray_path({Polynomial({1, 1}), Polynomial({2}), Polynomial({3})}, a, a);
  EXPECT_TRUE(rp.constant_orientation);
  EXPECT_EQ(rp.param_max(), 1.0);
  EXPECT_TRUE(rp.position_at(1.0).isApprox(Vec3(2, 2, 3)));
}

TEST(Rotation, MatchesEigenAndIsOrthonormal) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> un(0, 1);
  for (int k = 0; k < 100; ++k) {
    const Quaternion a = random_unit(rng), b = random_unit(rng);
    if (quaternion_angle(a, b) > std::numbers::pi - 1e-3) continue;
    const RationalQuaternion r = slerp_to_rational(a, b);
    const auto rot = rotation_rational(r);
    const double T = un(rng) * r.t_max();
    const double d2 = std::pow(1 + T * T, 2);
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = rot[static_cast<std::size_t>(i)](T) / d2;
    const Quaternion q = r.at(T);
    const Mat3 e = Eigen::Quaterniond(q.s, q.v.x(), q.v.y(), q.v.z()).toRotationMatrix();
    EXPECT_LT((m - e).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-10);
    for (const auto& p : rot) EXPECT_LE(p.degree(), 4);
  }
}

TEST(Bezier, CoefficientsMatchDeCasteljau) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> un(-3, 3);
  for (int k = 0; k < 20; ++k) {
    std::vector<Vec3> c(6);
    for (auto& v : c) v = Vec3(un(rng), un(rng), un(rng));
    const TranslationPolys p = smooth(c);
    for (int s = 0; s <= 50; ++s) {
      const double t = s / 50.0;
      EXPECT_LT((evaluate(p, t) - de_casteljau(c, t)).norm(), 1e-12);
      EXPECT_LT((bezier(c, t) - de_casteljau(c, t)).norm(), 1e-12);
    }
  }
}

TEST(Bezier, ShapeProperties) {
  const std::vector<Vec3> two = {{0, 0, 0}, {1, 2, 3}};
  const TranslationPolys line = smooth(two);
  EXPECT_TRUE(evaluate(line, 0.5).isApprox(Vec3(0.5, 1, 1.5)));

  const std::vector<Vec3> collinear = {{0, 0, 0}, {1, 1, 1}, {3, 3, 3}};
  for (int s = 0; s <= 20; ++s) {
    const Vec3 p = evaluate(smooth(collinear), s / 20.0);
    EXPECT_NEAR(p.x(), p.y(), 1e-14);
    EXPECT_NEAR(p.y(), p.z(), 1e-14);
  }

  // L-shaped plan: the curve stays in the triangle spanned by the polygon
  const std::vector<Vec3> l = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
  const TranslationPolys lp = smooth(l);
  for (int s = 0; s <= 100; ++s) {
    const Vec3 p = evaluate(lp, s / 100.0);
    EXPECT_GE(p.x(), -1e-14);
    EXPECT_GE(p.y(), -1e-14);
    EXPECT_LE(p.y(), p.x() + 1e-14);
    EXPECT_LE(p.x(), 1 + 1e-14);
  }
  EXPECT_TRUE(evaluate(lp, 0).isApprox(l.front()));
  EXPECT_TRUE(evaluate(lp, 1).isApprox(l.back()));
}

TEST(Plan, AStarMatchesDijkstra) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> un(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    PlanGraph g;
    const int n = 8;
    std::vector<int> id(n * n, -1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (un(rng) < 0.25 && !(i == 0 && j == 0) && !(i == n - 1 && j == n - 1)) continue;
        Eigen::VectorXd p(2);
        p << i, j;
        id[i * n + j] = g.add_node(p);
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (id[i * n + j] < 0) continue;
        for (auto [di, dj] : {std::pair{1, 0}, {0, 1}, {1, 1}, {1, -1}}) {
          const int a = i + di, b = j + dj;
          if (a < 0 || a >= n || b < 0 || b >= n || id[a * n + b] < 0) continue;
          g.add_edge(id[i * n + j], id[a * n + b]);
        }
      }
    }
    const int s = id[0], t = id[n * n - 1];
    const double ref = dijkstra(g, s, t);
    if (std::isinf(ref)) {
      EXPECT_THROW(plan(g, s, t), Error);
      continue;
    }
    const PlanResult r = plan(g, s, t);
    EXPECT_NEAR(r.cost, ref, 1e-12);
    EXPECT_EQ(r.nodes.front(), s);
    EXPECT_EQ(r.nodes.back(), t);
    EXPECT_EQ(r.cost, path_cost(g, r.nodes));
  }
}

TEST(Verify, LinearYawCase) {
  const RobotModel m = presets::cdpr();
  const Quaternion qs = Quaternion::from_euler_xyz(0, 0, std::numbers::pi / 6);
  const Quaternion qe = Quaternion::from_euler_xyz(0, 0, 0);
  const RayPath rp = build_ray_path({Polynomial({2, -0.5}), Polynomial({1.5, 0.8}), Polynomial({1, 2})}, qs, qe);
  EXPECT_NEAR(rp.param_max(), 0.1317, 5e-4);
  EXPECT_NEAR(rp.translation[0].coeff(1), -3.7979, 1e-3);
  EXPECT_NEAR(rp.translation[1].coeff(1), 6.0766, 1e-3);
  EXPECT_NEAR(rp.translation[2].coeff(1), 15.1915, 1e-3);
  EXPECT_LT((rp.position_at(1.0) - Vec3(1.5, 2.3, 3)).norm(), 1e-12);

  const auto& s = rp.orientation.num[0];
  EXPECT_NEAR(s.coeff(2), -0.9659, 1e-3);
  EXPECT_NEAR(s.coeff(1), 0.5176, 1e-3);
  EXPECT_NEAR(s.coeff(0), 0.9659, 1e-3);
  const auto& vk = rp.orientation.num[3];
  EXPECT_NEAR(vk.coeff(2), -0.2588, 1e-3);
  EXPECT_NEAR(vk.coeff(1), -1.9319, 1e-3);
  EXPECT_NEAR(vk.coeff(0), 0.2588, 1e-3);

  const VerifyResult v = verify(m, rp, ClearanceSpec::uniform(0.1));
  ASSERT_EQ(v.feasible.size(), 1u);
  EXPECT_EQ(v.feasible[0].lo, 0.0);
  EXPECT_EQ(v.feasible[0].hi, 1.0);
  for (const auto& [label, entries] : v.degrees) {
    for (const auto& e : entries) {
      if (e.name == "d") EXPECT_LE(e.degree, 4 * 1 + 16) << label;
      if (e.name == "n_ti" || e.name == "n_tj") EXPECT_LE(e.degree, 3 * 1 + 12) << label;
      if (e.name == "n_t") EXPECT_LE(e.degree, 2 * 1 + 8) << label;
    }
  }
}

TEST(Verify, OracleConsistentWithObstacles) {
  const RobotModel m = presets::cdpr();
  std::vector<Obstacle> obs = presets::tree();
  obs.push_back(presets::box());
  const ClearanceSpec cl = ClearanceSpec::from_cable(presets::kCdprCableDiameter, 0.05);
  const Quaternion qs = Quaternion::from_euler_xyz(0.1, -0.2, 0.3);
  const Quaternion qe = Quaternion::from_euler_xyz(-0.1, 0.1, -0.2);
  const std::vector<Vec3> controls = {{0.8, 1.5, 0.6}, {2.0, 2.6, 1.8}, {3.2, 1.6, 0.9}};
  const RayPath rp = build_ray_path(smooth(controls), qs, qe);
  const VerifyResult v = verify(m, rp, cl, obs);
  for (int s = 0; s <= 200; ++s) {
    const double t = s / 200.0;
    if (v.feasible.distance_to_boundary(t) < 1e-6) continue;
    EXPECT_EQ(v.feasible.contains(t), !pose_interference_oracle(m, platform_pose(rp, t), obs, cl).interferes) << t;
  }
}

TEST(Verify, RejectsMultiLink) {
  const RayPath rp = build_ray_path({Polynomial({0}), Polynomial({0}), Polynomial({0, 1})}, Quaternion{}, Quaternion{});
  EXPECT_THROW(verify(presets::mcdr(), rp, ClearanceSpec::uniform(0.1)), Error);
}
