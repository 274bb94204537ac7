#pragma once

// Ray-based interference-free workspace: every coordinate except one is
// fixed, positions become rational functions of u (u = tan(q/2) for an
// orientation coordinate, u = q for a translation), and each interference
// pair reduces to univariate polynomial conditions solved exactly over the ray.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "rayspace/geom.hpp"
#include "rayspace/graph.hpp"
#include "rayspace/interval_set.hpp"
#include "rayspace/model.hpp"
#include "rayspace/rational.hpp"
#include "rayspace/systems.hpp"

namespace rayspace {

// C * [u^2, u, 1] / (u^2 + 1) for orientation, C * [u, 1] for translation.
struct RationalPolyVec3 {
  CoordKind kind = CoordKind::translation;
  Eigen::Matrix<double, 3, Eigen::Dynamic> C;

  double to_u(double q) const { return kind == CoordKind::orientation ? std::tan(0.5 * q) : q; }

  Vec3 evaluate(double q) const {
    const double u = to_u(q);
    if (kind == CoordKind::orientation) {
      return (C.col(0) * u * u + C.col(1) * u + C.col(2)) / (u * u + 1.0);
    }
    return C.col(0) * u + C.col(1);
  }

  RationalVec3 to_rational() const {
    RationalVec3 v;
    for (int r = 0; r < 3; ++r) {
      if (kind == CoordKind::orientation) {
        v.num[static_cast<std::size_t>(r)] = Polynomial({C(r, 2), C(r, 1), C(r, 0)});
      } else {
        v.num[static_cast<std::size_t>(r)] = Polynomial({C(r, 1), C(r, 0)});
      }
    }
    v.power = kind == CoordKind::orientation ? 1 : 0;
    return v;
  }
};

struct SegmentTarget {
  int segment = 0;
};
// A point fixed to `link`, expressed in the frame of `frame_link`.
struct PointTarget {
  int link = 0;
  Vec3 local = Vec3::Zero();
  int frame_link = 0;
};
using FitTarget = std::variant<SegmentTarget, PointTarget>;

// Link frames sampled at the fit poses of one ray.
class RaySamples {
 public:
  RaySamples(const RobotModel& model, const Pose& kappa, int index, Interval range)
      : kind_(coordinate_at(model, index).kind) {
    if (kappa.size() != model.dof()) {
      throw Error(ErrorCode::invalid_argument, "kappa must assign every coordinate");
    }
    if (kind_ == CoordKind::orientation) {
      for (double u : {-1.0, 0.0, 1.0}) q_.push_back(2.0 * std::atan(u));
    } else {
      double lo = range.lo;
      double hi = range.hi;
      if (!(hi - lo > 1e-9 * (1.0 + std::abs(lo)))) hi = lo + 1.0;
      q_ = {lo, hi};
    }
    for (double q : q_) {
      Pose p = kappa;
      p[index] = q;
      frames_.push_back(link_frames(model, p));
    }
  }

  CoordKind kind() const { return kind_; }

  RationalPolyVec3 fit(const std::vector<Vec3>& values) const {
    RationalPolyVec3 out;
    out.kind = kind_;
    if (kind_ == CoordKind::orientation) {
      // Rows of C from v(u) (u^2 + 1) at u = -1, 0, 1.
      const Vec3 vm = 2.0 * values[0];
      const Vec3 v0 = values[1];
      const Vec3 vp = 2.0 * values[2];
      out.C.resize(3, 3);
      out.C.col(2) = v0;
      out.C.col(1) = 0.5 * (vp - vm);
      out.C.col(0) = 0.5 * (vp + vm) - v0;
    } else {
      const double dq = q_[1] - q_[0];
      if (dq == 0.0) throw Error(ErrorCode::singular_fit, "translation samples coincide");
      out.C.resize(3, 2);
      out.C.col(0) = (values[1] - values[0]) / dq;
      out.C.col(1) = values[0] - out.C.col(0) * q_[0];
    }
    return out;
  }

  RationalPolyVec3 fit_point(int link, const Vec3& local, int frame_link = 0) const {
    std::vector<Vec3> values;
    for (const auto& f : frames_) {
      const Vec3 w = point_position(f, link, local);
      const auto k = static_cast<std::size_t>(frame_link);
      values.push_back(frame_link == 0 ? w : Vec3(f.rotation[k].transpose() * (w - f.origin[k])));
    }
    return fit(values);
  }

 private:
  static const Coordinate& coordinate_at(const RobotModel& model, int index) {
    if (index < 0 || index >= model.dof()) {
      throw Error(ErrorCode::bad_index, "coordinate index " + std::to_string(index) + " out of range");
    }
    return model.coordinates[static_cast<std::size_t>(index)];
  }

  CoordKind kind_;
  std::vector<double> q_;
  std::vector<LinkFrames> frames_;
};

inline RationalPolyVec3 fit_rational_vec(const RobotModel& model, const Pose& kappa, int index,
                                         const FitTarget& target, Interval range = {0.0, 1.0}) {
  const RaySamples samples(model, kappa, index, range);
  if (const auto* p = std::get_if<PointTarget>(&target)) {
    return samples.fit_point(p->link, p->local, p->frame_link);
  }
  const SegmentSpec& seg = segment_at(model, std::get<SegmentTarget>(target).segment);
  const RationalPolyVec3 a = samples.fit_point(seg.start_link, seg.start);
  RationalPolyVec3 b = samples.fit_point(seg.end_link, seg.end);
  b.C -= a.C;
  return b;
}

struct RayQuery {
  const RobotModel* model = nullptr;
  int index = 0;
  Pose kappa;  // the entry at `index` is ignored
  Interval range;
  ClearanceSpec clearance;
  std::span<const Obstacle> obstacles;
  bool cable_cable = true;
};

struct PairRecord {
  std::string pair;
  IntervalSet blocked;  // in q units
  std::vector<std::string> branches;
  std::vector<double> parallel_hits;  // q values where the parallel branch condition holds
};

struct RayResult {
  IntervalSet free;
  std::vector<PairRecord> pairs;
  std::vector<std::pair<std::string, std::vector<DegreeEntry>>> degrees;
};

inline std::vector<Diagnostic> validate(const RayQuery& q) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string m) { out.push_back({Diagnostic::Severity::error, std::move(m)}); };
  if (q.model == nullptr) {
    error("query has no model");
    return out;
  }
  if (q.index < 0 || q.index >= q.model->dof()) {
    error("ray coordinate index out of range");
    return out;
  }
  if (q.kappa.size() != q.model->dof()) error("kappa must assign every coordinate");
  if (!(q.range.hi >= q.range.lo) || !std::isfinite(q.range.lo) || !std::isfinite(q.range.hi)) {
    error("ray range must be finite with lo <= hi");
  }
  const auto& c = q.model->coordinates[static_cast<std::size_t>(q.index)];
  if (c.kind == CoordKind::orientation &&
      (q.range.lo <= -std::numbers::pi || q.range.hi >= std::numbers::pi)) {
    error("orientation range of '" + c.name +
          "' must lie inside (-pi, pi); re-zero the joint so the range avoids +-pi");
  }
  if (q.kappa.size() == q.model->dof()) {
    Pose p = q.kappa;
    p[q.index] = 0.0;
    for (auto& d : validate_pose(*q.model, p)) out.push_back(std::move(d));
  }
  return out;
}

namespace detail {

inline void throw_if_invalid(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == Diagnostic::Severity::error) throw Error(ErrorCode::validation_error, d.message);
  }
}

// The rational position forms of every entity involved in one ray.
struct RayForms {
  std::vector<RationalVec3> seg_start;
  std::vector<RationalVec3> seg_end;
};

inline RationalVec3 reduced(const RationalBasis& B, const RationalPolyVec3& f) {
  return B.reduce(f.to_rational());
}

}  // namespace detail

// System of one segment against one obstacle; a and b are expressed in the
// obstacle's link frame, where its shape is constant.
inline InterferenceSystem obstacle_system(const RationalBasis& B, const RationalVec3& a,
                                          const RationalVec3& b, const Obstacle& o,
                                          const ClearanceSpec& spec) {
  const double eps = obstacle_clearance(o.shape, spec);
  return std::visit(
      [&](const auto& s) -> InterferenceSystem {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TriMesh>) {
          std::vector<RationalVec3> verts;
          verts.reserve(s.vertices.size());
          for (const auto& v : s.vertices) verts.push_back(RationalBasis::constant(v));
          return mesh_system(B, a, b, verts, s.triangles, eps);
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return cylinder_system(B, a, b, RationalBasis::constant(s.a), RationalBasis::constant(s.b), eps);
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return sphere_system(B, a, b, RationalBasis::constant(s.center), eps);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return ellipsoid_system(B, a, b, s);
        } else {
          return cone_system(B, a, b, s);
        }
      },
      o.shape);
}

inline RayResult compute_ray(const RayQuery& query) {
  detail::throw_if_invalid(validate(query));
  const RobotModel& model = *query.model;
  const RaySamples samples(model, query.kappa, query.index, query.range);
  const bool orient = samples.kind() == CoordKind::orientation;
  const RationalBasis B = orient ? RationalBasis::orientation() : RationalBasis::translation();
  const Interval domain = orient ? Interval{std::tan(0.5 * query.range.lo), std::tan(0.5 * query.range.hi)}
                                 : query.range;
  auto to_q = [&](double u) {
    const double q = orient ? 2.0 * std::atan(u) : u;
    return std::clamp(q, query.range.lo, query.range.hi);
  };

  const std::size_t m = model.segments.size();
  auto forms_in = [&](int frame_link) {
    detail::RayForms f;
    for (const auto& s : model.segments) {
      f.seg_start.push_back(detail::reduced(B, samples.fit_point(s.start_link, s.start, frame_link)));
      f.seg_end.push_back(detail::reduced(B, samples.fit_point(s.end_link, s.end, frame_link)));
    }
    return f;
  };
  std::map<int, detail::RayForms> frames;
  frames.emplace(0, forms_in(0));

  RayResult result;
  std::vector<Interval> blocked;
  auto record = [&](std::string label, const InterferenceSystem& sys) {
    SystemSolution sol = solve_interference(sys, domain);
    if (!sys.degrees.empty()) result.degrees.emplace_back(label, sys.degrees);
    if (sol.blocked.empty() && sol.parallel_hits.empty()) return;
    PairRecord rec;
    rec.pair = std::move(label);
    rec.blocked = sol.blocked.map(to_q);
    rec.branches = std::move(sol.branches);
    for (double r : sol.parallel_hits) rec.parallel_hits.push_back(to_q(r));
    blocked.insert(blocked.end(), rec.blocked.begin(), rec.blocked.end());
    result.pairs.push_back(std::move(rec));
  };

  const auto& w = frames.at(0);
  if (query.cable_cable) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (model.segments[i].cable == model.segments[j].cable) continue;
        record(segment_label(static_cast<int>(i)) + "-" + segment_label(static_cast<int>(j)),
               segment_segment_system(B, w.seg_start[i], w.seg_end[i], w.seg_start[j], w.seg_end[j],
                                      query.clearance.cable_cable));
      }
    }
  }
  for (std::size_t k = 0; k < query.obstacles.size(); ++k) {
    const Obstacle& o = query.obstacles[k];
    auto it = frames.find(o.link);
    if (it == frames.end()) it = frames.emplace(o.link, forms_in(o.link)).first;
    const auto& f = it->second;
    for (std::size_t i = 0; i < m; ++i) {
      record(segment_label(static_cast<int>(i)) + "-" + obstacle_label(o, k),
             obstacle_system(B, f.seg_start[i], f.seg_end[i], o, query.clearance));
    }
  }
  result.free = IntervalSet(std::move(blocked)).complement_in(query.range);
  return result;
}

// Worker count: RAYSPACE_THREADS if set, else the hardware concurrency.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RAYSPACE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

// Runs f(i) for i in [0, n) on up to `workers` threads.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& f) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += workers) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Sample values per coordinate; the ray coordinate's entry is ignored.
struct SweepGrid {
  std::vector<std::vector<double>> values;
};

struct SweepEntry {
  Pose kappa;
  RayResult result;
};

inline std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> v;
  if (steps <= 1) return {lo};
  for (int k = 0; k < steps; ++k) v.push_back(lo + (hi - lo) * k / (steps - 1));
  return v;
}

// One compute_ray per point of the kappa grid, in lexicographic grid order.
inline std::vector<SweepEntry> sweep_workspace(const RobotModel& model, const SweepGrid& grid, int index,
                                               Interval range, std::span<const Obstacle> obstacles,
                                               const ClearanceSpec& clearance, unsigned workers = 0) {
  if (static_cast<int>(grid.values.size()) != model.dof()) {
    throw Error(ErrorCode::invalid_argument, "sweep grid must list values for every coordinate");
  }
  std::vector<Pose> points(1, Pose::Zero(model.dof()));
  for (int c = 0; c < model.dof(); ++c) {
    if (c == index) continue;
    const auto& vals = grid.values[static_cast<std::size_t>(c)];
    if (vals.empty()) throw Error(ErrorCode::invalid_argument, "sweep grid has an empty axis");
    std::vector<Pose> next;
    for (const auto& p : points) {
      for (double v : vals) {
        Pose q = p;
        q[c] = v;
        next.push_back(q);
      }
    }
    points = std::move(next);
  }
  std::vector<SweepEntry> out(points.size());
  parallel_for(points.size(), workers == 0 ? worker_count() : workers, [&](std::size_t i) {
    RayQuery q{&model, index, points[i], range, clearance, obstacles, true};
    out[i] = {points[i], compute_ray(q)};
  });
  return out;
}

// Graph on a lattice spanned by a few coordinates. Nodes are lattice points
// free on every incident ray; axis edges need the span between neighbours to
// be free on the carrying ray, diagonal edges need every axis edge of the
// spanned sub-box.
struct RayGraph : PlanGraph {
  std::vector<int> axes;                   // coordinate indices of the lattice
  std::vector<std::vector<double>> ticks;  // lattice values per axis
  std::vector<std::vector<int>> lattice_index;

  int node_at(const std::vector<int>& idx) const {
    for (std::size_t n = 0; n < lattice_index.size(); ++n) {
      if (lattice_index[n] == idx) return static_cast<int>(n);
    }
    return -1;
  }
};

inline RayGraph ray_grid_graph(const RobotModel& model, const Pose& base, const std::vector<int>& axes,
                               const std::vector<std::vector<double>>& ticks,
                               std::span<const Obstacle> obstacles, const ClearanceSpec& clearance,
                               unsigned workers = 0) {
  const std::size_t k = axes.size();
  if (k < 2 || ticks.size() != k) throw Error(ErrorCode::invalid_argument, "ray grid needs >= 2 axes");
  std::vector<int> dims;
  for (const auto& t : ticks) {
    if (t.size() < 2 || !std::is_sorted(t.begin(), t.end())) {
      throw Error(ErrorCode::invalid_argument, "each lattice axis needs >= 2 ascending ticks");
    }
    dims.push_back(static_cast<int>(t.size()));
  }
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  auto unflatten = [&](std::size_t f) {
    std::vector<int> idx(k);
    for (std::size_t a = k; a-- > 0;) {
      idx[a] = static_cast<int>(f % static_cast<std::size_t>(dims[a]));
      f /= static_cast<std::size_t>(dims[a]);
    }
    return idx;
  };
  auto flatten = [&](const std::vector<int>& idx) {
    std::size_t f = 0;
    for (std::size_t a = 0; a < k; ++a) f = f * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(idx[a]);
    return f;
  };

  // One ray per axis direction per line of the lattice; key = (axis, flat index with that axis at 0).
  struct Line {
    std::size_t axis;
    std::size_t key;
  };
  std::vector<Line> lines;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t f = 0; f < total; ++f) {
      if (unflatten(f)[a] == 0) lines.push_back({a, f});
    }
  }
  std::vector<IntervalSet> free(lines.size());
  parallel_for(lines.size(), workers == 0 ? worker_count() : workers, [&](std::size_t l) {
    const auto idx = unflatten(lines[l].key);
    Pose p = base;
    for (std::size_t a = 0; a < k; ++a) p[axes[a]] = ticks[a][static_cast<std::size_t>(idx[a])];
    const std::size_t a = lines[l].axis;
    RayQuery q{&model, axes[a], p, {ticks[a].front(), ticks[a].back()}, clearance, obstacles, true};
    free[l] = compute_ray(q).free;
  });
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> line_of;
  for (std::size_t l = 0; l < lines.size(); ++l) line_of[{lines[l].axis, lines[l].key}] = l;
  auto ray_for = [&](std::size_t a, std::vector<int> idx) -> const IntervalSet& {
    idx[a] = 0;
    return free[line_of.at({a, flatten(idx)})];
  };
  auto span_free = [&](const IntervalSet& s, double lo, double hi) {
    for (const auto& iv : s) {
      if (iv.lo <= lo && iv.hi >= hi) return true;
    }
    return false;
  };

  RayGraph g;
  g.axes = axes;
  g.ticks = ticks;
  std::vector<int> node_of(total, -1);
  for (std::size_t f = 0; f < total; ++f) {
    const auto idx = unflatten(f);
    bool ok = true;
    for (std::size_t a = 0; a < k && ok; ++a) {
      ok = ray_for(a, idx).contains(ticks[a][static_cast<std::size_t>(idx[a])]);
    }
    if (!ok) continue;
    node_of[f] = static_cast<int>(g.points.size());
    Eigen::VectorXd x(static_cast<Eigen::Index>(k));
    for (std::size_t a = 0; a < k; ++a) x[static_cast<Eigen::Index>(a)] = ticks[a][static_cast<std::size_t>(idx[a])];
    g.points.push_back(x);
    g.lattice_index.push_back(idx);
  }
  g.adjacency.resize(g.points.size());

  auto axis_edge_free = [&](std::size_t a, const std::vector<int>& idx) {
    // Edge from idx to idx + e_a.
    const double lo = ticks[a][static_cast<std::size_t>(idx[a])];
    const double hi = ticks[a][static_cast<std::size_t>(idx[a] + 1)];
    return span_free(ray_for(a, idx), lo, hi);
  };

  // Neighbour offsets in {-1, 0, 1}^k with at least one +1 first nonzero, so each edge is visited once.
  std::size_t n_off = 1;
  for (std::size_t a = 0; a < k; ++a) n_off *= 3;
  for (std::size_t n = 0; n < g.points.size(); ++n) {
    const auto& idx = g.lattice_index[n];
    for (std::size_t o = 0; o < n_off; ++o) {
      std::vector<int> off(k);
      std::size_t r = o;
      for (std::size_t a = 0; a < k; ++a) {
        off[a] = static_cast<int>(r % 3) - 1;
        r /= 3;
      }
      auto first = std::find_if(off.begin(), off.end(), [](int v) { return v != 0; });
      if (first == off.end() || *first < 0) continue;
      std::vector<int> to = idx;
      bool inside = true;
      for (std::size_t a = 0; a < k; ++a) {
        to[a] += off[a];
        if (to[a] < 0 || to[a] >= dims[a]) inside = false;
      }
      if (!inside) continue;
      const int m = node_of[flatten(to)];
      if (m < 0) continue;
      // Every axis edge of the sub-box spanned by idx and to must be free.
      std::vector<std::size_t> moving;
      std::vector<int> lo = idx;
      for (std::size_t a = 0; a < k; ++a) {
        if (off[a] != 0) {
          moving.push_back(a);
          lo[a] = std::min(idx[a], to[a]);
        }
      }
      bool ok = true;
      const std::size_t corners = std::size_t{1} << moving.size();
      for (std::size_t c = 0; c < corners && ok; ++c) {
        std::vector<int> corner = lo;
        for (std::size_t b = 0; b < moving.size(); ++b) {
          if (c & (std::size_t{1} << b)) corner[moving[b]] += 1;
        }
        if (node_of[flatten(corner)] < 0) ok = false;
        for (std::size_t b = 0; b < moving.size() && ok; ++b) {
          if (c & (std::size_t{1} << b)) continue;
          ok = axis_edge_free(moving[b], corner);
        }
      }
      if (!ok) continue;
      const double cost = (g.points[n] - g.points[static_cast<std::size_t>(m)]).norm();
      g.adjacency[n].push_back({m, cost});
      g.adjacency[static_cast<std::size_t>(m)].push_back({static_cast<int>(n), cost});
    }
  }
  return g;
}

}  // namespace rayspace
