// rayspace command-line tool.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rayspace/bench.hpp"
#include "rayspace/geom.hpp"
#include "rayspace/graph.hpp"
#include "rayspace/io.hpp"
#include "rayspace/path.hpp"
#include "rayspace/presets.hpp"
#include "rayspace/rayifw.hpp"

namespace {

using namespace rayspace;
using io::json;

// name=a[:b[:c]]
struct Assignment {
  std::string name;
  std::vector<double> values;
};

Assignment parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::invalid_argument, "expected name=value, got '" + text + "'");
  }
  Assignment a{text.substr(0, eq), {}};
  std::stringstream rest(text.substr(eq + 1));
  std::string part;
  while (std::getline(rest, part, ':')) {
    try {
      std::size_t used = 0;
      a.values.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad number '" + part + "' in '" + text + "'");
    }
  }
  if (a.values.empty() || a.values.size() > 3) {
    throw Error(ErrorCode::invalid_argument, "expected name=value or name=lo:hi[:steps], got '" + text + "'");
  }
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + path + "'");
  out << text;
}

struct Options {
  std::string scene;
  std::string trajectory;
  std::string out;
  std::string format;  // empty: text for verify, json otherwise
  std::string svg;
  std::string along;
  std::vector<std::string> kappa;
  std::vector<std::string> from;
  std::vector<std::string> to;
  std::optional<double> eps;
  bool verify_plan = false;
  std::vector<int> steps{10, 20, 30};
  int repeats = 3;
  unsigned workers = 0;
};

io::SceneDocument load_scene_or_preset(const Options& o) {
  if (!o.scene.empty()) return io::load_scene(read_file(o.scene));
  io::SceneDocument doc;
  doc.robot = presets::cdpr();
  doc.ranges = presets::cdpr_ranges();
  doc.obstacles = {presets::box()};
  doc.cable_diameter = presets::kCdprCableDiameter;
  return doc;
}

ClearanceSpec clearance_of(const io::SceneDocument& doc, const Options& o) {
  return o.eps ? ClearanceSpec::uniform(*o.eps) : doc.clearance();
}

struct RaySpec {
  int index = 0;
  Interval range;
};

RaySpec parse_along(const io::SceneDocument& doc, const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::invalid_argument, "--along is required");
  RaySpec r;
  if (text.find('=') == std::string::npos) {
    r.index = doc.robot.coordinate_index(text);
    r.range = doc.range_of(text);
    return r;
  }
  const Assignment a = parse_assignment(text);
  r.index = doc.robot.coordinate_index(a.name);
  if (a.values.size() < 2) throw Error(ErrorCode::invalid_argument, "--along needs name=lo:hi");
  r.range = {a.values[0], a.values[1]};
  return r;
}

// Values per coordinate from --kappa; unspecified coordinates stay at 0.
std::vector<std::vector<double>> parse_kappa(const io::SceneDocument& doc, const std::vector<std::string>& specs) {
  std::vector<std::vector<double>> values(static_cast<std::size_t>(doc.robot.dof()), std::vector<double>{0.0});
  for (const auto& s : specs) {
    const Assignment a = parse_assignment(s);
    const auto c = static_cast<std::size_t>(doc.robot.coordinate_index(a.name));
    if (a.values.size() == 1) {
      values[c] = {a.values[0]};
    } else {
      const int steps = a.values.size() == 3 ? static_cast<int>(a.values[2]) : 2;
      if (steps < 1) throw Error(ErrorCode::invalid_argument, "steps must be positive in '" + s + "'");
      auto v = linspace(a.values[0], a.values[1], steps);
      std::sort(v.begin(), v.end());
      values[c] = std::move(v);
    }
  }
  return values;
}

Pose fixed_pose(const std::vector<std::vector<double>>& values) {
  Pose p(static_cast<Eigen::Index>(values.size()));
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c].size() != 1) throw Error(ErrorCode::invalid_argument, "this command takes fixed --kappa values only");
    p[static_cast<Eigen::Index>(c)] = values[c][0];
  }
  return p;
}

json query_echo(const io::SceneDocument& doc, const std::string& command, const Options& o,
                const ClearanceSpec& cl) {
  json q;
  q["command"] = command;
  q["robot"] = doc.robot.name;
  q["along"] = o.along;
  q["kappa"] = o.kappa;
  q["clearance"] = {{"cable_cable", cl.cable_cable}, {"cable_obstacle", cl.cable_obstacle}};
  return q;
}

// World axis of a coordinate that translates a single platform, or -1.
int world_axis(const RobotModel& m, int index) {
  const auto& c = m.coordinates[static_cast<std::size_t>(index)];
  if (m.link_count() != 1 || c.kind != CoordKind::translation) return -1;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(std::abs(c.axis[k]) - 1.0) < 1e-12) return k;
  }
  return -1;
}

int cmd_validate(const Options& o) {
  const io::SceneDocument doc = io::load_scene(read_file(o.scene));
  std::printf("ok: %s, %d coordinates, %zu segments, %zu obstacles\n", doc.robot.name.c_str(), doc.robot.dof(),
              doc.robot.segments.size(), doc.obstacles.size());
  if (!o.trajectory.empty()) {
    const RayPath rp = io::load_trajectory(read_file(o.trajectory)).build();
    std::printf("trajectory ok: theta %.6g rad, translation degree %d\n", rp.theta(),
                std::max({rp.translation[0].degree(), rp.translation[1].degree(), rp.translation[2].degree()}));
  }
  return 0;
}

int cmd_ray(const Options& o) {
  const io::SceneDocument doc = io::load_scene(read_file(o.scene));
  const ClearanceSpec cl = clearance_of(doc, o);
  const RaySpec r = parse_along(doc, o.along);
  const Pose kappa = fixed_pose(parse_kappa(doc, o.kappa));
  const auto t0 = std::chrono::steady_clock::now();
  const RayResult res = compute_ray({&doc.robot, r.index, kappa, r.range, cl, doc.obstacles, true});
  io::ResultDocument out;
  out.timing_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.query = query_echo(doc, "ray", o, cl);
  out.rays.push_back(io::make_record(doc.robot, r.index, kappa, res));
  write_output(o.out, io::emit_results(out, o.format));
  return 0;
}

int cmd_sweep(const Options& o) {
  const io::SceneDocument doc = io::load_scene(read_file(o.scene));
  const ClearanceSpec cl = clearance_of(doc, o);
  const RaySpec r = parse_along(doc, o.along);
  SweepGrid grid{parse_kappa(doc, o.kappa)};
  const auto t0 = std::chrono::steady_clock::now();
  const auto entries = sweep_workspace(doc.robot, grid, r.index, r.range, doc.obstacles, cl, o.workers);
  io::ResultDocument out;
  out.timing_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.query = query_echo(doc, "sweep", o, cl);
  for (const auto& e : entries) out.rays.push_back(io::make_record(doc.robot, r.index, e.kappa, e.result));
  write_output(o.out, io::emit_results(out, o.format));
  std::fprintf(stderr, "sweep: %zu rays in %.3f s\n", out.rays.size(), out.timing_s);

  if (!o.svg.empty()) {
    int vertical = -1;
    for (int c = 0; c < doc.robot.dof(); ++c) {
      if (c != r.index && grid.values[static_cast<std::size_t>(c)].size() > 1) {
        vertical = c;
        break;
      }
    }
    if (vertical < 0) throw Error(ErrorCode::invalid_argument, "--svg needs a --kappa grid with more than one step");
    const auto& vv = grid.values[static_cast<std::size_t>(vertical)];
    const std::string vname = doc.robot.coordinates[static_cast<std::size_t>(vertical)].name;
    write_output(o.svg, io::render_cross_section(out.rays, vname, r.range, {vv.front(), vv.back()}, doc.obstacles,
                                                 world_axis(doc.robot, r.index), world_axis(doc.robot, vertical)));
  }
  return 0;
}

Pose snap_pose(const io::SceneDocument& doc, const Pose& base, const std::vector<std::string>& specs) {
  Pose p = base;
  for (const auto& s : specs) {
    const Assignment a = parse_assignment(s);
    if (a.values.size() != 1) throw Error(ErrorCode::invalid_argument, "--from/--to take name=value");
    p[doc.robot.coordinate_index(a.name)] = a.values[0];
  }
  return p;
}

int cmd_plan(const Options& o) {
  const io::SceneDocument doc = io::load_scene(read_file(o.scene));
  const ClearanceSpec cl = clearance_of(doc, o);
  const auto values = parse_kappa(doc, o.kappa);
  Pose base(doc.robot.dof());
  std::vector<int> axes;
  std::vector<std::vector<double>> ticks;
  for (int c = 0; c < doc.robot.dof(); ++c) {
    const auto& v = values[static_cast<std::size_t>(c)];
    base[c] = v.front();
    if (v.size() > 1) {
      axes.push_back(c);
      ticks.push_back(v);
    }
  }
  if (axes.empty()) throw Error(ErrorCode::invalid_argument, "plan needs at least one --kappa name=lo:hi:steps axis");
  const RayGraph g = ray_grid_graph(doc.robot, base, axes, ticks, doc.obstacles, cl, o.workers);

  auto nearest = [&](const Pose& p) {
    std::vector<int> idx;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& t = ticks[a];
      const double x = p[axes[a]];
      std::size_t best = 0;
      for (std::size_t k = 1; k < t.size(); ++k) {
        if (std::abs(t[k] - x) < std::abs(t[best] - x)) best = k;
      }
      idx.push_back(static_cast<int>(best));
    }
    const int n = g.node_at(idx);
    if (n < 0) throw Error(ErrorCode::no_path, "start or goal lattice point is not interference free");
    return n;
  };
  const PlanResult pr = plan(g, nearest(snap_pose(doc, base, o.from)), nearest(snap_pose(doc, base, o.to)));

  json out;
  out["cost"] = pr.cost;
  out["nodes"] = json::array();
  std::vector<Pose> poses;
  for (int n : pr.nodes) {
    Pose p = base;
    json node;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      p[axes[a]] = g.points[static_cast<std::size_t>(n)][static_cast<Eigen::Index>(a)];
      node[doc.robot.coordinates[static_cast<std::size_t>(axes[a])].name] = p[axes[a]];
    }
    out["nodes"].push_back(node);
    poses.push_back(p);
  }
  if (doc.robot.link_count() == 1 && poses.size() >= 2) {
    const RayPath rp = smooth_poses(doc.robot, poses);
    out["bezier_controls"] = json::array();
    for (const auto& p : poses) out["bezier_controls"].push_back(io::detail::vec_json(link_frames(doc.robot, p).origin[1]));
    if (o.verify_plan) {
      const VerifyResult v = verify(doc.robot, rp, cl, doc.obstacles);
      out["verified_feasible"] = io::detail::interval_set_json(v.feasible);
    }
  }
  write_output(o.out, out.dump(2) + "\n");
  return 0;
}

int cmd_verify(const Options& o) {
  const io::SceneDocument doc = io::load_scene(read_file(o.scene));
  if (o.trajectory.empty()) throw Error(ErrorCode::invalid_argument, "verify needs --trajectory");
  const io::TrajectoryDocument traj = io::load_trajectory(read_file(o.trajectory));
  ClearanceSpec cl = clearance_of(doc, o);
  if (!o.eps && traj.clearance) cl = ClearanceSpec::uniform(*traj.clearance);
  const RayPath rp = traj.build();
  const VerifyResult v = verify(doc.robot, rp, cl, doc.obstacles);
  if (o.format == "json") {
    json out;
    out["feasible"] = io::detail::interval_set_json(v.feasible);
    out["theta"] = rp.theta();
    out["param_max"] = rp.param_max();
    out["pairs"] = json::array();
    for (const auto& p : v.pairs) {
      out["pairs"].push_back({{"pair", p.pair},
                              {"blocked", io::detail::interval_set_json(p.blocked)},
                              {"branches", p.branches}});
    }
    write_output(o.out, out.dump(2) + "\n");
  } else {
    write_output(o.out, "feasible t: " + v.feasible.to_string(4) + "\n");
  }
  return 0;
}

int cmd_oracle(const Options& o) {
  const io::SceneDocument doc = io::load_scene(read_file(o.scene));
  const ClearanceSpec cl = clearance_of(doc, o);
  const auto values = parse_kappa(doc, o.kappa);
  std::vector<Pose> poses(1, Pose::Zero(doc.robot.dof()));
  for (std::size_t c = 0; c < values.size(); ++c) {
    std::vector<Pose> next;
    for (const auto& p : poses) {
      for (double v : values[c]) {
        Pose q = p;
        q[static_cast<Eigen::Index>(c)] = v;
        next.push_back(q);
      }
    }
    poses = std::move(next);
  }
  std::vector<OracleResult> res(poses.size());
  parallel_for(poses.size(), o.workers == 0 ? worker_count() : o.workers,
               [&](std::size_t i) { res[i] = pose_interference_oracle(doc.robot, poses[i], doc.obstacles, cl); });
  std::ostringstream text;
  if (o.format == "csv") {
    for (const auto& c : doc.robot.coordinates) text << c.name << ",";
    text << "free,pair\n";
    char buf[32];
    for (std::size_t i = 0; i < poses.size(); ++i) {
      for (Eigen::Index c = 0; c < poses[i].size(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g,", poses[i][c]);
        text << buf;
      }
      text << (res[i].interferes ? 0 : 1) << "," << res[i].pair << "\n";
    }
  } else if (o.format == "text") {
    for (std::size_t i = 0; i < poses.size(); ++i) {
      for (std::size_t c = 0; c < doc.robot.coordinates.size(); ++c) {
        text << doc.robot.coordinates[c].name << "=" << poses[i][static_cast<Eigen::Index>(c)] << " ";
      }
      text << (res[i].interferes ? "blocked " + res[i].pair : std::string("free")) << "\n";
    }
  } else {
    json out = json::array();
    for (std::size_t i = 0; i < poses.size(); ++i) {
      json p;
      for (std::size_t c = 0; c < doc.robot.coordinates.size(); ++c) {
        p[doc.robot.coordinates[c].name] = poses[i][static_cast<Eigen::Index>(c)];
      }
      out.push_back({{"pose", p}, {"free", !res[i].interferes}, {"pair", res[i].pair}});
    }
    text << out.dump(2) << "\n";
  }
  write_output(o.out, text.str());
  return 0;
}

int cmd_bench(const Options& o) {
  const io::SceneDocument doc = load_scene_or_preset(o);
  BenchSetup s;
  s.model = &doc.robot;
  s.obstacles = doc.obstacles;
  s.clearance = clearance_of(doc, o);
  const RaySpec r = parse_along(doc, o.along.empty() ? std::string("x") : o.along);
  s.axes[0] = r.index;
  s.ranges[0] = r.range;
  s.base = Pose::Zero(doc.robot.dof());
  std::vector<std::string> others = o.kappa;
  if (others.empty()) others = {"y", "z"};
  int filled = 1;
  for (const auto& spec : others) {
    if (spec.find('=') == std::string::npos) {
      if (filled > 2) break;
      s.axes[static_cast<std::size_t>(filled)] = doc.robot.coordinate_index(spec);
      s.ranges[static_cast<std::size_t>(filled)] = doc.range_of(spec);
      ++filled;
      continue;
    }
    const Assignment a = parse_assignment(spec);
    const int c = doc.robot.coordinate_index(a.name);
    if (a.values.size() == 1) {
      s.base[c] = a.values[0];
    } else if (filled <= 2) {
      s.axes[static_cast<std::size_t>(filled)] = c;
      s.ranges[static_cast<std::size_t>(filled)] = {a.values[0], a.values[1]};
      ++filled;
    }
  }
  if (filled != 3) throw Error(ErrorCode::invalid_argument, "bench needs two box coordinates besides --along");

  std::vector<double> taus, ray_t, point_t;
  std::printf("%6s %12s %12s %10s\n", "steps", "ray_s", "pointwise_s", "ratio");
  for (int steps : o.steps) {
    const BenchRow row = bench_once(s, steps, o.repeats);
    std::printf("%6d %12.6f %12.6f %10.4f\n", row.steps, row.ray_s, row.point_s, row.ray_s / row.point_s);
    taus.push_back(steps);
    ray_t.push_back(row.ray_s);
    point_t.push_back(row.point_s);
  }
  if (taus.size() >= 2) {
    std::printf("exponent ray-based: %.3f\nexponent point-wise: %.3f\n", loglog_slope(taus, ray_t),
                loglog_slope(taus, point_t));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ray-based interference-free workspaces of cable-driven robots"};
  app.require_subcommand(1);
  Options o;

  auto add_scene = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--scene", o.scene, "scene JSON file");
    if (required) opt->required();
    c->add_option("--eps", o.eps, "uniform clearance overriding the scene defaults");
  };
  auto add_output = [&](CLI::App* c) {
    c->add_option("--out", o.out, "output file (default stdout)");
    c->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  };
  auto add_query = [&](CLI::App* c) {
    c->add_option("--along", o.along, "ray coordinate, name or name=lo:hi");
    c->add_option("--kappa", o.kappa, "name=value or name=lo:hi:steps, repeatable");
    c->add_option("--threads", o.workers, "worker threads (default: hardware, capped by RAYSPACE_THREADS)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a scene (and optionally a trajectory)");
  add_scene(validate_cmd, true);
  validate_cmd->add_option("--trajectory", o.trajectory, "trajectory JSON file");

  auto* ray_cmd = app.add_subcommand("ray", "free intervals along one ray");
  add_scene(ray_cmd, true);
  add_query(ray_cmd);
  add_output(ray_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "rays over a grid of the other coordinates");
  add_scene(sweep_cmd, true);
  add_query(sweep_cmd);
  add_output(sweep_cmd);
  sweep_cmd->add_option("--svg", o.svg, "write a cross-section SVG");

  auto* plan_cmd = app.add_subcommand("plan", "A* over a ray-checked lattice, then Bezier smoothing");
  add_scene(plan_cmd, true);
  add_query(plan_cmd);
  plan_cmd->add_option("--out", o.out, "output file (default stdout)");
  plan_cmd->add_option("--from", o.from, "start, name=value, repeatable")->required();
  plan_cmd->add_option("--to", o.to, "goal, name=value, repeatable")->required();
  plan_cmd->add_flag("--verify", o.verify_plan, "verify the smoothed path");

  auto* verify_cmd = app.add_subcommand("verify", "feasible parts of a platform trajectory");
  add_scene(verify_cmd, true);
  verify_cmd->add_option("--trajectory", o.trajectory, "trajectory JSON file")->required();
  add_output(verify_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "point-wise interference check over a grid");
  add_scene(oracle_cmd, true);
  add_query(oracle_cmd);
  add_output(oracle_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "ray-based vs point-wise timing");
  add_scene(bench_cmd, false);
  add_query(bench_cmd);
  bench_cmd->add_option("--steps", o.steps, "grid steps per coordinate")->delimiter(',');
  bench_cmd->add_option("--repeats", o.repeats, "runs per measurement (median reported)");

  CLI11_PARSE(app, argc, argv);
  if (o.format.empty()) o.format = verify_cmd->parsed() ? "text" : "json";

  try {
    if (validate_cmd->parsed()) return cmd_validate(o);
    if (ray_cmd->parsed()) return cmd_ray(o);
    if (sweep_cmd->parsed()) return cmd_sweep(o);
    if (plan_cmd->parsed()) return cmd_plan(o);
    if (verify_cmd->parsed()) return cmd_verify(o);
    if (oracle_cmd->parsed()) return cmd_oracle(o);
    if (bench_cmd->parsed()) return cmd_bench(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
