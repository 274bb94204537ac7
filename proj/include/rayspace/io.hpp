#pragma once

// JSON scene, trajectory and result documents, and SVG cross-sections.
// Lengths are in meters and angles in radians.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rayspace/error.hpp"
#include "rayspace/geom.hpp"
#include "rayspace/interval_set.hpp"
#include "rayspace/model.hpp"
#include "rayspace/path.hpp"
#include "rayspace/rayifw.hpp"

namespace rayspace::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct SceneDocument {
  int schema_version = kSchemaVersion;
  RobotModel robot;
  std::map<std::string, Interval> ranges;  // by coordinate name
  std::vector<Obstacle> obstacles;
  double cable_diameter = 0.0;
  double slack = 0.0;

  ClearanceSpec clearance() const { return ClearanceSpec::from_cable(cable_diameter, slack); }

  Interval range_of(const std::string& coord) const {
    auto it = ranges.find(coord);
    if (it == ranges.end()) {
      throw Error(ErrorCode::validation_error, "no range given for coordinate '" + coord + "'");
    }
    return it->second;
  }
};

namespace detail {

// Reads fields of a JSON object and reports missing or mistyped ones by path.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const {
    if (!j_.contains(key)) fail(key, "missing field");
    return j_.at(key);
  }
  std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }
  int integer(const char* key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }
  int integer_or(const char* key, int fallback) const { return has(key) ? integer(key) : fallback; }
  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string string_or(const char* key, std::string fallback) const {
    return has(key) ? string(key) : fallback;
  }
  Vec3 vec3(const char* key) const { return to_vec3(at(key), field(key)); }
  const json& array(const char* key) const {
    const json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array");
    return v;
  }

  static Vec3 to_vec3(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3) {
      throw Error(ErrorCode::validation_error, where + ": expected an array of 3 numbers");
    }
    Vec3 out;
    for (int k = 0; k < 3; ++k) {
      if (!v[static_cast<std::size_t>(k)].is_number()) {
        throw Error(ErrorCode::validation_error, where + ": expected an array of 3 numbers");
      }
      out[k] = v[static_cast<std::size_t>(k)].get<double>();
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    std::string where = key.empty() ? path_ : field(key.c_str());
    if (where.empty()) where = "document";
    throw Error(ErrorCode::validation_error, where + ": " + msg);
  }

 private:
  const json& j_;
  std::string path_;
};

inline std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + e.what());
  }
}

inline json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline Mat3 mat3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) throw Error(ErrorCode::validation_error, where + ": expected a 3x3 matrix");
  Mat3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = Reader::to_vec3(v[static_cast<std::size_t>(r)], where).transpose();
  return m;
}

inline json mat_json(const Mat3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) out.push_back(vec_json(m.row(r).transpose()));
  return out;
}

inline Obstacle parse_obstacle(const json& j, const std::string& path) {
  const Reader r(j, path);
  const std::string type = r.string("type");
  Obstacle o;
  o.name = r.string_or("name", "");
  o.link = r.integer_or("link", 0);
  if (type == "mesh") {
    TriMesh m;
    const json& verts = r.array("vertices");
    for (std::size_t k = 0; k < verts.size(); ++k) {
      m.vertices.push_back(Reader::to_vec3(verts[k], indexed(r.field("vertices"), k)));
    }
    const json& tris = r.array("triangles");
    for (std::size_t k = 0; k < tris.size(); ++k) {
      const json& t = tris[k];
      if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
          !t[2].is_number_integer()) {
        throw Error(ErrorCode::validation_error,
                    indexed(r.field("triangles"), k) + ": expected 3 vertex indices");
      }
      m.triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    o.shape = std::move(m);
  } else if (type == "box") {
    o.shape = make_box(r.vec3("center"), r.vec3("size"));
  } else if (type == "cylinder") {
    o.shape = Cylinder{r.vec3("a"), r.vec3("b"), r.number("radius")};
  } else if (type == "sphere") {
    o.shape = Sphere{r.vec3("center"), r.number("radius")};
  } else if (type == "ellipsoid") {
    o.shape = Ellipsoid{r.vec3("center"), mat3(r.at("matrix"), r.field("matrix"))};
  } else if (type == "cone") {
    o.shape = Cone{r.vec3("vertex"), r.vec3("axis"), r.number("half_angle"), r.number("height")};
  } else {
    throw Error(ErrorCode::parse_error, r.field("type") + ": unknown obstacle type '" + type + "'");
  }
  return o;
}

inline json obstacle_json(const Obstacle& o) {
  json j;
  j["name"] = o.name;
  j["link"] = o.link;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TriMesh>) {
          j["type"] = "mesh";
          j["vertices"] = json::array();
          for (const auto& v : s.vertices) j["vertices"].push_back(vec_json(v));
          j["triangles"] = json::array();
          for (const auto& t : s.triangles) j["triangles"].push_back({t[0], t[1], t[2]});
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          j["type"] = "cylinder";
          j["a"] = vec_json(s.a);
          j["b"] = vec_json(s.b);
          j["radius"] = s.radius;
        } else if constexpr (std::is_same_v<T, Sphere>) {
          j["type"] = "sphere";
          j["center"] = vec_json(s.center);
          j["radius"] = s.radius;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          j["type"] = "ellipsoid";
          j["center"] = vec_json(s.center);
          j["matrix"] = mat_json(s.shape);
        } else {
          j["type"] = "cone";
          j["vertex"] = vec_json(s.vertex);
          j["axis"] = vec_json(s.axis);
          j["half_angle"] = s.half_angle;
          j["height"] = s.height;
        }
      },
      o.shape);
  return j;
}

inline json interval_set_json(const IntervalSet& s) {
  json out = json::array();
  for (const auto& iv : s) out.push_back({iv.lo, iv.hi});
  return out;
}

inline IntervalSet interval_set_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::validation_error, where + ": expected an array of intervals");
  std::vector<Interval> parts;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& iv = j[k];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
      throw Error(ErrorCode::validation_error, indexed(where, k) + ": expected [lo, hi]");
    }
    parts.push_back({iv[0].get<double>(), iv[1].get<double>()});
  }
  return IntervalSet(std::move(parts));
}

}  // namespace detail

inline void throw_on_errors(const std::vector<Diagnostic>& diags) {
  std::string msg;
  for (const auto& d : diags) {
    if (d.severity != Diagnostic::Severity::error) continue;
    if (!msg.empty()) msg += "; ";
    msg += d.message;
  }
  if (!msg.empty()) throw Error(ErrorCode::validation_error, msg);
}

inline SceneDocument load_scene(const std::string& text) {
  using detail::Reader;
  const json root = detail::parse_text(text);
  const Reader top(root, "");
  SceneDocument doc;
  doc.schema_version = top.integer_or("schema_version", kSchemaVersion);
  if (doc.schema_version != kSchemaVersion) {
    throw Error(ErrorCode::validation_error,
                "schema_version: unsupported version " + std::to_string(doc.schema_version));
  }
  const Reader robot(top.at("robot"), "robot");
  doc.robot.name = robot.string_or("name", "");
  const json& links = robot.array("links");
  for (std::size_t k = 0; k < links.size(); ++k) {
    const Reader l(links[k], detail::indexed("robot.links", k));
    doc.robot.links.push_back({l.string_or("name", ""), l.has("offset") ? l.vec3("offset") : Vec3::Zero()});
  }
  const json& coords = robot.array("coordinates");
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const Reader c(coords[k], detail::indexed("robot.coordinates", k));
    Coordinate co;
    co.name = c.string("name");
    const std::string kind = c.string("kind");
    if (kind == "orientation") {
      co.kind = CoordKind::orientation;
    } else if (kind == "translation") {
      co.kind = CoordKind::translation;
    } else {
      c.fail("kind", "expected 'orientation' or 'translation'");
    }
    co.link = c.integer("link");
    co.axis = c.vec3("axis");
    if (c.has("range")) {
      const json& r = c.array("range");
      if (r.size() != 2 || !r[0].is_number() || !r[1].is_number()) c.fail("range", "expected [lo, hi]");
      doc.ranges[co.name] = {r[0].get<double>(), r[1].get<double>()};
    }
    doc.robot.coordinates.push_back(co);
  }
  const json& segs = robot.array("segments");
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Reader s(segs[k], detail::indexed("robot.segments", k));
    doc.robot.segments.push_back({s.integer("cable"), s.integer("start_link"), s.vec3("start"),
                                  s.integer("end_link"), s.vec3("end")});
  }
  if (top.has("obstacles")) {
    const json& obs = top.array("obstacles");
    for (std::size_t k = 0; k < obs.size(); ++k) {
      doc.obstacles.push_back(detail::parse_obstacle(obs[k], detail::indexed("obstacles", k)));
    }
  }
  if (top.has("defaults")) {
    const Reader d(top.at("defaults"), "defaults");
    doc.cable_diameter = d.number_or("cable_diameter", 0.0);
    doc.slack = d.number_or("slack", 0.0);
  }

  throw_on_errors(validate(doc.robot));
  for (std::size_t k = 0; k < doc.obstacles.size(); ++k) {
    const auto& o = doc.obstacles[k];
    if (o.link < 0 || o.link > doc.robot.link_count()) {
      throw Error(ErrorCode::validation_error,
                  "obstacles[" + std::to_string(k) + "].link: link index out of range");
    }
    throw_on_errors(validate(o));
  }
  for (const auto& [name, r] : doc.ranges) {
    const int idx = doc.robot.coordinate_index(name);
    if (!(r.hi >= r.lo)) throw Error(ErrorCode::validation_error, "range of '" + name + "': lo > hi");
    if (doc.robot.coordinates[static_cast<std::size_t>(idx)].kind == CoordKind::orientation &&
        (r.lo <= -std::numbers::pi || r.hi >= std::numbers::pi)) {
      throw Error(ErrorCode::validation_error,
                  "range of '" + name + "' must lie inside (-pi, pi); re-zero the joint");
    }
  }
  return doc;
}

inline std::string emit_scene(const SceneDocument& doc) {
  json j;
  j["schema_version"] = doc.schema_version;
  json robot;
  robot["name"] = doc.robot.name;
  robot["links"] = json::array();
  for (const auto& l : doc.robot.links) {
    robot["links"].push_back({{"name", l.name}, {"offset", detail::vec_json(l.offset)}});
  }
  robot["coordinates"] = json::array();
  for (const auto& c : doc.robot.coordinates) {
    json cj = {{"name", c.name}, {"kind", to_string(c.kind)}, {"link", c.link}, {"axis", detail::vec_json(c.axis)}};
    if (auto it = doc.ranges.find(c.name); it != doc.ranges.end()) cj["range"] = {it->second.lo, it->second.hi};
    robot["coordinates"].push_back(cj);
  }
  robot["segments"] = json::array();
  for (const auto& s : doc.robot.segments) {
    robot["segments"].push_back({{"cable", s.cable},
                                 {"start_link", s.start_link},
                                 {"start", detail::vec_json(s.start)},
                                 {"end_link", s.end_link},
                                 {"end", detail::vec_json(s.end)}});
  }
  j["robot"] = robot;
  j["obstacles"] = json::array();
  for (const auto& o : doc.obstacles) j["obstacles"].push_back(detail::obstacle_json(o));
  j["defaults"] = {{"cable_diameter", doc.cable_diameter}, {"slack", doc.slack}};
  return j.dump(2) + "\n";
}

// A platform trajectory: translation as polynomials (ascending coefficients)
// in tau or in T, or as Bezier control points; orientations as XYZ Euler angles.
struct TrajectoryDocument {
  std::string parameter = "tau";  // "tau", "T" or "bezier"
  TranslationPolys translation;
  std::vector<Vec3> controls;
  Vec3 start_euler = Vec3::Zero();
  Vec3 end_euler = Vec3::Zero();
  std::optional<double> clearance;

  RayPath build() const {
    const Quaternion qs = Quaternion::from_euler_xyz(start_euler.x(), start_euler.y(), start_euler.z());
    const Quaternion qe = Quaternion::from_euler_xyz(end_euler.x(), end_euler.y(), end_euler.z());
    if (parameter == "T") return build_ray_path_in_T(translation, qs, qe);
    if (parameter == "bezier") return build_ray_path(smooth(controls), qs, qe);
    return build_ray_path(translation, qs, qe);
  }
};

inline TrajectoryDocument load_trajectory(const std::string& text) {
  using detail::Reader;
  const json root = detail::parse_text(text);
  const Reader top(root, "");
  TrajectoryDocument doc;
  if (top.has("bezier")) {
    doc.parameter = "bezier";
    const json& c = top.array("bezier");
    for (std::size_t k = 0; k < c.size(); ++k) doc.controls.push_back(Reader::to_vec3(c[k], detail::indexed("bezier", k)));
    if (doc.controls.size() < 2) top.fail("bezier", "needs at least 2 control points");
  } else {
    const Reader t(top.at("translation"), "translation");
    doc.parameter = t.string_or("parameter", "tau");
    if (doc.parameter != "tau" && doc.parameter != "T") t.fail("parameter", "expected 'tau' or 'T'");
    const char* keys[3] = {"x", "y", "z"};
    for (std::size_t r = 0; r < 3; ++r) {
      std::vector<double> c;
      for (const auto& v : t.array(keys[r])) {
        if (!v.is_number()) t.fail(keys[r], "expected numbers");
        c.push_back(v.get<double>());
      }
      doc.translation[r] = Polynomial(std::move(c));
    }
  }
  if (top.has("start_orientation")) doc.start_euler = top.vec3("start_orientation");
  if (top.has("end_orientation")) doc.end_euler = top.vec3("end_orientation");
  if (top.has("clearance")) doc.clearance = top.number("clearance");
  return doc;
}

struct RayRecord {
  std::map<std::string, double> kappa;
  IntervalSet free;
  std::vector<PairRecord> pairs;
};

struct ResultDocument {
  json query = json::object();
  std::vector<RayRecord> rays;
  double timing_s = 0.0;
};

inline RayRecord make_record(const RobotModel& model, int index, const Pose& kappa, const RayResult& r) {
  RayRecord rec;
  for (int c = 0; c < model.dof(); ++c) {
    if (c != index) rec.kappa[model.coordinates[static_cast<std::size_t>(c)].name] = kappa[c];
  }
  rec.free = r.free;
  rec.pairs = r.pairs;
  return rec;
}

inline json results_json(const ResultDocument& doc) {
  json j;
  j["query"] = doc.query;
  j["timing_s"] = doc.timing_s;
  j["rays"] = json::array();
  for (const auto& r : doc.rays) {
    json rj;
    rj["kappa"] = r.kappa;
    rj["free"] = detail::interval_set_json(r.free);
    rj["pairs"] = json::array();
    for (const auto& p : r.pairs) {
      rj["pairs"].push_back({{"pair", p.pair},
                             {"blocked", detail::interval_set_json(p.blocked)},
                             {"branches", p.branches}});
    }
    j["rays"].push_back(rj);
  }
  return j;
}

// JSON: the full document. CSV: one row per (ray, free interval).
inline std::string emit_results(const ResultDocument& doc, const std::string& format) {
  if (format == "json") return results_json(doc).dump(2) + "\n";
  std::ostringstream out;
  if (format == "text") {
    for (const auto& r : doc.rays) {
      for (const auto& [k, v] : r.kappa) out << k << "=" << v << " ";
      out << "free: " << (r.free.empty() ? "(none)" : r.free.to_string(6)) << "\n";
    }
    return out.str();
  }
  if (format != "csv") throw Error(ErrorCode::invalid_argument, "unknown result format '" + format + "'");
  std::vector<std::string> names;
  if (!doc.rays.empty()) {
    for (const auto& [k, v] : doc.rays.front().kappa) names.push_back(k);
  }
  for (const auto& n : names) out << n << ",";
  out << "lo,hi\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : doc.rays) {
    for (const auto& iv : r.free) {
      for (const auto& n : names) out << num(r.kappa.at(n)) << ",";
      out << num(iv.lo) << "," << num(iv.hi) << "\n";
    }
  }
  return out.str();
}

inline ResultDocument parse_results(const std::string& text) {
  using detail::Reader;
  const json root = detail::parse_text(text);
  const Reader top(root, "");
  ResultDocument doc;
  doc.query = top.has("query") ? top.at("query") : json::object();
  doc.timing_s = top.number_or("timing_s", 0.0);
  const json& rays = top.array("rays");
  for (std::size_t k = 0; k < rays.size(); ++k) {
    const std::string path = detail::indexed("rays", k);
    const Reader r(rays[k], path);
    RayRecord rec;
    for (const auto& [name, v] : r.at("kappa").items()) rec.kappa[name] = v.get<double>();
    rec.free = detail::interval_set_from(r.at("free"), path + ".free");
    if (r.has("pairs")) {
      const json& ps = r.array("pairs");
      for (std::size_t p = 0; p < ps.size(); ++p) {
        const Reader pr(ps[p], detail::indexed(path + ".pairs", p));
        PairRecord pair;
        pair.pair = pr.string("pair");
        pair.blocked = detail::interval_set_from(pr.at("blocked"), pr.field("blocked"));
        if (pr.has("branches")) pair.branches = pr.at("branches").get<std::vector<std::string>>();
        rec.pairs.push_back(std::move(pair));
      }
    }
    doc.rays.push_back(std::move(rec));
  }
  return doc;
}

struct SvgStyle {
  double width = 600;
  double height = 600;
  double margin = 40;
  double stroke = 2;
  std::string free_color = "#2a7";
  std::string obstacle_color = "#c33";
};

// Free intervals of rays along one coordinate (horizontal) stacked by a second
// coordinate (vertical, increasing upwards). Obstacles are outlined in their
// projection onto the two coordinates when both are world translations given
// by `axis_h` and `axis_v` (0, 1, 2 for x, y, z; -1 to skip obstacles).
inline std::string render_cross_section(const std::vector<RayRecord>& rays, const std::string& vertical,
                                        Interval h_range, Interval v_range,
                                        const std::vector<Obstacle>& obstacles = {}, int axis_h = -1,
                                        int axis_v = -1, const SvgStyle& style = {}) {
  const double pw = style.width - 2 * style.margin;
  const double ph = style.height - 2 * style.margin;
  auto sx = [&](double x) {
    const double w = h_range.hi - h_range.lo;
    return style.margin + (w > 0 ? (x - h_range.lo) / w : 0.5) * pw;
  };
  auto sy = [&](double y) {
    const double w = v_range.hi - v_range.lo;
    return style.height - style.margin - (w > 0 ? (y - v_range.lo) / w : 0.5) * ph;
  };
  char buf[256];
  std::ostringstream out;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\">\n",
                style.width, style.height, style.width, style.height);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"none\" stroke=\"#000\"/>\n",
                style.margin, style.margin, pw, ph);
  out << buf;
  for (const auto& r : rays) {
    auto it = r.kappa.find(vertical);
    if (it == r.kappa.end()) continue;
    const double y = sy(it->second);
    for (const auto& iv : r.free) {
      std::snprintf(buf, sizeof(buf),
                    "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"%s\" stroke-width=\"%g\"/>\n",
                    sx(iv.lo), y, sx(iv.hi), y, style.free_color.c_str(), style.stroke);
      out << buf;
    }
  }
  if (axis_h >= 0 && axis_v >= 0) {
    auto seg = [&](const Vec3& a, const Vec3& b) {
      std::snprintf(buf, sizeof(buf),
                    "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"%s\" stroke-width=\"1\"/>\n",
                    sx(a[axis_h]), sy(a[axis_v]), sx(b[axis_h]), sy(b[axis_v]), style.obstacle_color.c_str());
      out << buf;
    };
    auto circle = [&](const Vec3& c, double r) {
      std::snprintf(buf, sizeof(buf),
                    "<ellipse cx=\"%.3f\" cy=\"%.3f\" rx=\"%.3f\" ry=\"%.3f\" fill=\"none\" stroke=\"%s\"/>\n",
                    sx(c[axis_h]), sy(c[axis_v]), std::abs(sx(c[axis_h] + r) - sx(c[axis_h])),
                    std::abs(sy(c[axis_v] + r) - sy(c[axis_v])), style.obstacle_color.c_str());
      out << buf;
    };
    for (const auto& o : obstacles) {
      if (o.link != 0) continue;
      std::visit(
          [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TriMesh>) {
              for (const auto& t : s.triangles) {
                for (int k = 0; k < 3; ++k) {
                  seg(s.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])],
                      s.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])]);
                }
              }
            } else if constexpr (std::is_same_v<T, Cylinder>) {
              seg(s.a, s.b);
              circle(s.a, s.radius);
              circle(s.b, s.radius);
            } else if constexpr (std::is_same_v<T, Sphere>) {
              circle(s.center, s.radius);
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
              Eigen::SelfAdjointEigenSolver<Mat3> eig(s.shape);
              circle(s.center, 1.0 / std::sqrt(eig.eigenvalues().minCoeff()));
            } else {
              const Vec3 top = s.vertex + s.height * s.axis;
              Vec3 side = s.axis.unitOrthogonal();
              const double r = s.height * std::tan(s.half_angle);
              seg(s.vertex, top + r * side);
              seg(s.vertex, top - r * side);
            }
          },
          o.shape);
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace rayspace::io
