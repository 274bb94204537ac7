#pragma once

// Kinematic description of cable-driven robots: a serial chain of rigid links
// (link 0 is the base) with cables routed between links as straight segments.
// A single-platform parallel robot is the one-link special case.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rayspace/error.hpp"

namespace rayspace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class CoordKind { orientation, translation };

inline const char* to_string(CoordKind k) {
  return k == CoordKind::orientation ? "orientation" : "translation";
}

// One generalized coordinate. Orientation coordinates rotate their link about
// `axis` (unit, link-local after the preceding rotations); translation
// coordinates displace the link origin along `axis` expressed in the parent frame.
struct Coordinate {
  std::string name;
  CoordKind kind = CoordKind::translation;
  int link = 1;
  Vec3 axis = Vec3::UnitX();
};

// Link w (w >= 1). `offset` is the constant part of the vector from the origin
// of link w-1 to the origin of link w, in frame w-1.
struct LinkSpec {
  std::string name;
  Vec3 offset = Vec3::Zero();
};

// Segment of a cable from link `start_link` to link `end_link`, with the
// attachment points given in the respective local frames.
struct SegmentSpec {
  int cable = 0;
  int start_link = 0;
  Vec3 start = Vec3::Zero();
  int end_link = 1;
  Vec3 end = Vec3::Zero();
};

struct RobotModel {
  std::string name;
  std::vector<Coordinate> coordinates;  // the order defines the pose vector q
  std::vector<LinkSpec> links;          // links[0] is link 1
  std::vector<SegmentSpec> segments;

  int dof() const { return static_cast<int>(coordinates.size()); }
  int link_count() const { return static_cast<int>(links.size()); }

  int coordinate_index(const std::string& label) const {
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
      if (coordinates[i].name == label) return static_cast<int>(i);
    }
    return -1;
  }
};

using Pose = Eigen::VectorXd;

struct Diagnostic {
  enum class Severity { error, warning } severity = Severity::error;
  std::string message;
};

inline Mat3 axis_rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

// Position and orientation of every link frame at pose q.
struct LinkFrames {
  std::vector<Vec3> origin;    // origin[k] = 0r_{P0 Pk}
  std::vector<Mat3> rotation;  // rotation[k] = 0R_k
};

inline LinkFrames link_frames(const RobotModel& model, const Pose& q) {
  if (q.size() != model.dof()) {
    throw Error(ErrorCode::invalid_argument,
                "pose has " + std::to_string(q.size()) + " coordinates, model expects " +
                    std::to_string(model.dof()));
  }
  LinkFrames f;
  f.origin.push_back(Vec3::Zero());
  f.rotation.push_back(Mat3::Identity());
  for (int w = 1; w <= model.link_count(); ++w) {
    Vec3 local = model.links[static_cast<std::size_t>(w - 1)].offset;
    Mat3 joint = Mat3::Identity();
    for (int k = 0; k < model.dof(); ++k) {
      const auto& c = model.coordinates[static_cast<std::size_t>(k)];
      if (c.link != w) continue;
      if (c.kind == CoordKind::translation) {
        local += q[k] * c.axis;
      } else {
        joint = joint * axis_rotation(c.axis, q[k]);
      }
    }
    const Mat3& parent = f.rotation.back();
    f.origin.push_back(f.origin.back() + parent * local);
    f.rotation.push_back(parent * joint);
  }
  return f;
}

// 0R_k, the orientation of link k in the base frame.
inline Mat3 rotation_chain(const RobotModel& model, const Pose& q, int k) {
  if (k < 0 || k > model.link_count()) {
    throw Error(ErrorCode::bad_index, "link index " + std::to_string(k) + " out of range");
  }
  return link_frames(model, q).rotation[static_cast<std::size_t>(k)];
}

// Base-frame position of a point given in the frame of `link`.
inline Vec3 point_position(const LinkFrames& frames, int link, const Vec3& local) {
  const auto k = static_cast<std::size_t>(link);
  return frames.origin[k] + frames.rotation[k] * local;
}

inline const SegmentSpec& segment_at(const RobotModel& model, int i) {
  if (i < 0 || i >= static_cast<int>(model.segments.size())) {
    throw Error(ErrorCode::bad_index, "segment index " + std::to_string(i) + " out of range");
  }
  return model.segments[static_cast<std::size_t>(i)];
}

// (0r_{P0 Ais}, 0r_{P0 Aie}) for segment i.
inline std::pair<Vec3, Vec3> attachment_positions(const RobotModel& model, const Pose& q, int i) {
  const SegmentSpec& seg = segment_at(model, i);
  const LinkFrames f = link_frames(model, q);
  return {point_position(f, seg.start_link, seg.start), point_position(f, seg.end_link, seg.end)};
}

inline Vec3 segment_vector(const RobotModel& model, const Pose& q, int i) {
  const auto [a, b] = attachment_positions(model, q, i);
  return b - a;
}

inline std::vector<Diagnostic> validate(const RobotModel& model) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string msg) { out.push_back({Diagnostic::Severity::error, std::move(msg)}); };

  std::set<std::string> labels;
  for (const auto& c : model.coordinates) {
    if (!labels.insert(c.name).second) error("duplicate coordinate label '" + c.name + "'");
    if (c.link < 1 || c.link > model.link_count()) {
      error("coordinate '" + c.name + "' refers to link " + std::to_string(c.link) +
            " but the model has " + std::to_string(model.link_count()) + " links");
    }
    if (!c.axis.allFinite() || std::abs(c.axis.norm() - 1.0) > 1e-9) {
      error("coordinate '" + c.name + "' axis must be a finite unit vector");
    }
  }
  for (std::size_t i = 0; i < model.segments.size(); ++i) {
    const auto& s = model.segments[i];
    const std::string tag = "segment " + std::to_string(i);
    if (s.start_link < 0 || s.start_link > model.link_count() || s.end_link < 0 ||
        s.end_link > model.link_count()) {
      error(tag + ": link index out of range");
      continue;
    }
    if (s.start_link >= s.end_link) {
      error(tag + ": start link " + std::to_string(s.start_link) + " must precede end link " +
            std::to_string(s.end_link));
    }
    if (!s.start.allFinite() || !s.end.allFinite()) error(tag + ": attachment vectors must be finite");
  }
  for (const auto& l : model.links) {
    if (!l.offset.allFinite()) error("link '" + l.name + "' offset must be finite");
  }
  if (!out.empty()) return out;

  // Coincident attachments show up as a zero-length segment at the zero pose.
  const Pose zero = Pose::Zero(model.dof());
  for (int i = 0; i < static_cast<int>(model.segments.size()); ++i) {
    if (segment_vector(model, zero, i).norm() < 1e-12) {
      error("segment " + std::to_string(i) + ": coincident attachment points");
    }
  }
  return out;
}

// Orientation coordinates must lie in the open interval (-pi, pi).
inline std::vector<Diagnostic> validate_pose(const RobotModel& model, const Pose& q) {
  std::vector<Diagnostic> out;
  if (q.size() != model.dof()) {
    out.push_back({Diagnostic::Severity::error, "pose length does not match the model"});
    return out;
  }
  for (int k = 0; k < model.dof(); ++k) {
    const auto& c = model.coordinates[static_cast<std::size_t>(k)];
    if (!std::isfinite(q[k])) {
      out.push_back({Diagnostic::Severity::error, "coordinate '" + c.name + "' is not finite"});
    } else if (c.kind == CoordKind::orientation && std::abs(q[k]) >= std::numbers::pi) {
      out.push_back({Diagnostic::Severity::error,
                     "orientation coordinate '" + c.name + "' must lie in (-pi, pi)"});
    }
  }
  return out;
}

}  // namespace rayspace
