#pragma once

// Polynomial condition systems for one interference pair along a ray. Every
// builder takes the rational position forms of the entities involved and
// returns a union of conjunctions: the blocked set is the union over families
// of the set where all conditions of the family hold (cones return the free
// set instead).

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rayspace/geom.hpp"
#include "rayspace/inequality.hpp"
#include "rayspace/rational.hpp"

namespace rayspace {

struct ConditionFamily {
  std::string branch;
  std::vector<SignCondition> conds;
};

struct DegreeEntry {
  std::string name;
  int degree;
};

struct InterferenceSystem {
  std::vector<ConditionFamily> families;
  bool families_are_free = false;
  std::vector<DegreeEntry> degrees;
  // Parallel branch: the distance polynomial is tested at the roots of the gate.
  std::optional<Polynomial> parallel_gate;
  Polynomial parallel_poly;

  int degree_of(const std::string& name) const {
    for (const auto& d : degrees) {
      if (d.name == name) return d.degree;
    }
    return -2;
  }
};

inline InterferenceSystem& append(InterferenceSystem& into, InterferenceSystem&& from) {
  for (auto& f : from.families) into.families.push_back(std::move(f));
  return into;
}

namespace detail {

inline SignCondition ge(const RationalScalar& s) { return {s.num, Relation::ge}; }

}  // namespace detail

// Point m against segment a-b: the start, middle and end branches.
inline InterferenceSystem point_segment_system(const RationalBasis& B, const RationalVec3& a,
                                               const RationalVec3& b, const RationalVec3& m,
                                               double eps, const std::string& tag = "point") {
  const RationalVec3 s = B.reduce(B.sub(b, a));
  const RationalVec3 r = B.reduce(B.sub(m, a));
  const RationalVec3 re = B.reduce(B.sub(m, b));
  const RationalScalar rs = RationalBasis::dot(r, s);
  const RationalScalar ss = RationalBasis::dot(s, s);
  const RationalScalar rr = RationalBasis::dot(r, r);
  const RationalVec3 rxs = RationalBasis::cross(r, s);
  const RationalScalar cr = RationalBasis::dot(rxs, rxs);
  const RationalScalar ee = RationalBasis::dot(re, re);
  const RationalScalar e2 = RationalBasis::constant(eps * eps);

  InterferenceSystem sys;
  sys.families.push_back({tag + ":start",
                          {detail::ge(RationalBasis::scale(-1.0, rs)), detail::ge(B.sub(e2, rr))}});
  sys.families.push_back({tag + ":middle",
                          {detail::ge(rs), detail::ge(B.sub(ss, rs)),
                           detail::ge(B.sub(RationalBasis::scale(eps * eps, ss), cr))}});
  sys.families.push_back({tag + ":end", {detail::ge(B.sub(rs, ss)), detail::ge(B.sub(e2, ee))}});
  sys.degrees = {{"r.s", rs.num.degree()}, {"|s|^2", ss.num.degree()}, {"|r x s|^2", cr.num.degree()}};
  return sys;
}

// Interior (common perpendicular) branch of segment i = ai-bi against
// segment j = aj-bj, gated by d > 0. Degree entries: d, n_ti, n_tj, n_t.
inline InterferenceSystem segment_interior_system(const RationalBasis& B, const RationalVec3& ai,
                                                  const RationalVec3& bi, const RationalVec3& aj,
                                                  const RationalVec3& bj, double eps) {
  const RationalVec3 si = B.reduce(B.sub(bi, ai));
  const RationalVec3 sj = B.reduce(B.sub(bj, aj));
  const RationalVec3 sij = B.reduce(B.sub(aj, ai));
  const RationalVec3 n = RationalBasis::cross(si, sj);
  const RationalVec3 neg_n = RationalBasis::negate(n);
  const RationalVec3 neg_sj = RationalBasis::negate(sj);
  const RationalScalar d = RationalBasis::dot(n, n);
  const RationalScalar nti = RationalBasis::det(sij, neg_sj, neg_n);
  const RationalScalar ntj = RationalBasis::det(si, sij, neg_n);
  const RationalScalar nt = RationalBasis::det(si, neg_sj, sij);

  InterferenceSystem sys;
  sys.families.push_back(
      {"np",
       {{d.num, Relation::gt}, detail::ge(nti), detail::ge(ntj), detail::ge(B.sub(d, nti)),
        detail::ge(B.sub(d, ntj)),
        detail::ge(B.sub(RationalBasis::scale(eps * eps, d), RationalBasis::mul(nt, nt)))}});
  sys.degrees = {{"d", d.num.degree()},
                 {"n_ti", nti.num.degree()},
                 {"n_tj", ntj.num.degree()},
                 {"n_t", nt.num.degree()}};

  const RationalVec3 sxij = RationalBasis::cross(si, sij);
  sys.parallel_gate = d.num;
  sys.parallel_poly = B.sub(RationalBasis::scale(eps * eps, RationalBasis::dot(si, si)),
                            RationalBasis::dot(sxij, sxij))
                          .num;
  return sys;
}

// Full segment-segment clearance: interior branch plus the four
// endpoint-to-segment families, which also cover the parallel case.
inline InterferenceSystem segment_segment_system(const RationalBasis& B, const RationalVec3& ai,
                                                 const RationalVec3& bi, const RationalVec3& aj,
                                                 const RationalVec3& bj, double eps) {
  InterferenceSystem sys = segment_interior_system(B, ai, bi, aj, bj, eps);
  append(sys, point_segment_system(B, ai, bi, aj, eps, "start_j"));
  append(sys, point_segment_system(B, ai, bi, bj, eps, "end_j"));
  append(sys, point_segment_system(B, aj, bj, ai, eps, "start_i"));
  append(sys, point_segment_system(B, aj, bj, bi, eps, "end_i"));
  return sys;
}

// Segment a-b crossing triangle (v0, v1, v2): both sign-gated families.
// Degree entries: d, n_k, n_k1, n_k2.
inline InterferenceSystem triangle_intersection_system(const RationalBasis& B, const RationalVec3& a,
                                                       const RationalVec3& b, const RationalVec3& v0,
                                                       const RationalVec3& v1, const RationalVec3& v2) {
  const RationalVec3 neg_s = RationalBasis::negate(B.reduce(B.sub(b, a)));
  const RationalVec3 e1 = B.reduce(B.sub(v1, v0));
  const RationalVec3 e2 = B.reduce(B.sub(v2, v0));
  const RationalVec3 eij = B.reduce(B.sub(a, v0));
  const RationalScalar d = RationalBasis::det(neg_s, e1, e2);
  const RationalScalar nk = RationalBasis::det(eij, e1, e2);
  const RationalScalar nk1 = RationalBasis::det(neg_s, eij, e2);
  const RationalScalar nk2 = RationalBasis::det(neg_s, e1, eij);
  const std::vector<Polynomial> polys = {nk.num, B.sub(d, nk).num, nk1.num, nk2.num,
                                         B.sub(d, B.add(nk1, nk2)).num};
  InterferenceSystem sys;
  ConditionFamily pos{"intersect+", {{d.num, Relation::gt}}};
  ConditionFamily neg{"intersect-", {{d.num, Relation::lt}}};
  for (const auto& p : polys) {
    pos.conds.push_back({p, Relation::ge});
    neg.conds.push_back({p, Relation::le});
  }
  sys.families = {std::move(pos), std::move(neg)};
  sys.degrees = {{"d", d.num.degree()},
                 {"n_k", nk.num.degree()},
                 {"n_k1", nk1.num.degree()},
                 {"n_k2", nk2.num.degree()}};
  return sys;
}

// Point p within eps of the face of triangle (v0, v1, v2), projection inside.
inline InterferenceSystem point_face_system(const RationalBasis& B, const RationalVec3& p,
                                            const RationalVec3& v0, const RationalVec3& v1,
                                            const RationalVec3& v2, double eps,
                                            const std::string& tag) {
  const RationalVec3 e1 = B.reduce(B.sub(v1, v0));
  const RationalVec3 e2 = B.reduce(B.sub(v2, v0));
  const RationalVec3 w = B.reduce(B.sub(p, v0));
  const RationalVec3 n = RationalBasis::cross(e1, e2);
  const RationalScalar nn = RationalBasis::dot(n, n);
  const RationalScalar k1 = RationalBasis::dot(RationalBasis::cross(w, e2), n);
  const RationalScalar k2 = RationalBasis::dot(RationalBasis::cross(e1, w), n);
  const RationalScalar h = RationalBasis::dot(w, n);
  InterferenceSystem sys;
  sys.families.push_back(
      {tag,
       {detail::ge(k1), detail::ge(k2), detail::ge(B.sub(nn, B.add(k1, k2))),
        detail::ge(B.sub(RationalBasis::scale(eps * eps, nn), RationalBasis::mul(h, h)))}});
  return sys;
}

// Clearance between segment a-b and a triangle mesh whose vertex forms are given.
inline InterferenceSystem mesh_system(const RationalBasis& B, const RationalVec3& a,
                                      const RationalVec3& b, const std::vector<RationalVec3>& verts,
                                      const std::vector<std::array<int, 3>>& triangles, double eps) {
  InterferenceSystem sys;
  std::map<std::pair<int, int>, bool> edges;
  for (const auto& t : triangles) {
    const auto& v0 = verts[static_cast<std::size_t>(t[0])];
    const auto& v1 = verts[static_cast<std::size_t>(t[1])];
    const auto& v2 = verts[static_cast<std::size_t>(t[2])];
    InterferenceSystem tri = triangle_intersection_system(B, a, b, v0, v1, v2);
    if (sys.degrees.empty()) sys.degrees = tri.degrees;
    append(sys, std::move(tri));
    append(sys, point_face_system(B, a, v0, v1, v2, eps, "face:start"));
    append(sys, point_face_system(B, b, v0, v1, v2, eps, "face:end"));
    for (int k = 0; k < 3; ++k) {
      const int p = t[static_cast<std::size_t>(k)];
      const int q = t[static_cast<std::size_t>((k + 1) % 3)];
      edges.emplace(std::minmax(p, q), true);
    }
  }
  for (const auto& [e, unused] : edges) {
    const auto& p = verts[static_cast<std::size_t>(e.first)];
    const auto& q = verts[static_cast<std::size_t>(e.second)];
    InterferenceSystem in = segment_interior_system(B, a, b, p, q, eps);
    for (auto& f : in.families) f.branch = "edge";
    append(sys, std::move(in));
    append(sys, point_segment_system(B, p, q, a, eps, "edge:start"));
    append(sys, point_segment_system(B, p, q, b, eps, "edge:end"));
  }
  std::vector<bool> used(verts.size(), false);
  for (const auto& t : triangles) {
    for (int v : t) used[static_cast<std::size_t>(v)] = true;
  }
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (used[v]) append(sys, point_segment_system(B, a, b, verts[v], eps, "vertex"));
  }
  return sys;
}

// Capsule of the given radius around axis p-q. Degree entries as for segments.
inline InterferenceSystem cylinder_system(const RationalBasis& B, const RationalVec3& a,
                                          const RationalVec3& b, const RationalVec3& p,
                                          const RationalVec3& q, double eps) {
  return segment_segment_system(B, a, b, p, q, eps);
}

inline InterferenceSystem sphere_system(const RationalBasis& B, const RationalVec3& a,
                                        const RationalVec3& b, const RationalVec3& center,
                                        double eps) {
  return point_segment_system(B, a, b, center, eps, "sphere");
}

// Affine map onto the unit sphere, then the point-segment branches with eps = 1.
inline InterferenceSystem ellipsoid_system(const RationalBasis& B, const RationalVec3& a,
                                           const RationalVec3& b, const Ellipsoid& e) {
  const Mat3 t = ellipsoid_normalizer(e);
  const Vec3 off = -(t * e.center);
  return point_segment_system(B, B.affine(t, a, off), B.affine(t, b, off),
                              RationalBasis::constant(Vec3::Zero()), 1.0, "ellipsoid");
}

// Free set of the line-based cone test: {c2 > 0, delta < 0} u {c2 < 0, delta < 0}.
inline InterferenceSystem cone_system(const RationalBasis& B, const RationalVec3& a,
                                      const RationalVec3& b, const Cone& cone) {
  const Mat3 m = cone_matrix(cone);
  const RationalVec3 s = B.reduce(B.sub(b, a));
  const RationalVec3 delta = B.reduce(B.affine(Mat3::Identity(), a, -cone.vertex));
  const RationalVec3 ms = B.affine(m, s, Vec3::Zero());
  const RationalVec3 md = B.affine(m, delta, Vec3::Zero());
  const RationalScalar c2 = RationalBasis::dot(s, ms);
  const RationalScalar c1 = RationalBasis::dot(s, md);
  const RationalScalar c0 = RationalBasis::dot(delta, md);
  const RationalScalar disc = B.sub(RationalBasis::mul(c1, c1), RationalBasis::mul(c2, c0));
  InterferenceSystem sys;
  sys.families_are_free = true;
  sys.families.push_back({"cone+", {{c2.num, Relation::gt}, {disc.num, Relation::lt}}});
  sys.families.push_back({"cone-", {{c2.num, Relation::lt}, {disc.num, Relation::lt}}});
  sys.degrees = {{"c2", c2.num.degree()},
                 {"c1", c1.num.degree()},
                 {"c0", c0.num.degree()},
                 {"delta", disc.num.degree()}};
  return sys;
}

// Blocked subset of the domain, and the branches that contributed to it.
struct SystemSolution {
  IntervalSet blocked;
  std::vector<std::string> branches;
  std::vector<double> parallel_hits;
};

inline SystemSolution solve_interference(const InterferenceSystem& sys, Interval domain) {
  SystemSolution out;
  std::vector<Interval> parts;
  for (const auto& f : sys.families) {
    const IntervalSet s = solve_system(f.conds, domain);
    if (s.empty()) continue;
    parts.insert(parts.end(), s.begin(), s.end());
    if (std::find(out.branches.begin(), out.branches.end(), f.branch) == out.branches.end()) {
      out.branches.push_back(f.branch);
    }
  }
  IntervalSet hit(std::move(parts));
  out.blocked = sys.families_are_free ? hit.complement_in(domain) : hit;
  if (sys.parallel_gate && !sys.parallel_gate->is_zero()) {
    for (double r : real_roots(*sys.parallel_gate, domain.lo, domain.hi)) {
      if (sys.parallel_poly.sign_at(r) >= 0) out.parallel_hits.push_back(r);
    }
  }
  return out;
}

}  // namespace rayspace
