#include "ftnet/geom.hpp"

#include <algorithm>
#include <cmath>

#include "ftnet/errors.hpp"

namespace ftnet {

namespace {

double scale_of(const Point& p, const Point& q) {
  return std::max({1.0, p.norm(), q.norm()});
}

}  // namespace

UnitVector UnitVector::normalize(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::DegenerateSegment, "cannot normalize a zero vector");
  }
  return UnitVector(v / n);
}

UnitVector unit_vector(const Point& p, const Point& q) {
  const Vec3 d = q - p;
  if (d.norm() <= kCoincidenceTol * scale_of(p, q)) {
    throw Error(ErrorCode::DegenerateSegment, "segment endpoints coincide");
  }
  return UnitVector::normalize(d);
}

double angle_at(const Point& a0, const Point& ai, const Point& aj) {
  const Vec3 u = unit_vector(a0, ai).vec();
  const Vec3 v = unit_vector(a0, aj).vec();
  // atan2 keeps full precision near 0 and pi; both terms are symmetric in
  // (u, v) so the result does not depend on argument order.
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

PlaneFrame make_plane_frame(const Point& a0, const Point& aj, const Point& ak,
                            int j, int k) {
  const Vec3 n = unit_vector(a0, aj).vec().cross(unit_vector(a0, ak).vec());
  if (n.norm() <= kDegenerateTol) {
    throw Error(ErrorCode::DegeneratePlane, "plane rays are collinear");
  }
  return PlaneFrame{a0, j, k, UnitVector::normalize(n)};
}

double projected_angle(const Point& a0, const Point& ai, const Point& aj,
                       const Point& ak) {
  const PlaneFrame frame = make_plane_frame(a0, aj, ak);
  const Vec3 u = unit_vector(a0, ai).vec();
  const double normal_part = std::abs(u.dot(frame.normal.vec()));
  const double in_plane = (u - u.dot(frame.normal.vec()) * frame.normal.vec()).norm();
  return std::atan2(normal_part, in_plane);
}

std::vector<double> dihedral_angles(const Point& a1, const Point& a2,
                                    const Point& apex,
                                    std::span<const Point> others) {
  const Vec3 edge = a2 - a1;
  if (edge.norm() <= kCoincidenceTol * scale_of(a1, a2)) {
    throw Error(ErrorCode::DegenerateEdge, "dihedral edge endpoints coincide");
  }
  const Vec3 e = edge.normalized();
  auto off_edge = [&](const Point& p) {
    const Vec3 r = p - a1;
    const Vec3 w = r - r.dot(e) * e;
    if (w.norm() <= kDegenerateTol * std::max(r.norm(), edge.norm())) {
      throw Error(ErrorCode::PointOnEdge, "point lies on the dihedral edge");
    }
    return w;
  };
  const Vec3 wa = off_edge(apex);
  std::vector<double> out;
  out.reserve(others.size());
  for (const Point& p : others) {
    const Vec3 w = off_edge(p);
    out.push_back(std::atan2(wa.cross(w).norm(), wa.dot(w)));
  }
  return out;
}

SegmentHeight height_to_segment(const Point& a0, const Point& ai,
                                const Point& aj) {
  const Vec3 d = aj - ai;
  if (d.norm() <= kCoincidenceTol * scale_of(ai, aj)) {
    throw Error(ErrorCode::DegenerateSegment, "segment endpoints coincide");
  }
  const double t = (a0 - ai).dot(d) / d.squaredNorm();
  const Point foot = ai + t * d;
  return {(a0 - foot).norm(), foot};
}

double height_to_plane(const Point& a0, const Point& ai, const Point& aj,
                       const Point& ak) {
  const Vec3 n = (aj - ai).cross(ak - ai);
  const double scale = (aj - ai).norm() * (ak - ai).norm();
  if (!(scale > 0.0) || n.norm() <= kDegenerateTol * scale) {
    throw Error(ErrorCode::DegeneratePlane, "plane points are collinear");
  }
  return std::abs((a0 - ai).dot(n.normalized()));
}

int plane_side_sign(const Point& ai, const PlaneFrame& frame, double tol) {
  const Vec3 r = ai - frame.origin;
  const double d = r.dot(frame.normal.vec());
  if (std::abs(d) <= tol * r.norm()) return 0;
  return d > 0.0 ? 1 : -1;
}

double diameter(std::span<const Point> points) {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      d = std::max(d, (points[i] - points[j]).norm());
    }
  }
  return d;
}

std::vector<double> barycentric(const Point& p, std::span<const Point> simplex) {
  if (simplex.size() == 3) {
    const Vec3 e1 = simplex[1] - simplex[0];
    const Vec3 e2 = simplex[2] - simplex[0];
    const Vec3 n = e1.cross(e2);
    if (n.norm() <= kDegenerateTol * e1.norm() * e2.norm()) {
      throw Error(ErrorCode::DegeneratePlane, "triangle is degenerate");
    }
    const Vec3 r = p - simplex[0];
    const double area2 = n.squaredNorm();
    const double l1 = r.cross(e2).dot(n) / area2;
    const double l2 = e1.cross(r).dot(n) / area2;
    return {1.0 - l1 - l2, l1, l2};
  }
  if (simplex.size() == 4) {
    Eigen::Matrix3d m;
    m.col(0) = simplex[1] - simplex[0];
    m.col(1) = simplex[2] - simplex[0];
    m.col(2) = simplex[3] - simplex[0];
    const double vol_scale = m.col(0).norm() * m.col(1).norm() * m.col(2).norm();
    if (std::abs(m.determinant()) <= kDegenerateTol * vol_scale) {
      throw Error(ErrorCode::DegeneratePlane, "tetrahedron is degenerate");
    }
    const Vec3 l = m.partialPivLu().solve(p - simplex[0]);
    return {1.0 - l.sum(), l[0], l[1], l[2]};
  }
  throw Error(ErrorCode::InvalidConfiguration,
              "barycentric coordinates need 3 or 4 points");
}

bool strictly_inside(const Point& p, std::span<const Point> simplex,
                     double margin) {
  const std::vector<double> l = barycentric(p, simplex);
  if (simplex.size() == 3) {
    const double off = height_to_plane(p, simplex[0], simplex[1], simplex[2]);
    if (off > kDegenerateTol * std::max(1.0, diameter(simplex))) return false;
  }
  return std::all_of(l.begin(), l.end(), [&](double x) { return x > margin; });
}

}  // namespace ftnet
