#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ftnet {

using Vec3 = Eigen::Vector3d;
// Planar inputs are embedded with z = 0 and go through the same code paths.
using Point = Eigen::Vector3d;

// Relative tolerance used by all collinearity / coplanarity predicates.
inline constexpr double kDegenerateTol = 1e-9;
// Two points closer than this (relative to their magnitude) coincide.
inline constexpr double kCoincidenceTol = 1e-12;

/// Direction with Euclidean norm 1 (to within 1e-12).
class UnitVector {
 public:
  /// Throws DegenerateSegment when `v` is numerically zero.
  static UnitVector normalize(const Vec3& v);

  const Vec3& vec() const noexcept { return v_; }
  double dot(const UnitVector& other) const noexcept { return v_.dot(other.v_); }
  double operator[](int i) const noexcept { return v_[i]; }
  UnitVector operator-() const noexcept { return UnitVector(-v_); }

 private:
  explicit UnitVector(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

/// Plane through A0 spanned by the rays towards A_j and A_k, with the
/// oriented normal N = normalize(u(A0,A_j) x u(A0,A_k)).
struct PlaneFrame {
  Point origin;
  int j = 0;
  int k = 0;
  UnitVector normal;
};

struct SegmentHeight {
  double length;
  Point foot;
};

UnitVector unit_vector(const Point& p, const Point& q);

/// Angle A_i A0 A_j in [0, pi].
double angle_at(const Point& a0, const Point& ai, const Point& aj);

/// Throws DegeneratePlane if A_j, A0, A_k are collinear. `j`, `k` are labels
/// carried along for bookkeeping only.
PlaneFrame make_plane_frame(const Point& a0, const Point& aj, const Point& ak,
                            int j = 0, int k = 0);

/// Angle in [0, pi/2] between A0A_i and its orthogonal projection onto the
/// plane A_j A0 A_k.
double projected_angle(const Point& a0, const Point& ai, const Point& aj,
                       const Point& ak);

/// For each point in `others`, the dihedral angle in [0, pi] along the edge
/// A1A2 between the half-plane containing that point and the half-plane
/// containing `apex`.
std::vector<double> dihedral_angles(const Point& a1, const Point& a2,
                                    const Point& apex,
                                    std::span<const Point> others);

/// Distance from A0 to the line A_iA_j and the foot of the perpendicular.
SegmentHeight height_to_segment(const Point& a0, const Point& ai,
                                const Point& aj);

/// Unsigned distance from A0 to the plane A_iA_jA_k.
double height_to_plane(const Point& a0, const Point& ai, const Point& aj,
                       const Point& ak);

/// Side of A_i relative to the frame plane: +1 along the normal, -1 against,
/// 0 when |(A_i - A0).N| <= tol * |A_i - A0|.
int plane_side_sign(const Point& ai, const PlaneFrame& frame,
                    double tol = kDegenerateTol);

/// Largest pairwise distance.
double diameter(std::span<const Point> points);

/// Barycentric coordinates of `p` with respect to a triangle (3 points, `p`
/// projected onto its plane) or a tetrahedron (4 points). Throws
/// DegeneratePlane for a degenerate simplex.
std::vector<double> barycentric(const Point& p, std::span<const Point> simplex);

/// True when `p` lies strictly inside the triangle / tetrahedron: every
/// barycentric coordinate exceeds `margin`, and for a triangle `p` lies in
/// its plane.
bool strictly_inside(const Point& p, std::span<const Point> simplex,
                     double margin = kDegenerateTol);

}  // namespace ftnet
