#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ftnet/geom.hpp"

// Angle algebra of a star of 4 or 5 rays meeting at A0.
//
// Rays carry labels 1..n (n = 4 or 5). A system is fixed by the angle between
// rays 1 and 2 together with the angles of every further ray to rays 1 and 2.
// The remaining mutual angles follow from a quadratic with two roots; the
// hemisphere of each ray i >= 3 relative to the plane of rays 1 and 2 picks
// the geometric one.

namespace ftnet {

/// Side (+1 / -1) of each ray i >= 3 relative to the oriented plane spanned by
/// rays 1 and 2, stored at index i - 3.
using HemisphereBits = std::vector<int>;

class AngleSystem {
 public:
  /// Five angles determining a star of four rays.
  static AngleSystem tetrahedral(double a102, double a103, double a104,
                                 double a203, double a204);
  /// Seven angles determining a star of five rays.
  static AngleSystem hexahedral(double a102, double a103, double a104,
                                double a105, double a203, double a204,
                                double a205);
  /// Measures the defining angles of the rays from `a0` towards 4 or 5
  /// vertices.
  static AngleSystem measure(const Point& a0, std::span<const Point> vertices);

  int ray_count() const noexcept { return 2 + static_cast<int>(to_first_.size()); }
  double base_angle() const noexcept { return base_; }
  double angle_to_first(int label) const;
  double angle_to_second(int label) const;

 private:
  AngleSystem(double base, std::vector<double> to_first,
              std::vector<double> to_second);

  double base_;
  std::vector<double> to_first_;
  std::vector<double> to_second_;
};

struct RaySystem {
  Point origin = Point::Zero();
  std::vector<UnitVector> directions;  // label i stored at index i - 1
  HemisphereBits bits;

  static RaySystem from_points(const Point& a0, std::span<const Point> vertices);

  int size() const noexcept { return static_cast<int>(directions.size()); }
  const UnitVector& ray(int label) const { return directions.at(label - 1); }
  AngleSystem angle_system() const;
};

/// The two solutions of the quadratic for the cosine of the angle between rays
/// i and j (i, j >= 3). `opposite` applies when the rays lie on opposite sides
/// of the base plane, `same` when they share a side.
struct RootPair {
  double opposite;
  double same;
};

/// Polar offset of each ray i >= 3 from the base plane, in [0, pi/2],
/// returned at index i - 3.
std::vector<double> polar_offsets(const AngleSystem& sys);

/// Candidate cosines for the pair (i, j) of a four- or five-ray system.
RootPair cos_alpha_candidates(const AngleSystem& sys, int i = 3, int j = 4);

/// Candidate cosines for the pairs (3,5) and (4,5) of a five-ray system.
RootPair cos_alpha_extended(const AngleSystem& sys, int i, int j);

/// Left minus right side of the squared quadratic in cos(angle(i, j)).
double quadratic_residual(const AngleSystem& sys, int i, int j, double cos_ij);

RaySystem reconstruct_rays(const AngleSystem& sys, const HemisphereBits& bits);

/// The candidate root that matches the reconstructed geometry.
double resolve_root(const AngleSystem& sys, int i, int j,
                    const HemisphereBits& bits);

/// Projected angle of ray i onto the plane of rays k and m, from the three
/// mutual angles (k,m), (m,i), (k,i). Result in [0, pi/2].
double projected_angle_from_angles(double angle_km, double angle_mi,
                                   double angle_ki);

/// Hemisphere bits of the vertices i >= 3 as seen from `a0`. A vertex lying in
/// the base plane is assigned +1.
HemisphereBits hemisphere_bits(const Point& a0, std::span<const Point> vertices);

/// All mutual cosines of a ray star, derived through the angle algebra.
class CosineTable {
 public:
  static CosineTable from_angles(const AngleSystem& sys, const HemisphereBits& bits);
  static CosineTable from_rays(const RaySystem& rays);

  int size() const noexcept { return static_cast<int>(cos_.rows()); }
  double cos(int i, int j) const { return cos_(i - 1, j - 1); }
  double angle(int i, int j) const;
  /// Projected angle of ray i onto the plane of rays k and m.
  double projected(int i, int k, int m) const;

 private:
  explicit CosineTable(Eigen::MatrixXd c) : cos_(std::move(c)) {}
  Eigen::MatrixXd cos_;
};

}  // namespace ftnet
