#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ftnet/angles.hpp"
#include "ftnet/forward.hpp"
#include "ftnet/geom.hpp"

// Inverse problems: weights that make a prescribed interior point the weighted
// Fermat-Torricelli point of a triangle or tetrahedron.
//
// Labels are 1-based throughout this header. In the mixed problem one vertex m
// (the outflow vertex) collects the flow of the others together with the
// residual mass B0 left at the knot:
//
//   sum_{i != m} B_i = B0 + B_m,        sum_i B_i = c.

namespace ftnet {

struct MixedWeightSet {
  std::vector<double> weights;  // label i at index i - 1
  double residual = 0.0;
  double total = 0.0;
  int outflow = 0;

  double weight(int label) const { return weights.at(label - 1); }
  /// sum_i B_i - c
  double budget_defect() const;
  /// sum_{i != m} B_i - (B0 + B_m)
  double balance_defect() const;
  /// Both defects within tol * max(1, |c|).
  bool conserved(double tol = 1e-10) const;
};

/// Throws BudgetInconsistent unless `set.conserved(tol)`.
void require_conserved(const MixedWeightSet& set, double tol = 1e-10);

/// True when the four directions of `rays` are not contained in a closed
/// half-space, i.e. the origin lies strictly inside the tetrahedron spanned by
/// any points on the rays.
bool rays_enclose_origin(const RaySystem& rays);

/// B_i / B_m in a floating four-ray star, sin a_{m,k0l} / sin a_{i,k0l} with
/// k, l the two remaining labels.
double star_weight_ratio(const CosineTable& table, int i, int m);

// ---- tetrahedron ---------------------------------------------------------

MixedWeightSet mixed_inverse_tetrahedron(const RaySystem& rays, double c,
                                         double residual, int outflow = 4);
/// Five defining angles plus the hemisphere bits of rays 3 and 4. An interior
/// point always has rays 3 and 4 on opposite sides of the plane of rays 1, 2.
MixedWeightSet mixed_inverse_tetrahedron(const AngleSystem& sys, double c,
                                         double residual,
                                         const HemisphereBits& bits = {1, -1},
                                         int outflow = 4);

/// The residual for which the mixed weights satisfy budget and balance at
/// once. Equals c (R - 1) / (R + 1) with R the sum of the three ratios.
double residual_for_unique_inverse_tetra(const RaySystem& rays, double c,
                                         int outflow = 4);
double residual_for_unique_inverse_tetra(const AngleSystem& sys, double c,
                                         const HemisphereBits& bits = {1, -1},
                                         int outflow = 4);

MixedWeightSet inverse_tetrahedron(const RaySystem& rays, double c, int outflow = 4);
MixedWeightSet inverse_tetrahedron(const AngleSystem& sys, double c,
                                   const HemisphereBits& bits = {1, -1},
                                   int outflow = 4);

/// Normalized inverse weights computed directly from the points:
/// B_i = c / (1 + sum_{l != i} sin a_{i,j0k} / sin a_{l,j0k}).
std::vector<double> classical_inverse_tetrahedron(const Point& a0,
                                                  std::span<const Point> vertices,
                                                  double c);

// ---- triangle ------------------------------------------------------------

struct TriangleAngles {
  double a102;
  double a103;
};

/// Unsigned angles A1A0A2 and A1A0A3.
TriangleAngles triangle_angles(const Point& a0, std::span<const Point> vertices);

/// Homogeneous weights (sin a203, sin a103, sin a102) with a203 the third
/// angle around A0. Throws NotInterior unless both angles lie in (0, pi) and
/// their sum in (pi, 2 pi).
std::array<double, 3> triangle_ratio_weights(double a102, double a103);

MixedWeightSet mixed_inverse_triangle(double a102, double a103, double c,
                                      double residual, int outflow = 3);
double residual_for_unique_inverse_triangle(double a102, double a103, double c,
                                            int outflow = 3);
MixedWeightSet inverse_triangle(double a102, double a103, double c, int outflow = 3);

/// B_i = c / (1 + sin a_{j0i} / sin a_{j0k} + sin a_{k0i} / sin a_{j0k}).
std::vector<double> classical_inverse_triangle(const Point& a0,
                                               std::span<const Point> vertices,
                                               double c);

/// True when the triangle with weights `set` is absorbed at `vertex` (0-based)
/// and stays absorbed there after raising that weight by `delta` >= 0.
bool check_absorbed_family(const BoundaryConfiguration& triangle,
                           std::size_t vertex, const MixedWeightSet& set,
                           double delta);

// ---- two-way flow --------------------------------------------------------

/// Split of each mixed weight into an inbound part B_i and a reverse part
/// ~B_i, with the residual B0_bar = B0 - ~B0.
struct FlowDecomposition {
  std::vector<double> inbound;  // B_i, label i at index i - 1
  std::vector<double> reverse;  // ~B_i
  double residual = 0.0;        // B0
  double reverse_residual = 0.0;
  int outflow = 0;
};

/// `reverse_inflow` holds ~B_i for every label except the outflow vertex, in
/// increasing label order. ~B_m follows from the reverse balance. The reverse
/// residual defaults to max(0, -B0_bar). Throws InfeasibleSplit when a part
/// comes out negative.
FlowDecomposition flow_decompose(const MixedWeightSet& set,
                                 std::span<const double> reverse_inflow,
                                 std::optional<double> reverse_residual = std::nullopt);

/// Fixes the reverse flow ~B_m at the outflow vertex and spreads
/// ~B_m - ~B0 over the inflow vertices in proportion to their weights.
FlowDecomposition flow_decompose_outflow(const MixedWeightSet& set,
                                         double reverse_outflow,
                                         std::optional<double> reverse_residual = std::nullopt);

// ---- distance derivatives ------------------------------------------------

/// d a04 / d a0j for j = 1, 2, 3 when A0 moves with A1..A4 fixed. Equals
/// -sin a_{4,k0l} / sin a_{j,k0l} whenever A4 and Aj are on opposite sides of
/// plane AkA0Al. Throws DegenerateProjection when a denominator vanishes.
std::array<double, 3> partial_distance_derivatives(const Point& a0,
                                                   std::span<const Point> vertices);

/// a04 as a function of (a01, a02, a03) for a fixed tetrahedron A1..A4. The
/// reference point picks the side of plane A1A2A3 on which A0 lives.
class DistanceElimination {
 public:
  DistanceElimination(const Point& reference, std::span<const Point> vertices);

  double operator()(double a01, double a02, double a03) const;

 private:
  double a12_, a23_, a24_;
  double cos123_, sin123_, cos124_, sin124_;
  double cos_g4_, sin_g4_;
};

}  // namespace ftnet
