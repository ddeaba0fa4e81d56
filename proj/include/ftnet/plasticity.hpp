#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ftnet/forward.hpp"
#include "ftnet/geom.hpp"
#include "ftnet/inverse.hpp"

// Plasticity: families of weights (or vertex positions) that share one
// weighted Fermat-Torricelli point.

namespace ftnet {

/// Five boundary vertices around an interior point A0.
struct HexahedronGeometry {
  Point a0;
  std::array<Point, 5> vertices;
};

/// Four coplanar vertices in cyclic order around an interior point A0.
struct QuadrilateralGeometry {
  Point a0;
  std::array<Point, 4> vertices;
};

/// Side (+1, -1 or 0) of each vertex relative to the planes through A0 used by
/// the hexahedron equations: plane j (j = 1, 2, 3) contains the rays towards
/// the two labels of {1, 2, 3} other than j.
class SignConfiguration {
 public:
  static SignConfiguration measure(const HexahedronGeometry& geometry, double tol = 1e-12);

  /// sgn of vertex `label` relative to plane `plane`.
  int at(int label, int plane) const { return table_.at(plane - 1).at(label - 1); }

 private:
  std::array<std::array<int, 5>, 3> table_{};
};

struct WeightInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const noexcept { return !(lo < hi); }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

struct PlasticityState {
  /// Weights of all five vertices; outflow vertex 4, residual c - 2 B4.
  MixedWeightSet global;
  /// Fractions of the residual assigned to the sub-tetrahedra
  /// A2A3A4A5, A1A3A4A5, A1A2A4A5.
  std::array<double, 3> split{};
  /// Ratio B4 / B5 for each sub-tetrahedron. Positive whenever A0 is inside
  /// it (A4 and A5 then lie on opposite sides of plane j); NaN when A4 lies
  /// in plane j.
  std::array<double, 3> sub_ratio{};
  /// Mixed weights of each sub-tetrahedron (vertex order as named above,
  /// outflow at A4) carrying its share of the residual. These conserve mass
  /// only when that share is the unique residual of the sub-tetrahedron.
  /// Empty when A0 is not inside that sub-tetrahedron.
  std::array<std::optional<MixedWeightSet>, 3> sub_tetra;
  SignConfiguration signs;
};

/// Weights of a floating hexahedron as functions of the free weight B5. The
/// remaining weights follow from the equilibrium at A0 and the mass budget c;
/// the residual is c - 2 B4. Throws NotInterior, SignDegenerate,
/// NonpositiveWeight.
PlasticityState hexahedron_plasticity(const HexahedronGeometry& geometry, double c,
                                      double b5,
                                      std::array<double, 3> split = {1.0 / 3, 1.0 / 3, 1.0 / 3});

/// Open interval of B5 keeping B1..B4 positive, intersected with B5 >= 0.
WeightInterval feasible_b5_interval(const HexahedronGeometry& geometry, double c);

/// Weights of a floating convex quadrilateral with B4 free. Outflow vertex 4,
/// residual c - 2 B4. Throws NotCoplanar, NotInterior, NonpositiveWeight.
MixedWeightSet quadrilateral_plasticity(const QuadrilateralGeometry& geometry, double c,
                                        double b4);

/// Open interval of B4 > 0 keeping B1..B3 positive.
WeightInterval feasible_b4_interval(const QuadrilateralGeometry& geometry, double c);

/// Slides every vertex along its ray from the FT point: A_i' = A0 + s_i (A_i - A0).
/// Throws FloatingViolated naming the first vertex that becomes absorbing.
BoundaryConfiguration geometric_plasticity_transport(const BoundaryConfiguration& config,
                                                     std::span<const double> scales,
                                                     const SolveOptions& options = {});

/// Same, with the FT point already known.
BoundaryConfiguration geometric_plasticity_transport(const BoundaryConfiguration& config,
                                                     const Point& a0,
                                                     std::span<const double> scales,
                                                     double tol = 1e-10);

}  // namespace ftnet
