#include <cmath>

#include "doctest.h"
#include "ftnet/errors.hpp"
#include "ftnet/plasticity.hpp"
#include "test_support.hpp"

using namespace ftnet;
using namespace ftnet::testing;
using doctest::Approx;

namespace {

const std::array<Point, 4> kSimplex{Point(1, 1, 1), Point(1, -1, -1), Point(-1, 1, -1), Point(-1, -1, 1)};

HexahedronGeometry simplex_hexa() {
  return {Point::Zero(), {kSimplex[0], kSimplex[1], kSimplex[2], kSimplex[3], Point(0.3, -0.2, -1.5)}};
}

QuadrilateralGeometry square() {
  return {Point::Zero(), {Point(1, 0, 0), Point(0, 1, 0), Point(-1, 0, 0), Point(0, -1, 0)}};
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ftnet::Error");
  return ErrorCode::Validation;
}

std::vector<Point> as_vector(const auto& a) { return {a.begin(), a.end()}; }

}  // namespace

TEST_CASE("hexahedron with B5 = 0 reduces to the tetrahedron inverse") {
  const HexahedronGeometry g = simplex_hexa();
  const PlasticityState s = hexahedron_plasticity(g, 1.0, 0.0);
  const MixedWeightSet tet = inverse_tetrahedron(RaySystem::from_points(g.a0, kSimplex), 1.0);
  for (int i = 0; i < 4; ++i) CHECK(s.global.weights[i] == Approx(tet.weights[i]).epsilon(1e-12));
  CHECK(s.global.weights[4] == 0.0);
  CHECK(s.global.residual == Approx(0.5).epsilon(1e-12));
  CHECK(s.global.conserved());
  CHECK(feasible_b5_interval(g, 1.0).lo == 0.0);
}

TEST_CASE("hexahedron sweep keeps the FT point") {
  Rng rng(51);
  for (int n = 0; n < 10; ++n) {
    const HexahedronGeometry g = random_hexahedron(rng);
    const WeightInterval w = feasible_b5_interval(g, 1.0);
    REQUIRE_FALSE(w.empty());
    const PlasticityState a = hexahedron_plasticity(g, 1.0, w.lo + 0.25 * (w.hi - w.lo));
    const PlasticityState b = hexahedron_plasticity(g, 1.0, w.lo + 0.75 * (w.hi - w.lo));
    const PlasticityState m = hexahedron_plasticity(g, 1.0, w.midpoint());
    for (const PlasticityState* s : {&a, &b, &m}) {
      CHECK(s->global.conserved());
      CHECK(s->global.residual == Approx(1.0 - 2 * s->global.weight(4)));
      CHECK((solve(BoundaryConfiguration{as_vector(g.vertices), s->global.weights}).point - g.a0).norm() <= 1e-6);
    }
    for (int i = 0; i < 5; ++i) {
      // Every weight is affine in B5 and actually moves.
      CHECK(m.global.weights[i] == Approx(0.5 * (a.global.weights[i] + b.global.weights[i])).epsilon(1e-10));
      CHECK(a.global.weights[i] != b.global.weights[i]);
    }
  }
}

TEST_CASE("hexahedron interval endpoints zero out a weight") {
  Rng rng(52);
  for (int n = 0; n < 20; ++n) {
    const HexahedronGeometry g = random_hexahedron(rng);
    const WeightInterval w = feasible_b5_interval(g, 1.0);
    if (w.hi < 1.0) {
      const PlasticityState s = hexahedron_plasticity(g, 1.0, w.hi * (1 - 1e-12));
      double lowest = 1.0;
      for (int i = 0; i < 4; ++i) lowest = std::min(lowest, s.global.weights[i]);
      CHECK(lowest <= 1e-8);
    }
    if (w.lo > 0.0) {
      const PlasticityState s = hexahedron_plasticity(g, 1.0, w.lo * (1 + 1e-12));
      double lowest = 1.0;
      for (int i = 0; i < 4; ++i) lowest = std::min(lowest, s.global.weights[i]);
      CHECK(lowest <= 1e-8);
    }
    CHECK(code_of([&] { hexahedron_plasticity(g, 1.0, w.hi + 0.1 * (1.0 - w.lo) + 1e-3); }) ==
          ErrorCode::NonpositiveWeight);
  }
}

TEST_CASE("hexahedron sub-tetrahedra") {
  Rng rng(53);
  const std::array<std::array<int, 4>, 3> subsets{{{1, 2, 3, 4}, {0, 2, 3, 4}, {0, 1, 3, 4}}};
  for (int n = 0; n < 20; ++n) {
    const HexahedronGeometry g = random_hexahedron(rng);
    const PlasticityState s = hexahedron_plasticity(g, 1.0, feasible_b5_interval(g, 1.0).midpoint());
    for (int j = 0; j < 3; ++j) {
      std::vector<Point> tet;
      for (int k : subsets[j]) tet.push_back(g.vertices[k]);
      const bool inside = strictly_inside(g.a0, tet);
      CHECK(s.sub_tetra[j].has_value() == inside);
      if (inside) CHECK(s.sub_ratio[j] > 0);
      if (s.sub_tetra[j]) {
        CHECK(s.sub_tetra[j]->residual == Approx(s.split[j] * s.global.residual));
        CHECK(s.sub_tetra[j]->weight(3) / s.sub_tetra[j]->weight(4) == Approx(s.sub_ratio[j]));
        CHECK(s.sub_tetra[j]->weight(3) == Approx(0.5 * (1.0 - s.sub_tetra[j]->residual)));
      }
    }
    // Rays of the two labels spanning plane j lie in it.
    for (int j = 1; j <= 3; ++j) {
      for (int k = 1; k <= 3; ++k) {
        if (k != j) CHECK(s.signs.at(k, j) == 0);
      }
    }
  }
}

TEST_CASE("hexahedron errors") {
  const HexahedronGeometry g = simplex_hexa();
  CHECK(code_of([&] { hexahedron_plasticity(g, 0.0, 0.0); }) == ErrorCode::InvalidMassBudget);
  CHECK(code_of([&] { hexahedron_plasticity(g, 1.0, -0.1); }) == ErrorCode::NonpositiveWeight);
  HexahedronGeometry out = g;
  out.a0 = Point(5, 0, 0);
  CHECK(code_of([&] { hexahedron_plasticity(out, 1.0, 0.0); }) == ErrorCode::NotInterior);
  // A3 coplanar with A0, A1, A2.
  HexahedronGeometry flat = g;
  flat.vertices[2] = -(kSimplex[0] + kSimplex[1]);
  CHECK(code_of([&] { hexahedron_plasticity(flat, 1.0, 0.0); }) == ErrorCode::SignDegenerate);
}

TEST_CASE("square quadrilateral") {
  const MixedWeightSet s = quadrilateral_plasticity(square(), 1.0, 0.25);
  for (double w : s.weights) CHECK(w == Approx(0.25).epsilon(1e-12));
  CHECK(s.residual == Approx(0.5).epsilon(1e-12));
  CHECK(s.conserved());

  const WeightInterval w = feasible_b4_interval(square(), 1.0);
  CHECK(w.lo == Approx(0.0));
  CHECK(w.hi == Approx(0.5));
  for (int k = 1; k <= 21; ++k) {
    const double b4 = w.lo + k * (w.hi - w.lo) / 22;
    const MixedWeightSet q = quadrilateral_plasticity(square(), 1.0, b4);
    CHECK(solve(BoundaryConfiguration{as_vector(square().vertices), q.weights}).point.norm() <= 1e-8);
  }
}

TEST_CASE("quadrilateral weights solve the planar equilibrium") {
  Rng rng(54);
  for (int n = 0; n < 50; ++n) {
    const QuadrilateralGeometry g = random_quadrilateral(rng);
    const WeightInterval w = feasible_b4_interval(g, 1.0);
    const double b4 = w.lo + 0.3 * (w.hi - w.lo);
    const MixedWeightSet s = quadrilateral_plasticity(g, 1.0, b4);
    Eigen::Matrix3d m;
    Eigen::Vector3d rhs;
    const Vec3 u4 = (g.vertices[3] - g.a0).normalized();
    for (int i = 0; i < 3; ++i) {
      const Vec3 u = (g.vertices[i] - g.a0).normalized();
      m(0, i) = u.x();
      m(1, i) = u.y();
      m(2, i) = 1.0;
    }
    rhs << -b4 * u4.x(), -b4 * u4.y(), 1.0 - b4;
    const Eigen::Vector3d direct = m.fullPivLu().solve(rhs);
    for (int i = 0; i < 3; ++i) CHECK(s.weights[i] == Approx(direct[i]).epsilon(1e-10));
    CHECK(s.weights[3] == b4);
  }
}

TEST_CASE("quadrilateral errors") {
  QuadrilateralGeometry g = square();
  g.vertices[2].z() = 0.1;
  CHECK(code_of([&] { quadrilateral_plasticity(g, 1.0, 0.25); }) == ErrorCode::NotCoplanar);
  g = square();
  g.a0 = Point(2, 0, 0);
  CHECK(code_of([&] { quadrilateral_plasticity(g, 1.0, 0.25); }) == ErrorCode::NotInterior);
  g = square();
  g.vertices[1] = Point(0, -0.2, 0);
  g.a0 = Point(0, -0.5, 0);
  CHECK(code_of([&] { quadrilateral_plasticity(g, 1.0, 0.25); }) == ErrorCode::NotInterior);
  CHECK(code_of([&] { quadrilateral_plasticity(square(), 1.0, 0.6); }) == ErrorCode::NonpositiveWeight);
}

TEST_CASE("geometric plasticity transport") {
  const BoundaryConfiguration base{as_vector(kSimplex), {1, 1.5, 2, 1.2}};
  const Point a0 = solve(base).point;
  const std::vector<double> ones(4, 1.0), twos(4, 2.0);
  const BoundaryConfiguration same = geometric_plasticity_transport(base, ones);
  for (int i = 0; i < 4; ++i) CHECK((same.vertices[i] - base.vertices[i]).norm() < 1e-15);
  const BoundaryConfiguration grown = geometric_plasticity_transport(base, twos);
  CHECK((solve(grown).point - a0).norm() <= 1e-7);

  Rng rng(55);
  int done = 0;
  while (done < 50) {
    const BoundaryConfiguration c = random_config(rng, 5);
    if (!classify(c).floating()) continue;
    ++done;
    std::vector<double> scales;
    for (int i = 0; i < 5; ++i) scales.push_back(uniform(rng, 0.5, 2.0));
    CHECK((solve(geometric_plasticity_transport(c, scales)).point - solve(c).point).norm() <= 1e-7);
  }

  const BoundaryConfiguration absorbed{{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)}, {1, 1, 5}};
  CHECK(code_of([&] { geometric_plasticity_transport(absorbed, std::vector<double>{1, 1, 1}); }) ==
        ErrorCode::FloatingViolated);
  CHECK(code_of([&] { geometric_plasticity_transport(base, std::vector<double>{1, 1, 0, 1}); }) ==
        ErrorCode::Validation);
}
