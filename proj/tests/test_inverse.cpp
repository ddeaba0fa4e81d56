#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ftnet/errors.hpp"
#include "ftnet/inverse.hpp"
#include "ftnet/oracle.hpp"
#include "test_support.hpp"

using namespace ftnet;
using namespace ftnet::testing;
using doctest::Approx;

namespace {

const double kA = std::acos(-1.0 / 3.0);
const double k120 = 2 * std::numbers::pi / 3;

AngleSystem regular_system() { return AngleSystem::tetrahedral(kA, kA, kA, kA, kA); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ftnet::Error");
  return ErrorCode::Validation;
}

}  // namespace

TEST_CASE("mixed inverse of the regular simplex") {
  const MixedWeightSet s = mixed_inverse_tetrahedron(regular_system(), 1.0, 0.5);
  for (double w : s.weights) CHECK(w == Approx(0.25).epsilon(1e-12));
  CHECK(s.conserved());

  // Zero residual: B4 = c/2 and the ratios force every weight to 1/2, which
  // breaks both the budget and the balance.
  const MixedWeightSet z = mixed_inverse_tetrahedron(regular_system(), 1.0, 0.0);
  for (double w : z.weights) CHECK(w == Approx(0.5));
  CHECK(z.budget_defect() == Approx(1.0));
  CHECK(z.balance_defect() == Approx(1.0));
  CHECK_FALSE(z.conserved());
  CHECK(code_of([&] { require_conserved(z); }) == ErrorCode::BudgetInconsistent);

  CHECK(residual_for_unique_inverse_tetra(regular_system(), 1.0) == Approx(0.5).epsilon(1e-12));
  const MixedWeightSet u = inverse_tetrahedron(regular_system(), 4.0);
  for (double w : u.weights) CHECK(w == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("outflow vertex can be relabelled") {
  Rng rng(41);
  const Tetra t = random_tetra(rng);
  const RaySystem rays = RaySystem::from_points(t.a0, t.vertices);
  const MixedWeightSet a = inverse_tetrahedron(rays, 1.0, 4);
  for (int m = 1; m <= 3; ++m) {
    const MixedWeightSet b = inverse_tetrahedron(rays, 1.0, m);
    CHECK(b.outflow == m);
    for (int i = 0; i < 4; ++i) CHECK(b.weights[i] == Approx(a.weights[i]).epsilon(1e-10));
  }
}

TEST_CASE("unique residual reproduces the classical weights") {
  Rng rng(42);
  for (int n = 0; n < 200; ++n) {
    const Tetra t = random_tetra(rng);
    const RaySystem rays = RaySystem::from_points(t.a0, t.vertices);
    const MixedWeightSet s = inverse_tetrahedron(rays, 1.0);
    const std::vector<double> classical = classical_inverse_tetrahedron(t.a0, t.vertices, 1.0);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(s.weights[i] - classical[i]) <= 1e-10);
    CHECK(s.conserved());
    // Angle-only input gives the same weights.
    const MixedWeightSet a = inverse_tetrahedron(rays.angle_system(), 1.0, rays.bits);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a.weights[i] - s.weights[i]) <= 1e-9);
  }
}

TEST_CASE("mixed inverse round trip through the forward solver") {
  Rng rng(43);
  for (int n = 0; n < 100; ++n) {
    const Tetra t = random_tetra(rng);
    const RaySystem rays = RaySystem::from_points(t.a0, t.vertices);
    const MixedWeightSet s = mixed_inverse_tetrahedron(rays, 1.0, 0.1);
    const std::vector<Point> v(t.vertices.begin(), t.vertices.end());
    CHECK((solve(BoundaryConfiguration{v, s.weights}).point - t.a0).norm() <= 1e-7);
  }
}

TEST_CASE("points outside the tetrahedron are rejected") {
  const std::vector<Point> v{Point(1, 1, 1), Point(1, -1, -1), Point(-1, 1, -1), Point(-1, -1, 1)};
  const RaySystem rays = RaySystem::from_points(Point(3, 0, 0), v);
  CHECK_FALSE(rays_enclose_origin(rays));
  CHECK(code_of([&] { inverse_tetrahedron(rays, 1.0); }) == ErrorCode::NotInterior);
}

TEST_CASE("triangle mixed inverse") {
  const MixedWeightSet s = mixed_inverse_triangle(k120, k120, 1.0, 1.0 / 3);
  for (double w : s.weights) CHECK(w == Approx(1.0 / 3).epsilon(1e-12));
  CHECK(s.conserved());
  CHECK(residual_for_unique_inverse_triangle(k120, k120, 1.0) == Approx(1.0 / 3).epsilon(1e-12));

  // Zero residual gives (1/2, 1/2, 1/2), over budget and unbalanced.
  const MixedWeightSet z = mixed_inverse_triangle(k120, k120, 1.0, 0.0);
  for (double w : z.weights) CHECK(w == Approx(0.5));
  CHECK(z.budget_defect() == Approx(0.5));
  CHECK(z.balance_defect() == Approx(0.5));
  CHECK_FALSE(z.conserved());

  CHECK(code_of([] { triangle_ratio_weights(1.0, 1.0); }) == ErrorCode::NotInterior);
  CHECK(code_of([] { triangle_ratio_weights(0.0, 2.0); }) == ErrorCode::NotInterior);
}

TEST_CASE("triangle inverse agrees with the classical weights") {
  Rng rng(44);
  for (int n = 0; n < 200; ++n) {
    const Triangle t = random_triangle(rng);
    const TriangleAngles a = triangle_angles(t.a0, t.vertices);
    const MixedWeightSet s = inverse_triangle(a.a102, a.a103, 1.0);
    const std::vector<double> classical = classical_inverse_triangle(t.a0, t.vertices, 1.0);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(s.weights[i] - classical[i]) <= 1e-10);
    const std::vector<Point> v(t.vertices.begin(), t.vertices.end());
    CHECK((solve(BoundaryConfiguration{v, s.weights}).point - t.a0).norm() <= 1e-8);
  }
}

TEST_CASE("absorbed family") {
  const BoundaryConfiguration tri{{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)}, {1, 1, 5}};
  MixedWeightSet set;
  set.weights = {1, 1, 5};
  set.total = 7;
  set.outflow = 3;
  CHECK(check_absorbed_family(tri, 2, set, 1.0));

  set.weights = {1, 1, 1};
  set.total = 3;
  const double s = std::sqrt(3.0) / 2;
  const BoundaryConfiguration eq{{Point(1, 0, 0), Point(-0.5, s, 0), Point(-0.5, -s, 0)}, {1, 1, 1}};
  CHECK_FALSE(check_absorbed_family(eq, 2, set, 0.0));

  // Two unit vectors at 120 degrees sum to norm exactly 1.
  set.weights = {1, 1, 1};
  const BoundaryConfiguration edge{{Point(1, 0, 0), Point(-0.5, s, 0), Point(0, 0, 0)}, {1, 1, 1}};
  CHECK(check_absorbed_family(edge, 2, set, 0.0));
}

TEST_CASE("flow decomposition") {
  const MixedWeightSet sym = mixed_inverse_tetrahedron(regular_system(), 1.0, 0.5);

  const std::vector<double> none{0, 0, 0};
  const FlowDecomposition one_way = flow_decompose(sym, none, 0.0);
  for (int i = 0; i < 4; ++i) CHECK(one_way.inbound[i] == Approx(sym.weights[i]));
  CHECK(one_way.residual == Approx(0.5));

  for (double split : {0.0, 0.1, 0.25}) {
    const FlowDecomposition f = flow_decompose_outflow(sym, split, 0.0);
    CHECK(f.inbound[3] == Approx(0.25 - split));
    CHECK(f.reverse[3] == Approx(split));
    double rev = 0.0;
    for (int i = 0; i < 3; ++i) rev += f.reverse[i];
    CHECK(rev == Approx(split));
  }
  CHECK(code_of([&] { flow_decompose_outflow(sym, 0.3, 0.0); }) == ErrorCode::InfeasibleSplit);
  const std::vector<double> big{0.3, 0, 0};
  CHECK(code_of([&] { flow_decompose(sym, big); }) == ErrorCode::InfeasibleSplit);

  // A negative mixed residual defaults to a reverse residual that clears it.
  MixedWeightSet neg;
  neg.weights = {0.1, 0.1, 0.1, 0.5};
  neg.residual = -0.2;
  neg.total = 0.8;
  neg.outflow = 4;
  const FlowDecomposition n = flow_decompose(neg, std::vector<double>{0.1, 0.1, 0.1});
  CHECK(n.reverse_residual == Approx(0.2));
  CHECK(n.residual == Approx(0.0));
  const MixedWeightSet off = mixed_inverse_tetrahedron(regular_system(), 1.0, 0.0);
  CHECK(code_of([&] { flow_decompose(off, none); }) == ErrorCode::BudgetInconsistent);
}

TEST_CASE("partial distance derivatives") {
  const std::vector<Point> v{Point(1, 1, 1), Point(1, -1, -1), Point(-1, 1, -1), Point(-1, -1, 1)};
  for (double d : partial_distance_derivatives(Point::Zero(), v)) CHECK(d == Approx(-1.0).epsilon(1e-12));

  // A4 in the plane of A0, A2, A3 makes the first derivative vanish.
  const std::vector<Point> w{Point(0, 0, 2), Point(1, 0, -1), Point(-1, 1, -1), Point(0.2, -1.3, -1)};
  const Point a0(0.05, -0.1, 0);
  std::vector<Point> flat = w;
  const Vec3 n = (w[1] - a0).cross(w[2] - a0).normalized();
  flat[3] = w[3] - n.dot(w[3] - a0) * n;
  CHECK(partial_distance_derivatives(a0, flat)[0] == Approx(0.0).epsilon(1e-12));

  Rng rng(45);
  for (int k = 0; k < 50; ++k) {
    const Tetra t = random_elimination_tetra(rng);
    const std::array<double, 3> closed = partial_distance_derivatives(t.a0, t.vertices);
    const DistanceElimination a04(t.a0, t.vertices);
    const std::vector<double> x{(t.a0 - t.vertices[0]).norm(), (t.a0 - t.vertices[1]).norm(),
                                (t.a0 - t.vertices[2]).norm()};
    CHECK(a04(x[0], x[1], x[2]) == Approx((t.a0 - t.vertices[3]).norm()).epsilon(1e-10));
    const std::vector<double> fd = finite_diff([&](std::span<const double> d) { return a04(d[0], d[1], d[2]); }, x);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(closed[j] - fd[j]) <= 1e-6);
  }
}
