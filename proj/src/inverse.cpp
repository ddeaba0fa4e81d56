#include "ftnet/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ftnet/errors.hpp"

namespace ftnet {

namespace {

constexpr double kSinFloor = 1e-12;

void check_outflow(int outflow, int n) {
  if (outflow < 1 || outflow > n) {
    throw Error(ErrorCode::Validation,
                "outflow label must be in 1.." + std::to_string(n));
  }
}

// The two labels of {1, 2, 3, 4} other than i and m.
std::array<int, 2> remaining_pair(int i, int m) {
  std::array<int, 2> out{};
  int n = 0;
  for (int k = 1; k <= 4; ++k) {
    if (k != i && k != m) out[n++] = k;
  }
  return out;
}

// ratios[i - 1] = B_i / B_m, with ratios[m - 1] = 1.
MixedWeightSet assemble(const std::vector<double>& ratios, double c,
                        double residual, int outflow) {
  if (!std::isfinite(c) || !std::isfinite(residual)) {
    throw Error(ErrorCode::Validation, "mass budget and residual must be finite");
  }
  if (!(c > residual)) {
    throw Error(ErrorCode::InvalidMassBudget, "total mass must exceed the residual");
  }
  const double bm = 0.5 * (c - residual);
  MixedWeightSet set;
  set.residual = residual;
  set.total = c;
  set.outflow = outflow;
  set.weights.reserve(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double w = ratios[i] * bm;
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::NonpositiveWeight,
                  "weight " + std::to_string(i + 1) + " is not positive");
    }
    set.weights.push_back(w);
  }
  return set;
}

double unique_residual(const std::vector<double>& ratios, double c, int outflow) {
  double r = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (static_cast<int>(i) + 1 != outflow) r += ratios[i];
  }
  return c * (r - 1.0) / (r + 1.0);
}

std::vector<double> star_ratios(const CosineTable& table, int outflow) {
  check_outflow(outflow, 4);
  std::vector<double> ratios(4, 1.0);
  for (int i = 1; i <= 4; ++i) {
    if (i != outflow) ratios[i - 1] = star_weight_ratio(table, i, outflow);
  }
  return ratios;
}

std::vector<double> tetra_ratios(const RaySystem& rays, int outflow) {
  if (rays.size() != 4) {
    throw Error(ErrorCode::Validation, "a tetrahedron needs exactly four rays");
  }
  if (!rays_enclose_origin(rays)) {
    throw Error(ErrorCode::NotInterior, "the rays do not enclose their origin");
  }
  return star_ratios(CosineTable::from_rays(rays), outflow);
}

std::vector<double> tetra_ratios(const AngleSystem& sys, const HemisphereBits& bits,
                                 int outflow) {
  if (sys.ray_count() != 4) {
    throw Error(ErrorCode::Validation, "a tetrahedron needs a four-ray angle system");
  }
  if (!rays_enclose_origin(reconstruct_rays(sys, bits))) {
    throw Error(ErrorCode::NotInterior, "the angle system does not enclose its origin");
  }
  return star_ratios(CosineTable::from_angles(sys, bits), outflow);
}

std::vector<double> triangle_ratios(double a102, double a103, int outflow) {
  check_outflow(outflow, 3);
  const std::array<double, 3> w = triangle_ratio_weights(a102, a103);
  std::vector<double> ratios(3);
  for (int i = 0; i < 3; ++i) ratios[i] = w[i] / w[outflow - 1];
  return ratios;
}

void require_vertex_count(std::span<const Point> vertices, std::size_t n) {
  if (vertices.size() != n) {
    throw Error(ErrorCode::Validation,
                "expected " + std::to_string(n) + " vertices, got " +
                    std::to_string(vertices.size()));
  }
}

}  // namespace

double MixedWeightSet::budget_defect() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0) - total;
}

double MixedWeightSet::balance_defect() const {
  double inflow = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (static_cast<int>(i) + 1 != outflow) inflow += weights[i];
  }
  return inflow - (residual + weight(outflow));
}

bool MixedWeightSet::conserved(double tol) const {
  const double scale = tol * std::max(1.0, std::abs(total));
  return std::abs(budget_defect()) <= scale && std::abs(balance_defect()) <= scale;
}

void require_conserved(const MixedWeightSet& set, double tol) {
  if (!set.conserved(tol)) {
    throw Error(ErrorCode::BudgetInconsistent,
                "weights violate the mass budget or the flow balance (budget defect " +
                    std::to_string(set.budget_defect()) + ", balance defect " +
                    std::to_string(set.balance_defect()) + ")");
  }
}

bool rays_enclose_origin(const RaySystem& rays) {
  if (rays.size() != 4) return false;
  Eigen::Matrix3d m;
  for (int k = 0; k < 3; ++k) m.col(k) = rays.ray(k + 1).vec();
  if (std::abs(m.determinant()) <= kSinFloor) return false;
  const Vec3 y = m.partialPivLu().solve(-rays.ray(4).vec());
  return (y.array() > kSinFloor).all();
}

double star_weight_ratio(const CosineTable& table, int i, int m) {
  if (table.size() != 4 || i == m || i < 1 || i > 4 || m < 1 || m > 4) {
    throw Error(ErrorCode::Validation, "ratio labels must be two distinct labels of a four-ray star");
  }
  const auto [k, l] = remaining_pair(i, m);
  const double sm = std::sin(table.projected(m, k, l));
  const double si = std::sin(table.projected(i, k, l));
  if (si <= kSinFloor) {
    throw Error(ErrorCode::DegenerateProjection,
                "ray " + std::to_string(i) + " lies in the plane of rays " +
                    std::to_string(k) + " and " + std::to_string(l));
  }
  return sm / si;
}

MixedWeightSet mixed_inverse_tetrahedron(const RaySystem& rays, double c,
                                         double residual, int outflow) {
  return assemble(tetra_ratios(rays, outflow), c, residual, outflow);
}

MixedWeightSet mixed_inverse_tetrahedron(const AngleSystem& sys, double c,
                                         double residual, const HemisphereBits& bits,
                                         int outflow) {
  return assemble(tetra_ratios(sys, bits, outflow), c, residual, outflow);
}

double residual_for_unique_inverse_tetra(const RaySystem& rays, double c, int outflow) {
  return unique_residual(tetra_ratios(rays, outflow), c, outflow);
}

double residual_for_unique_inverse_tetra(const AngleSystem& sys, double c,
                                         const HemisphereBits& bits, int outflow) {
  return unique_residual(tetra_ratios(sys, bits, outflow), c, outflow);
}

MixedWeightSet inverse_tetrahedron(const RaySystem& rays, double c, int outflow) {
  const std::vector<double> ratios = tetra_ratios(rays, outflow);
  return assemble(ratios, c, unique_residual(ratios, c, outflow), outflow);
}

MixedWeightSet inverse_tetrahedron(const AngleSystem& sys, double c,
                                   const HemisphereBits& bits, int outflow) {
  const std::vector<double> ratios = tetra_ratios(sys, bits, outflow);
  return assemble(ratios, c, unique_residual(ratios, c, outflow), outflow);
}

std::vector<double> classical_inverse_tetrahedron(const Point& a0,
                                                  std::span<const Point> vertices,
                                                  double c) {
  require_vertex_count(vertices, 4);
  if (!strictly_inside(a0, vertices, 0.0)) {
    throw Error(ErrorCode::NotInterior, "point is not inside the tetrahedron");
  }
  std::vector<double> out(4);
  for (int i = 1; i <= 4; ++i) {
    double denom = 1.0;
    for (int l = 1; l <= 4; ++l) {
      if (l == i) continue;
      const auto [j, k] = remaining_pair(i, l);
      const Point& aj = vertices[j - 1];
      const Point& ak = vertices[k - 1];
      denom += std::sin(projected_angle(a0, vertices[i - 1], aj, ak)) /
               std::sin(projected_angle(a0, vertices[l - 1], aj, ak));
    }
    out[i - 1] = c / denom;
  }
  return out;
}

TriangleAngles triangle_angles(const Point& a0, std::span<const Point> vertices) {
  require_vertex_count(vertices, 3);
  return {angle_at(a0, vertices[0], vertices[1]), angle_at(a0, vertices[0], vertices[2])};
}

std::array<double, 3> triangle_ratio_weights(double a102, double a103) {
  constexpr double pi = std::numbers::pi;
  const double sum = a102 + a103;
  if (!(a102 > 0.0 && a102 < pi && a103 > 0.0 && a103 < pi && sum > pi && sum < 2.0 * pi)) {
    throw Error(ErrorCode::NotInterior,
                "angles at an interior point need a102, a103 in (0, pi) and a102 + a103 in (pi, 2 pi)");
  }
  return {-std::sin(sum), std::sin(a103), std::sin(a102)};
}

MixedWeightSet mixed_inverse_triangle(double a102, double a103, double c,
                                      double residual, int outflow) {
  return assemble(triangle_ratios(a102, a103, outflow), c, residual, outflow);
}

double residual_for_unique_inverse_triangle(double a102, double a103, double c,
                                            int outflow) {
  return unique_residual(triangle_ratios(a102, a103, outflow), c, outflow);
}

MixedWeightSet inverse_triangle(double a102, double a103, double c, int outflow) {
  const std::vector<double> ratios = triangle_ratios(a102, a103, outflow);
  return assemble(ratios, c, unique_residual(ratios, c, outflow), outflow);
}

std::vector<double> classical_inverse_triangle(const Point& a0,
                                               std::span<const Point> vertices,
                                               double c) {
  require_vertex_count(vertices, 3);
  if (!strictly_inside(a0, vertices, 0.0)) {
    throw Error(ErrorCode::NotInterior, "point is not inside the triangle");
  }
  std::vector<double> out(3);
  for (int i = 0; i < 3; ++i) {
    const Point& ai = vertices[i];
    const Point& aj = vertices[(i + 1) % 3];
    const Point& ak = vertices[(i + 2) % 3];
    const double sjk = std::sin(angle_at(a0, aj, ak));
    out[i] = c / (1.0 + std::sin(angle_at(a0, aj, ai)) / sjk +
                  std::sin(angle_at(a0, ak, ai)) / sjk);
  }
  return out;
}

bool check_absorbed_family(const BoundaryConfiguration& triangle, std::size_t vertex,
                           const MixedWeightSet& set, double delta) {
  if (triangle.size() != 3 || set.weights.size() != 3 || vertex >= 3) return false;
  if (!(delta >= 0.0) || !std::isfinite(delta)) return false;
  BoundaryConfiguration config{triangle.vertices, set.weights};
  try {
    if (classify(config).absorbed_vertex != vertex) return false;
    config.weights[vertex] += delta;
    return classify(config).absorbed_vertex == vertex;
  } catch (const Error&) {
    return false;
  }
}

FlowDecomposition flow_decompose(const MixedWeightSet& set,
                                 std::span<const double> reverse_inflow,
                                 std::optional<double> reverse_residual) {
  const std::size_t n = set.weights.size();
  check_outflow(set.outflow, static_cast<int>(n));
  if (reverse_inflow.size() + 1 != n) {
    throw Error(ErrorCode::Validation,
                "expected " + std::to_string(n - 1) + " reverse inflows");
  }
  const double tol = 1e-10 * std::max(1.0, std::abs(set.total));
  if (std::abs(set.balance_defect()) > tol) {
    throw Error(ErrorCode::BudgetInconsistent, "weights violate the flow balance");
  }
  const double r0 = reverse_residual.value_or(std::max(0.0, -set.residual));
  if (!(r0 >= 0.0) || !std::isfinite(r0)) {
    throw Error(ErrorCode::InfeasibleSplit, "reverse residual must be nonnegative");
  }

  FlowDecomposition out;
  out.outflow = set.outflow;
  out.reverse.assign(n, 0.0);
  out.inbound.assign(n, 0.0);
  out.reverse_residual = r0;
  double reverse_total = r0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(i) + 1 == set.outflow) continue;
    const double r = reverse_inflow[next++];
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::InfeasibleSplit,
                  "reverse flow at vertex " + std::to_string(i + 1) + " must be nonnegative");
    }
    out.reverse[i] = r;
    reverse_total += r;
  }
  out.reverse[set.outflow - 1] = reverse_total;
  for (std::size_t i = 0; i < n; ++i) {
    out.inbound[i] = set.weights[i] - out.reverse[i];
    if (out.inbound[i] < -tol) {
      throw Error(ErrorCode::InfeasibleSplit,
                  "reverse flow exceeds the weight at vertex " + std::to_string(i + 1));
    }
  }
  out.residual = set.residual + r0;
  if (out.residual < -tol) {
    throw Error(ErrorCode::InfeasibleSplit, "inbound residual is negative");
  }
  return out;
}

FlowDecomposition flow_decompose_outflow(const MixedWeightSet& set, double reverse_outflow,
                                         std::optional<double> reverse_residual) {
  const std::size_t n = set.weights.size();
  check_outflow(set.outflow, static_cast<int>(n));
  const double r0 = reverse_residual.value_or(std::max(0.0, -set.residual));
  const double spread = reverse_outflow - r0;
  if (!(spread >= 0.0) || !std::isfinite(spread)) {
    throw Error(ErrorCode::InfeasibleSplit,
                "reverse outflow must be at least the reverse residual");
  }
  double inflow = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(i) + 1 != set.outflow) inflow += set.weights[i];
  }
  std::vector<double> reverse;
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(i) + 1 != set.outflow) reverse.push_back(spread * set.weights[i] / inflow);
  }
  return flow_decompose(set, reverse, r0);
}

std::array<double, 3> partial_distance_derivatives(const Point& a0,
                                                   std::span<const Point> vertices) {
  require_vertex_count(vertices, 4);
  std::array<double, 3> out{};
  for (int j = 1; j <= 3; ++j) {
    const auto [k, l] = remaining_pair(j, 4);
    const PlaneFrame frame = make_plane_frame(a0, vertices[k - 1], vertices[l - 1], k, l);
    const double sj = std::sin(projected_angle(a0, vertices[j - 1], vertices[k - 1], vertices[l - 1]));
    if (sj <= kSinFloor) {
      throw Error(ErrorCode::DegenerateProjection,
                  "vertex " + std::to_string(j) + " lies in the plane of A0, A" +
                      std::to_string(k) + ", A" + std::to_string(l));
    }
    const double s4 = std::sin(projected_angle(a0, vertices[3], vertices[k - 1], vertices[l - 1]));
    const int sgn_j = plane_side_sign(vertices[j - 1], frame, 0.0);
    const int sgn_4 = plane_side_sign(vertices[3], frame, 0.0);
    out[j - 1] = static_cast<double>(sgn_4 * sgn_j) * s4 / sj;
  }
  return out;
}

DistanceElimination::DistanceElimination(const Point& reference,
                                         std::span<const Point> vertices) {
  require_vertex_count(vertices, 4);
  const Point& a1 = vertices[0];
  const Point& a2 = vertices[1];
  const Point& a3 = vertices[2];
  const Point& a4 = vertices[3];
  a12_ = (a1 - a2).norm();
  a23_ = (a2 - a3).norm();
  a24_ = (a2 - a4).norm();
  const double t123 = angle_at(a2, a1, a3);
  const double t124 = angle_at(a2, a1, a4);
  cos123_ = std::cos(t123);
  sin123_ = std::sin(t123);
  cos124_ = std::cos(t124);
  sin124_ = std::sin(t124);
  if (sin123_ <= kSinFloor) {
    throw Error(ErrorCode::DegeneratePlane, "A1, A2, A3 are collinear");
  }
  const Point others[] = {a4};
  double g4 = dihedral_angles(a1, a2, a3, others).front();
  const PlaneFrame base = make_plane_frame(a1, a2, a3);
  if (plane_side_sign(a4, base, kSinFloor) * plane_side_sign(reference, base, kSinFloor) < 0) {
    g4 = -g4;
  }
  cos_g4_ = std::cos(g4);
  sin_g4_ = std::sin(g4);
}

double DistanceElimination::operator()(double a01, double a02, double a03) const {
  const double d = (a02 * a02 + a12_ * a12_ - a01 * a01) / (2.0 * a12_);
  const double h2 = a02 * a02 - d * d;
  if (!(h2 > 0.0)) {
    throw Error(ErrorCode::Unrealizable, "distances place A0 on line A1A2 or nowhere");
  }
  const double h = std::sqrt(h2);
  double x = ((a02 * a02 + a23_ * a23_ - a03 * a03) / (2.0 * a23_) - d * cos123_) /
             (h * sin123_);
  if (!std::isfinite(x) || std::abs(x) > 1.0 + 1e-9) {
    throw Error(ErrorCode::Unrealizable, "distances admit no point in space");
  }
  x = std::clamp(x, -1.0, 1.0);
  const double turn = cos_g4_ * x + sin_g4_ * std::sqrt(1.0 - x * x);
  const double a04_sq =
      a02 * a02 + a24_ * a24_ - 2.0 * a24_ * (d * cos124_ + h * sin124_ * turn);
  return std::sqrt(std::max(0.0, a04_sq));
}

}  // namespace ftnet
