#include "ftnet/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ftnet/errors.hpp"

namespace ftnet {

namespace {

constexpr double kSinFloor = 1e-12;
constexpr double kCoplanarTol = 1e-9;

// Labels of {1, 2, 3} other than j; these span plane j.
std::array<int, 2> plane_pair(int j) {
  switch (j) {
    case 1: return {2, 3};
    case 2: return {1, 3};
    default: return {1, 2};
  }
}

// Affine weight alpha + beta * x.
struct Affine {
  double alpha;
  double beta;
};

WeightInterval positive_interval(std::span<const Affine> weights, double lo, double hi) {
  for (const Affine& w : weights) {
    if (w.beta > 0.0) {
      lo = std::max(lo, -w.alpha / w.beta);
    } else if (w.beta < 0.0) {
      hi = std::min(hi, -w.alpha / w.beta);
    } else if (!(w.alpha > 0.0)) {
      return {0.0, 0.0};
    }
  }
  if (!(lo < hi)) return {lo, lo};
  return {lo, hi};
}

void check_budget(double c) {
  if (!std::isfinite(c)) throw Error(ErrorCode::Validation, "mass budget must be finite");
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidMassBudget, "mass budget must be positive");
}

void check_positive(const std::vector<double>& weights) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) {
      throw Error(ErrorCode::NonpositiveWeight,
                  "weight " + std::to_string(i + 1) + " is not positive for this free weight");
    }
  }
}

bool inside_hull(const HexahedronGeometry& g) {
  for (int skip = 0; skip < 5; ++skip) {
    std::array<Point, 4> tetra;
    int n = 0;
    for (int i = 0; i < 5; ++i) {
      if (i != skip) tetra[n++] = g.vertices[i];
    }
    try {
      if (strictly_inside(g.a0, tetra, 0.0)) return true;
    } catch (const Error&) {
      // flat subset, try the next one
    }
  }
  return false;
}

// B_j = a_j B4 + b_j B5 for j = 1, 2, 3, from the equilibrium at A0
// projected on the normal of plane j.
struct HexaCoefficients {
  std::array<double, 3> a{};
  std::array<double, 3> b{};
  std::array<double, 3> sub_ratio{};
  SignConfiguration signs;
};

HexaCoefficients hexa_coefficients(const HexahedronGeometry& g) {
  if (!g.a0.allFinite() ||
      !std::all_of(g.vertices.begin(), g.vertices.end(), [](const Point& p) { return p.allFinite(); })) {
    throw Error(ErrorCode::Validation, "coordinates must be finite");
  }
  if (!inside_hull(g)) {
    throw Error(ErrorCode::NotInterior, "A0 is not inside the hull of the five vertices");
  }
  HexaCoefficients out;
  out.signs = SignConfiguration::measure(g);
  const auto& v = g.vertices;
  for (int j = 1; j <= 3; ++j) {
    const auto [k, l] = plane_pair(j);
    const double sj = std::sin(projected_angle(g.a0, v[j - 1], v[k - 1], v[l - 1]));
    const double s4 = std::sin(projected_angle(g.a0, v[3], v[k - 1], v[l - 1]));
    const double s5 = std::sin(projected_angle(g.a0, v[4], v[k - 1], v[l - 1]));
    const int sgn_j = out.signs.at(j, j);
    const int sgn_4 = out.signs.at(4, j);
    const int sgn_5 = out.signs.at(5, j);
    if (sgn_j == 0 || sj <= kSinFloor) {
      throw Error(ErrorCode::SignDegenerate,
                  "vertex " + std::to_string(j) + " lies in the plane of A0, A" +
                      std::to_string(k) + ", A" + std::to_string(l));
    }
    out.a[j - 1] = -static_cast<double>(sgn_4 * sgn_j) * s4 / sj;
    out.b[j - 1] = -static_cast<double>(sgn_5 * sgn_j) * s5 / sj;
    out.sub_ratio[j - 1] = (sgn_4 == 0 || s4 <= kSinFloor)
                               ? std::numeric_limits<double>::quiet_NaN()
                               : -static_cast<double>(sgn_5 * sgn_4) * s5 / s4;
  }
  return out;
}

// B4 = alpha + beta * B5 from the mass budget.
Affine hexa_b4(const HexaCoefficients& k, double c) {
  const double sa = 1.0 + k.a[0] + k.a[1] + k.a[2];
  const double sb = 1.0 + k.b[0] + k.b[1] + k.b[2];
  if (std::abs(sa) <= kSinFloor) {
    throw Error(ErrorCode::DegenerateProjection, "mass budget does not determine B4");
  }
  return {c / sa, -sb / sa};
}

struct QuadCoefficients {
  double r21, r31;  // B2 / B1 and B3 / B1 at B4 = 0
  double q, p;      // B4 coupling into B2 and B3
};

QuadCoefficients quad_coefficients(const QuadrilateralGeometry& g) {
  if (!g.a0.allFinite() ||
      !std::all_of(g.vertices.begin(), g.vertices.end(), [](const Point& p) { return p.allFinite(); })) {
    throw Error(ErrorCode::Validation, "coordinates must be finite");
  }
  const auto& v = g.vertices;
  const double diam = diameter(v);
  if (!(diam > 0.0)) throw Error(ErrorCode::InvalidConfiguration, "quadrilateral is degenerate");
  const Point centroid = (v[0] + v[1] + v[2] + v[3]) / 4.0;
  Vec3 normal = Vec3::Zero();
  for (int i = 0; i < 4; ++i) normal += (v[i] - centroid).cross(v[(i + 1) % 4] - centroid);
  if (normal.norm() <= kDegenerateTol * diam * diam) {
    throw Error(ErrorCode::InvalidConfiguration, "quadrilateral has no area");
  }
  normal.normalize();
  auto off_plane = [&](const Point& p) { return std::abs((p - centroid).dot(normal)) / diam; };
  for (int i = 0; i < 4; ++i) {
    if (off_plane(v[i]) > kCoplanarTol) {
      throw Error(ErrorCode::NotCoplanar, "vertex " + std::to_string(i + 1) + " is off the plane");
    }
  }
  if (off_plane(g.a0) > kCoplanarTol) throw Error(ErrorCode::NotCoplanar, "A0 is off the plane");

  const Vec3 e1 = (v[1] - v[0] - (v[1] - v[0]).dot(normal) * normal).normalized();
  const Vec3 e2 = normal.cross(e1);
  auto planar = [&](const Point& p) {
    return Eigen::Vector2d((p - centroid).dot(e1), (p - centroid).dot(e2));
  };
  auto cross2 = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
  };
  std::array<Eigen::Vector2d, 4> q;
  for (int i = 0; i < 4; ++i) q[i] = planar(v[i]);
  const Eigen::Vector2d x0 = planar(g.a0);
  const double area_tol = kDegenerateTol * diam * diam;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d edge = q[(i + 1) % 4] - q[i];
    if (cross2(edge, q[(i + 2) % 4] - q[(i + 1) % 4]) <= area_tol) {
      throw Error(ErrorCode::NotInterior, "quadrilateral is not strictly convex");
    }
    if (cross2(edge, x0 - q[i]) <= area_tol) {
      throw Error(ErrorCode::NotInterior, "A0 is not inside the quadrilateral");
    }
  }

  std::array<double, 4> th;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d d = q[i] - x0;
    th[i] = std::atan2(d.y(), d.x());
  }
  const double s = std::sin(th[2] - th[1]);
  return {std::sin(th[0] - th[2]) / s, std::sin(th[1] - th[0]) / s,
          std::sin(th[3] - th[2]) / std::sin(th[1] - th[2]), std::sin(th[3] - th[1]) / s};
}

// B1 = alpha + beta * B4 from the mass budget.
Affine quad_b1(const QuadCoefficients& k, double c) {
  const double d = 1.0 + k.r21 + k.r31;
  if (std::abs(d) <= kSinFloor) {
    throw Error(ErrorCode::DegenerateProjection, "mass budget does not determine B1");
  }
  return {c / d, -(1.0 - k.q - k.p) / d};
}

}  // namespace

SignConfiguration SignConfiguration::measure(const HexahedronGeometry& geometry, double tol) {
  SignConfiguration out;
  for (int j = 1; j <= 3; ++j) {
    const auto [k, l] = plane_pair(j);
    const PlaneFrame frame = make_plane_frame(geometry.a0, geometry.vertices[k - 1],
                                              geometry.vertices[l - 1], k, l);
    for (int i = 1; i <= 5; ++i) {
      out.table_[j - 1][i - 1] = plane_side_sign(geometry.vertices[i - 1], frame, tol);
    }
  }
  return out;
}

PlasticityState hexahedron_plasticity(const HexahedronGeometry& geometry, double c,
                                      double b5, std::array<double, 3> split) {
  check_budget(c);
  if (!std::isfinite(b5)) throw Error(ErrorCode::Validation, "B5 must be finite");
  if (b5 < 0.0) throw Error(ErrorCode::NonpositiveWeight, "B5 must be nonnegative");
  double split_sum = 0.0;
  for (double s : split) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::Validation, "residual split fractions must be nonnegative");
    }
    split_sum += s;
  }
  if (std::abs(split_sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::Validation, "residual split fractions must sum to 1");
  }

  const HexaCoefficients k = hexa_coefficients(geometry);
  const Affine b4 = hexa_b4(k, c);
  const double w4 = b4.alpha + b4.beta * b5;
  std::vector<double> w{k.a[0] * w4 + k.b[0] * b5, k.a[1] * w4 + k.b[1] * b5,
                        k.a[2] * w4 + k.b[2] * b5, w4, b5};
  check_positive({w[0], w[1], w[2], w[3]});

  PlasticityState state;
  state.global = MixedWeightSet{w, c - 2.0 * w4, c, 4};
  state.split = split;
  state.sub_ratio = k.sub_ratio;
  state.signs = k.signs;
  const auto& v = geometry.vertices;
  for (int j = 1; j <= 3; ++j) {
    const auto [p, q] = plane_pair(j);
    const std::array<Point, 4> sub{v[p - 1], v[q - 1], v[3], v[4]};
    try {
      const RaySystem rays = RaySystem::from_points(geometry.a0, sub);
      if (rays_enclose_origin(rays)) {
        state.sub_tetra[j - 1] =
            mixed_inverse_tetrahedron(rays, c, split[j - 1] * state.global.residual, 3);
      }
    } catch (const Error&) {
      // A0 on a face of this sub-tetrahedron; leave it empty.
    }
  }
  return state;
}

WeightInterval feasible_b5_interval(const HexahedronGeometry& geometry, double c) {
  check_budget(c);
  const HexaCoefficients k = hexa_coefficients(geometry);
  const Affine b4 = hexa_b4(k, c);
  const std::array<Affine, 4> weights{
      Affine{k.a[0] * b4.alpha, k.a[0] * b4.beta + k.b[0]},
      Affine{k.a[1] * b4.alpha, k.a[1] * b4.beta + k.b[1]},
      Affine{k.a[2] * b4.alpha, k.a[2] * b4.beta + k.b[2]},
      b4,
  };
  return positive_interval(weights, 0.0, c);
}

MixedWeightSet quadrilateral_plasticity(const QuadrilateralGeometry& geometry, double c,
                                        double b4) {
  check_budget(c);
  if (!std::isfinite(b4)) throw Error(ErrorCode::Validation, "B4 must be finite");
  const QuadCoefficients k = quad_coefficients(geometry);
  const Affine b1 = quad_b1(k, c);
  const double w1 = b1.alpha + b1.beta * b4;
  std::vector<double> w{w1, k.r21 * w1 - k.q * b4, k.r31 * w1 - k.p * b4, b4};
  check_positive(w);
  return MixedWeightSet{w, c - 2.0 * b4, c, 4};
}

WeightInterval feasible_b4_interval(const QuadrilateralGeometry& geometry, double c) {
  check_budget(c);
  const QuadCoefficients k = quad_coefficients(geometry);
  const Affine b1 = quad_b1(k, c);
  const std::array<Affine, 3> weights{
      b1,
      Affine{k.r21 * b1.alpha, k.r21 * b1.beta - k.q},
      Affine{k.r31 * b1.alpha, k.r31 * b1.beta - k.p},
  };
  return positive_interval(weights, 0.0, c);
}

BoundaryConfiguration geometric_plasticity_transport(const BoundaryConfiguration& config,
                                                     std::span<const double> scales,
                                                     const SolveOptions& options) {
  const FtSolution sol = solve(config, options);
  if (!sol.ft_case.floating()) {
    throw Error(ErrorCode::FloatingViolated,
                "configuration is absorbed at vertex " +
                    std::to_string(*sol.ft_case.absorbed_vertex + 1));
  }
  return geometric_plasticity_transport(config, sol.point, scales, options.tol);
}

BoundaryConfiguration geometric_plasticity_transport(const BoundaryConfiguration& config,
                                                     const Point& a0,
                                                     std::span<const double> scales,
                                                     double tol) {
  config.validate();
  if (scales.size() != config.size()) {
    throw Error(ErrorCode::Validation, "expected one scale per vertex");
  }
  BoundaryConfiguration out = config;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i])) {
      throw Error(ErrorCode::Validation, "scales must be positive and finite");
    }
    out.vertices[i] = a0 + scales[i] * (config.vertices[i] - a0);
  }
  out.validate();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (vertex_pull(out, i) <= out.weights[i] + tol) {
      throw Error(ErrorCode::FloatingViolated,
                  "vertex " + std::to_string(i + 1) + " absorbs the FT point after scaling");
    }
  }
  return out;
}

}  // namespace ftnet
