#include "ftnet/angles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ftnet/errors.hpp"

namespace ftnet {

namespace {

constexpr double kRadicandClip = 1e-12;
constexpr double kRootClip = 1e-10;
constexpr double kRootMatchTol = 1e-9;

[[noreturn]] void unrealizable(const std::string& what) {
  throw Error(ErrorCode::Unrealizable, what);
}

// Squared cosine of the polar offset of a ray from the plane of the two
// reference rays, given its angles to them and the angle between them.
double polar_cos2(double base, double to_first, double to_second) {
  const double c12 = std::cos(base);
  const double c1 = std::cos(to_first);
  const double c2 = std::cos(to_second);
  const double s2 = std::sin(base) * std::sin(base);
  return (c2 * c2 + c1 * c1 - 2.0 * c2 * c1 * c12) / s2;
}

// Gram determinant of three unit vectors given their mutual cosines; equals
// sin^2(base) * sin^2(polar offset).
double gram(double c12, double c1, double c2) {
  return 1.0 - c12 * c12 - c1 * c1 - c2 * c2 + 2.0 * c12 * c1 * c2;
}

void check_label(const AngleSystem& sys, int label) {
  if (label < 3 || label > sys.ray_count()) {
    throw Error(ErrorCode::Validation,
                "ray label " + std::to_string(label) + " out of range");
  }
}

void check_bits(const AngleSystem& sys, const HemisphereBits& bits) {
  if (static_cast<int>(bits.size()) != sys.ray_count() - 2) {
    throw Error(ErrorCode::Validation, "expected one hemisphere bit per ray beyond the second");
  }
  for (int b : bits) {
    if (b != 1 && b != -1) {
      throw Error(ErrorCode::Validation, "hemisphere bits must be +1 or -1");
    }
  }
}

double clamp_root(double r) {
  if (r < -1.0 - kRootClip || r > 1.0 + kRootClip) {
    throw Error(ErrorCode::RootOutOfRange, "cosine root outside [-1, 1]");
  }
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

AngleSystem::AngleSystem(double base, std::vector<double> to_first,
                         std::vector<double> to_second)
    : base_(base), to_first_(std::move(to_first)), to_second_(std::move(to_second)) {
  auto in_open_range = [](double a) { return std::isfinite(a) && a > 0.0 && a < std::numbers::pi; };
  if (!in_open_range(base_)) unrealizable("base angle must lie in (0, pi)");
  if (std::abs(std::sin(base_)) <= 1e-12) unrealizable("base rays are collinear");
  for (std::size_t n = 0; n < to_first_.size(); ++n) {
    if (!in_open_range(to_first_[n]) || !in_open_range(to_second_[n])) {
      unrealizable("angles must lie in (0, pi)");
    }
    if (polar_cos2(base_, to_first_[n], to_second_[n]) > 1.0 + kRadicandClip) {
      unrealizable("angles of ray " + std::to_string(n + 3) +
                   " violate the spherical triangle inequality");
    }
  }
}

AngleSystem AngleSystem::tetrahedral(double a102, double a103, double a104,
                                     double a203, double a204) {
  return AngleSystem(a102, {a103, a104}, {a203, a204});
}

AngleSystem AngleSystem::hexahedral(double a102, double a103, double a104,
                                    double a105, double a203, double a204,
                                    double a205) {
  return AngleSystem(a102, {a103, a104, a105}, {a203, a204, a205});
}

AngleSystem AngleSystem::measure(const Point& a0, std::span<const Point> vertices) {
  if (vertices.size() != 4 && vertices.size() != 5) {
    throw Error(ErrorCode::Validation, "angle systems need 4 or 5 vertices");
  }
  std::vector<double> first, second;
  for (std::size_t i = 2; i < vertices.size(); ++i) {
    first.push_back(angle_at(a0, vertices[0], vertices[i]));
    second.push_back(angle_at(a0, vertices[1], vertices[i]));
  }
  return AngleSystem(angle_at(a0, vertices[0], vertices[1]), std::move(first),
                     std::move(second));
}

double AngleSystem::angle_to_first(int label) const {
  check_label(*this, label);
  return to_first_[label - 3];
}

double AngleSystem::angle_to_second(int label) const {
  check_label(*this, label);
  return to_second_[label - 3];
}

RaySystem RaySystem::from_points(const Point& a0, std::span<const Point> vertices) {
  RaySystem rays;
  rays.origin = a0;
  for (const Point& v : vertices) rays.directions.push_back(unit_vector(a0, v));
  if (vertices.size() >= 3) rays.bits = hemisphere_bits(a0, vertices);
  return rays;
}

AngleSystem RaySystem::angle_system() const {
  std::vector<Point> tips;
  for (const UnitVector& u : directions) tips.push_back(origin + u.vec());
  return AngleSystem::measure(origin, tips);
}

std::vector<double> polar_offsets(const AngleSystem& sys) {
  std::vector<double> out;
  const double s = std::sin(sys.base_angle());
  for (int i = 3; i <= sys.ray_count(); ++i) {
    const double cos2 = polar_cos2(sys.base_angle(), sys.angle_to_first(i),
                                   sys.angle_to_second(i));
    if (cos2 > 1.0 + kRadicandClip) unrealizable("polar offset cosine exceeds 1");
    const double g = gram(std::cos(sys.base_angle()), std::cos(sys.angle_to_first(i)),
                          std::cos(sys.angle_to_second(i)));
    if (g < -kRadicandClip) unrealizable("negative radicand in polar offset");
    const double sin_p = std::sqrt(std::max(0.0, g)) / std::abs(s);
    out.push_back(std::atan2(sin_p, std::sqrt(std::clamp(cos2, 0.0, 1.0))));
  }
  return out;
}

RootPair cos_alpha_candidates(const AngleSystem& sys, int i, int j) {
  check_label(sys, i);
  check_label(sys, j);
  if (i == j) throw Error(ErrorCode::Validation, "ray pair must be distinct");
  const double a12 = sys.base_angle();
  const double c12 = std::cos(a12);
  const double c1i = std::cos(sys.angle_to_first(i));
  const double c1j = std::cos(sys.angle_to_first(j));
  const double c2i = std::cos(sys.angle_to_second(i));
  const double c2j = std::cos(sys.angle_to_second(j));
  const double csc2 = 1.0 / (std::sin(a12) * std::sin(a12));

  auto factor = [&](int k) {
    const double a1k = sys.angle_to_first(k);
    const double a2k = sys.angle_to_second(k);
    return 1.0 + std::cos(2.0 * a12) + std::cos(2.0 * a1k) + std::cos(2.0 * a2k) -
           4.0 * c12 * std::cos(a1k) * std::cos(a2k);
  };
  double radicand = factor(i) * factor(j);
  if (radicand < -kRadicandClip) unrealizable("negative radicand in cosine quadratic");
  const double b = std::sqrt(std::max(0.0, radicand));

  const double opposite =
      -0.25 * (2.0 * b + 4.0 * c12 * (c1j * c2i + c1i * c2j) - 4.0 * (c1i * c1j + c2i * c2j)) * csc2;
  const double same =
      0.25 * (4.0 * c1i * (c1j - c12 * c2j) + 2.0 * (b + 2.0 * c2i * (-c12 * c1j + c2j))) * csc2;
  return {clamp_root(opposite), clamp_root(same)};
}

RootPair cos_alpha_extended(const AngleSystem& sys, int i, int j) {
  if (sys.ray_count() != 5) {
    throw Error(ErrorCode::Validation, "extended pairs need a five-ray system");
  }
  if (!((i == 3 && j == 5) || (i == 5 && j == 3) || (i == 4 && j == 5) || (i == 5 && j == 4))) {
    throw Error(ErrorCode::Validation, "extended pairs are (3,5) and (4,5)");
  }
  return cos_alpha_candidates(sys, i, j);
}

double quadratic_residual(const AngleSystem& sys, int i, int j, double cos_ij) {
  const double a12 = sys.base_angle();
  const double c12 = std::cos(a12);
  const double c1i = std::cos(sys.angle_to_first(i));
  const double c1j = std::cos(sys.angle_to_first(j));
  const double c2i = std::cos(sys.angle_to_second(i));
  const double c2j = std::cos(sys.angle_to_second(j));
  const double csc2 = 1.0 / (std::sin(a12) * std::sin(a12));
  const double lhs = -c1i * c1j + cos_ij - (-c12 * c1i + c2i) * (-c12 * c1j + c2j) * csc2;
  const double pi2 = polar_cos2(a12, sys.angle_to_first(i), sys.angle_to_second(i));
  const double pj2 = polar_cos2(a12, sys.angle_to_first(j), sys.angle_to_second(j));
  return lhs * lhs - (1.0 - pi2) * (1.0 - pj2);
}

RaySystem reconstruct_rays(const AngleSystem& sys, const HemisphereBits& bits) {
  check_bits(sys, bits);
  const double a12 = sys.base_angle();
  const double c12 = std::cos(a12);
  const double s12 = std::sin(a12);

  RaySystem rays;
  rays.bits = bits;
  rays.directions.push_back(UnitVector::normalize(Vec3(1.0, 0.0, 0.0)));
  rays.directions.push_back(UnitVector::normalize(Vec3(c12, s12, 0.0)));
  for (int i = 3; i <= sys.ray_count(); ++i) {
    const double c1 = std::cos(sys.angle_to_first(i));
    const double c2 = std::cos(sys.angle_to_second(i));
    // In-plane part has length cos(polar offset) and direction given by the
    // azimuth measured from ray 1.
    const double x = c1;
    const double y = (c2 - c12 * c1) / s12;
    const double cos_p = std::hypot(x, y);
    const double azimuth = std::atan2(y, x);
    const double g = gram(c12, c1, c2);
    if (g < -kRadicandClip) unrealizable("ray " + std::to_string(i) + " is not realizable");
    const double sin_p = std::sqrt(std::max(0.0, g)) / s12;
    const Vec3 u(cos_p * std::cos(azimuth), cos_p * std::sin(azimuth),
                 bits[i - 3] * sin_p);
    rays.directions.push_back(UnitVector::normalize(u));
  }
  return rays;
}

double resolve_root(const AngleSystem& sys, int i, int j, const HemisphereBits& bits) {
  const RootPair roots = cos_alpha_candidates(sys, i, j);
  const RaySystem rays = reconstruct_rays(sys, bits);
  const double direct = rays.ray(i).dot(rays.ray(j));
  const double d_opp = std::abs(roots.opposite - direct);
  const double d_same = std::abs(roots.same - direct);
  const double best = d_opp <= d_same ? roots.opposite : roots.same;
  if (std::min(d_opp, d_same) > kRootMatchTol) {
    throw Error(ErrorCode::NoMatchingRoot, "no candidate root matches the reconstructed rays");
  }
  return best;
}

double projected_angle_from_angles(double angle_km, double angle_mi, double angle_ki) {
  const double s = std::sin(angle_km);
  const double s2 = s * s;
  if (s2 <= 1e-24) unrealizable("plane rays are collinear");
  const double ckm = std::cos(angle_km);
  const double cmi = std::cos(angle_mi);
  const double cki = std::cos(angle_ki);
  const double cos2 = (cmi * cmi + cki * cki - 2.0 * cmi * cki * ckm) / s2;
  if (cos2 > 1.0 + kRadicandClip) unrealizable("projected angle cosine exceeds 1");
  const double c2 = std::clamp(cos2, 0.0, 1.0);
  return std::atan2(std::sqrt(1.0 - c2), std::sqrt(c2));
}

HemisphereBits hemisphere_bits(const Point& a0, std::span<const Point> vertices) {
  const PlaneFrame frame = make_plane_frame(a0, vertices[0], vertices[1], 1, 2);
  HemisphereBits bits;
  for (std::size_t i = 2; i < vertices.size(); ++i) {
    bits.push_back(plane_side_sign(vertices[i], frame) >= 0 ? 1 : -1);
  }
  return bits;
}

CosineTable CosineTable::from_angles(const AngleSystem& sys, const HemisphereBits& bits) {
  check_bits(sys, bits);
  const int n = sys.ray_count();
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
  auto put = [&](int i, int j, double v) {
    c(i - 1, j - 1) = v;
    c(j - 1, i - 1) = v;
  };
  put(1, 2, std::cos(sys.base_angle()));
  for (int i = 3; i <= n; ++i) {
    put(1, i, std::cos(sys.angle_to_first(i)));
    put(2, i, std::cos(sys.angle_to_second(i)));
  }
  for (int i = 3; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) put(i, j, resolve_root(sys, i, j, bits));
  }
  return CosineTable(std::move(c));
}

CosineTable CosineTable::from_rays(const RaySystem& rays) {
  return from_angles(rays.angle_system(), rays.bits);
}

double CosineTable::angle(int i, int j) const {
  return std::acos(std::clamp(cos(i, j), -1.0, 1.0));
}

double CosineTable::projected(int i, int k, int m) const {
  return projected_angle_from_angles(angle(k, m), angle(m, i), angle(k, i));
}

}  // namespace ftnet
