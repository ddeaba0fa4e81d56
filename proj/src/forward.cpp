#include "ftnet/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ftnet/errors.hpp"

namespace ftnet {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidConfiguration, what);
}

double collision_radius(const BoundaryConfiguration& config) {
  return kCoincidenceTol * std::max(1.0, diameter(config.vertices));
}

// Modified fixed-point step away from a non-absorbing vertex: move along the
// net pull by (pull - B_k) / sum_j (B_j / a_kj), halving until the objective
// decreases.
Point leave_vertex(const BoundaryConfiguration& config, std::size_t k) {
  const Point& ak = config.vertices[k];
  Vec3 pull = Vec3::Zero();
  double curvature = 0.0;
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (j == k || config.weights[j] == 0.0) continue;
    pull += config.weights[j] * unit_vector(ak, config.vertices[j]).vec();
    curvature += config.weights[j] / (config.vertices[j] - ak).norm();
  }
  const double strength = pull.norm();
  const Vec3 dir = pull / strength;
  double step = (strength - config.weights[k]) / curvature;
  const double f0 = objective(config, ak);
  for (int halving = 0; halving < 80; ++halving) {
    const Point x = ak + step * dir;
    if (objective(config, x) < f0) return x;
    step *= 0.5;
  }
  return ak + step * dir;
}

}  // namespace

void BoundaryConfiguration::validate() const {
  const std::size_t n = vertices.size();
  if (n < 3 || n > 5) invalid("expected 3 to 5 vertices, got " + std::to_string(n));
  if (weights.size() != n) invalid("expected one weight per vertex");
  int positive = 0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) invalid("weights must be finite and nonnegative");
    if (w > 0.0) ++positive;
  }
  if (positive < 2) invalid("at least two weights must be positive");
  for (const Point& p : vertices) {
    if (!p.allFinite()) invalid("vertex coordinates must be finite");
  }
  const double diam = diameter(vertices);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((vertices[i] - vertices[j]).norm() <= kCoincidenceTol * std::max(1.0, diam)) {
        invalid("vertices " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " coincide");
      }
    }
  }
  double spread = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      spread = std::max(spread, (vertices[i] - vertices[0]).cross(vertices[j] - vertices[0]).norm());
    }
  }
  if (spread <= kDegenerateTol * diam * diam) invalid("vertices are collinear");
}

double BoundaryConfiguration::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double objective(const BoundaryConfiguration& config, const Point& x) {
  double f = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    f += config.weights[i] * (x - config.vertices[i]).norm();
  }
  return f;
}

double kkt_residual(const BoundaryConfiguration& config, const Point& x) {
  const double radius = collision_radius(config);
  Vec3 sum = Vec3::Zero();
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (config.weights[i] == 0.0) continue;
    const Vec3 d = config.vertices[i] - x;
    if (d.norm() <= radius) {
      throw Error(ErrorCode::AtVertex, "point coincides with vertex " + std::to_string(i + 1));
    }
    sum += config.weights[i] * d.normalized();
  }
  return sum.norm();
}

double vertex_pull(const BoundaryConfiguration& config, std::size_t i) {
  Vec3 sum = Vec3::Zero();
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (j == i || config.weights[j] == 0.0) continue;
    sum += config.weights[j] * unit_vector(config.vertices[i], config.vertices[j]).vec();
  }
  return sum.norm();
}

FtCase classify(const BoundaryConfiguration& config, double tol) {
  config.validate();
  FtCase result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (vertex_pull(config, i) <= config.weights[i] + tol) {
      // Only degenerate two-point configurations admit more than one.
      const double f = objective(config, config.vertices[i]);
      if (f < best) {
        best = f;
        result.absorbed_vertex = i;
      }
    }
  }
  return result;
}

FtSolution solve(const BoundaryConfiguration& config, const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::Validation, "tolerance must be positive");
  const FtCase ft_case = classify(config, options.tol);
  if (!ft_case.floating()) {
    const std::size_t i = *ft_case.absorbed_vertex;
    const Point& a = config.vertices[i];
    return {a, ft_case, objective(config, a),
            std::max(0.0, vertex_pull(config, i) - config.weights[i]), 0};
  }

  const std::size_t n = config.size();
  const double target = options.tol * std::max(1.0, config.total_weight());
  const double radius = collision_radius(config);

  Point x = Point::Zero();
  if (options.start) {
    x = *options.start;
  } else {
    for (std::size_t i = 0; i < n; ++i) x += config.weights[i] * config.vertices[i];
    x /= config.total_weight();
  }

  Point best = x;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iter; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      if (config.weights[k] > 0.0 && (x - config.vertices[k]).norm() <= radius) {
        x = leave_vertex(config, k);
      }
    }

    Vec3 grad = Vec3::Zero();
    Vec3 weighted_sum = Vec3::Zero();
    double inv_sum = 0.0;
    Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double w = config.weights[i];
      if (w == 0.0) continue;
      const Vec3 r = x - config.vertices[i];
      const double d = r.norm();
      const Vec3 v = r / d;
      grad += w * v;
      weighted_sum += (w / d) * config.vertices[i];
      inv_sum += w / d;
      hess += (w / d) * (Eigen::Matrix3d::Identity() - v * v.transpose());
    }
    const double residual = grad.norm();
    if (residual < best_residual) {
      best_residual = residual;
      best = x;
    }
    if (residual <= target) {
      return {x, ft_case, objective(config, x), residual, it};
    }

    const Point fixed_point = weighted_sum / inv_sum;
    Point next = fixed_point;
    const Vec3 newton_step = hess.ldlt().solve(grad);
    if (newton_step.allFinite()) {
      const Point newton = x - newton_step;
      if (objective(config, newton) < objective(config, fixed_point)) next = newton;
    }
    x = next;
  }
  throw ConvergenceError("forward solver did not reach the KKT tolerance", best,
                         best_residual, options.max_iter);
}

}  // namespace ftnet
