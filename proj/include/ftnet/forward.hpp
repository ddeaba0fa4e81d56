#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ftnet/geom.hpp"

namespace ftnet {

/// Three to five weighted boundary vertices.
struct BoundaryConfiguration {
  std::vector<Point> vertices;
  std::vector<double> weights;

  /// Throws InvalidConfiguration unless n is 3..5, weights are finite and
  /// nonnegative with at least two positive, and the vertices span a plane.
  void validate() const;
  std::size_t size() const noexcept { return vertices.size(); }
  double total_weight() const;
};

/// Floating (A0 off the vertices) or absorbed at a vertex (0-based index).
struct FtCase {
  std::optional<std::size_t> absorbed_vertex;

  bool floating() const noexcept { return !absorbed_vertex.has_value(); }
  bool operator==(const FtCase&) const = default;
};

struct FtSolution {
  Point point;
  FtCase ft_case;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  std::optional<Point> start;
};

/// Sum of B_i |x - A_i|.
double objective(const BoundaryConfiguration& config, const Point& x);

/// Norm of the weighted unit-vector sum at `x`. Throws AtVertex when `x`
/// coincides with a positively weighted vertex.
double kkt_residual(const BoundaryConfiguration& config, const Point& x);

/// Norm of the pull the other vertices exert on vertex `i`,
/// || sum_{j != i} B_j u(A_i, A_j) ||.
double vertex_pull(const BoundaryConfiguration& config, std::size_t i);

/// Absorbed at i when vertex_pull(i) <= B_i + tol, floating otherwise.
FtCase classify(const BoundaryConfiguration& config, double tol = 1e-10);

/// Weighted Fermat-Torricelli point. Absorbed configurations return the vertex;
/// floating ones are found by reciprocal-distance fixed-point iteration with
/// Newton acceleration, stopping once the KKT residual drops below
/// tol * max(1, total weight). Throws ConvergenceError after max_iter steps.
FtSolution solve(const BoundaryConfiguration& config, const SolveOptions& options = {});

}  // namespace ftnet
