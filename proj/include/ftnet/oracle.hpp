#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ftnet/forward.hpp"

// Reference computations that share no code path with the closed forms or the
// iterative solver.

namespace ftnet {

struct OracleResult {
  Point minimizer;
  double objective = 0.0;
  int levels = 0;
  Point box_lo;
  Point box_hi;
};

/// Grid search for the minimizer of sum B_i |x - A_i| over the bounding box of
/// the vertices. Level 0 is a seeded, jittered 17-point-per-axis grid; every
/// further level shrinks the step 4x. Within a level, 9-point-per-axis patches
/// around the best six candidates are re-polled at fresh seeded offsets until
/// the best value stalls. Vertices are always candidates. Flat axes of planar
/// input stay flat. Deterministic in (config, levels, seed).
OracleResult brute_force_min(const BoundaryConfiguration& config, int levels = 8,
                             std::uint64_t seed = 0);

/// Index of the vertex the oracle minimizer sits on, if any.
std::optional<std::size_t> oracle_vertex(const BoundaryConfiguration& config,
                                         const OracleResult& result);

using ScalarField = std::function<double(std::span<const double>)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h. Throws
/// EvaluationFailed when f throws or returns a non-finite value.
std::vector<double> finite_diff(const ScalarField& f, std::span<const double> x,
                                double h = 1e-5);

}  // namespace ftnet
