#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace ftnet {

enum class ErrorCode {
  Validation,
  InvalidConfiguration,
  DegenerateSegment,
  DegeneratePlane,
  DegenerateEdge,
  PointOnEdge,
  Unrealizable,
  RootOutOfRange,
  NoMatchingRoot,
  MaxIterationsExceeded,
  AtVertex,
  NotInterior,
  NotCoplanar,
  InvalidMassBudget,
  NonpositiveWeight,
  BudgetInconsistent,
  InfeasibleSplit,
  DegenerateProjection,
  SignDegenerate,
  FloatingViolated,
  EvaluationFailed,
  EmptyFeasibleInterval,
};

std::string_view to_string(ErrorCode code);

// True for errors caused by inputs that violate a documented precondition,
// false for failures of the numerics on admissible input.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the forward solver when the KKT residual does not reach the
// requested tolerance. Carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, Eigen::Vector3d best,
                   double residual, int iterations)
      : Error(ErrorCode::MaxIterationsExceeded, message),
        best_(std::move(best)),
        residual_(residual),
        iterations_(iterations) {}

  const Eigen::Vector3d& best_iterate() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  Eigen::Vector3d best_;
  double residual_;
  int iterations_;
};

}  // namespace ftnet
