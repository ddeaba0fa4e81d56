#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

// JSON documents and command dispatch behind the `ftnet` executable. Kept in
// the library so the executable only parses flags and moves bytes.

namespace ftnet::cli {

using nlohmann::json;

/// A malformed document. `pointer` is a JSON pointer to the offending field.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string pointer, const std::string& message)
      : std::runtime_error(message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

// Every field is optional at the schema level so that documents survive a
// parse/serialize round trip unchanged. Commands check what they need.
struct Geometry {
  std::optional<std::vector<std::vector<double>>> points;  // all 2D or all 3D
  std::optional<std::vector<double>> weights;
  std::optional<std::vector<double>> a0;
  std::optional<std::map<std::string, double>> angles;  // a102, a103, ...
  std::optional<std::vector<int>> bits;
};

struct Parameters {
  std::optional<double> c;
  std::optional<double> residual;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<double> b4;
  std::optional<double> b5;
  std::optional<std::array<double, 3>> split;
  std::optional<int> levels;
  std::optional<int> max_iter;
  std::optional<std::vector<double>> scales;
  std::optional<int> outflow;
};

struct ProblemDocument {
  std::optional<std::string> version;
  std::optional<std::string> kind;
  std::optional<bool> degrees;
  std::optional<Geometry> geometry;
  std::optional<Parameters> parameters;

  /// Throws DocumentError.
  static ProblemDocument parse(const json& j);
  /// Canonical form: absent optionals are omitted.
  json to_json() const;
};

struct Options {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> sweep;
  bool oracle = false;
  bool degrees = false;
};

struct Outcome {
  int exit_code = 0;
  std::string out;  // result document or CSV
  std::string err;  // structured error, empty on success
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Commands: solve, inverse, mixed-inverse, plasticity-hexa, plasticity-quad,
/// angles, verify. Never throws.
Outcome run(std::string_view command, const Options& options, std::string_view input);

/// CSV rows (free weight, weights, residual, deviation of the recovered FT
/// point) at `samples` evenly spaced interior points of the feasible interval
/// of a plasticity document. Throws EmptyFeasibleInterval.
std::string emit_sweep(const ProblemDocument& doc, int samples);

/// Structured error payload {"error": {"kind", "message", "pointer"}}.
json error_payload(std::string_view kind, std::string_view message,
                   std::optional<std::string> pointer = std::nullopt);

}  // namespace ftnet::cli
