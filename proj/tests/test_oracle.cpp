#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ftnet/errors.hpp"
#include "ftnet/oracle.hpp"
#include "test_support.hpp"

using namespace ftnet;
using namespace ftnet::testing;
using doctest::Approx;

namespace {

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

TEST_CASE("oracle on symmetric configurations") {
  const double s = std::sqrt(3.0) / 2;
  const BoundaryConfiguration tri{{Point(1, 0, 0), Point(-0.5, s, 0), Point(-0.5, -s, 0)}, {1, 1, 1}};
  CHECK(brute_force_min(tri).minimizer.norm() <= 1e-5);
  CHECK(brute_force_min(tri).minimizer.z() == 0.0);

  const BoundaryConfiguration tet{{Point(1, 1, 1), Point(1, -1, -1), Point(-1, 1, -1), Point(-1, -1, 1)},
                                  {1, 1, 1, 1}};
  const OracleResult r = brute_force_min(tet);
  CHECK(r.minimizer.norm() <= 1e-5);
  CHECK(r.objective == Approx(4 * std::sqrt(3.0)).epsilon(1e-9));
  CHECK(r.levels == 8);

  const BoundaryConfiguration absorbed{{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)}, {1, 1, 5}};
  const OracleResult a = brute_force_min(absorbed);
  CHECK((a.minimizer - absorbed.vertices[2]).norm() <= 1e-5);
  CHECK(oracle_vertex(absorbed, a) == std::optional<std::size_t>(2));
  CHECK_FALSE(oracle_vertex(tri, brute_force_min(tri)).has_value());
}

TEST_CASE("oracle is deterministic") {
  Rng rng(61);
  const BoundaryConfiguration c = random_config(rng, 5);
  const OracleResult a = brute_force_min(c, 6, 42);
  const OracleResult b = brute_force_min(c, 6, 42);
  CHECK(a.minimizer == b.minimizer);
  CHECK(a.objective == b.objective);
  CHECK(a.box_lo == b.box_lo);
  CHECK(a.box_hi == b.box_hi);
  CHECK(code_of([&] { brute_force_min(c, 2); }) == ErrorCode::Validation);
}

TEST_CASE("oracle tracks the solver on floating configurations") {
  Rng rng(62);
  int done = 0;
  while (done < 100) {
    const BoundaryConfiguration c = random_config(rng, 3 + done % 3);
    const FtSolution s = solve(c);
    if (!s.ft_case.floating()) continue;
    ++done;
    const OracleResult o = brute_force_min(c, 8, static_cast<std::uint64_t>(done));
    CHECK(s.objective <= o.objective + 1e-6);
    CHECK(o.objective - s.objective <= 1e-6);
  }
}

TEST_CASE("finite_diff") {
  const ScalarField sq = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  const std::vector<double> x{1.0, 2.0};
  const std::vector<double> g = finite_diff(sq, x);
  CHECK(g[0] == Approx(2.0).epsilon(1e-8));
  CHECK(g[1] == Approx(4.0).epsilon(1e-8));

  // Central differences are second order: the error drops ~4x per halving.
  const ScalarField wave = [](std::span<const double> v) { return std::sin(3 * v[0]); };
  const std::vector<double> p{0.4};
  const double truth = 3 * std::cos(1.2);
  const double e1 = std::abs(finite_diff(wave, p, 0.5)[0] - truth);
  const double e2 = std::abs(finite_diff(wave, p, 0.25)[0] - truth);
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.2));
  CHECK(std::abs(finite_diff(wave, p)[0] - truth) <= 1e-9);

  const ScalarField bad = [](std::span<const double>) -> double { throw std::runtime_error("nope"); };
  CHECK(code_of([&] { finite_diff(bad, x); }) == ErrorCode::EvaluationFailed);
  const ScalarField nan = [](std::span<const double>) { return std::nan(""); };
  CHECK(code_of([&] { finite_diff(nan, x); }) == ErrorCode::EvaluationFailed);
  CHECK(code_of([&] { finite_diff(sq, x, 0.0); }) == ErrorCode::Validation);
}
