#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ftnet/angles.hpp"
#include "ftnet/cli.hpp"
#include "ftnet/errors.hpp"
#include "ftnet/forward.hpp"
#include "ftnet/inverse.hpp"
#include "ftnet/oracle.hpp"
#include "ftnet/plasticity.hpp"

namespace py = pybind11;
using namespace ftnet;

namespace {

using Rows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Point to_point(const Eigen::VectorXd& v) {
  if (v.size() != 2 && v.size() != 3) throw py::value_error("points need 2 or 3 coordinates");
  return Point(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
}

std::vector<Point> to_points(const Rows& m) {
  if (m.cols() != 2 && m.cols() != 3) throw py::value_error("points need 2 or 3 columns");
  std::vector<Point> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_point(m.row(i).transpose()));
  return out;
}

Rows from_points(const std::vector<Point>& v) {
  Rows m(static_cast<Eigen::Index>(v.size()), 3);
  for (std::size_t i = 0; i < v.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
  return m;
}

template <std::size_t N>
std::array<Point, N> fixed_points(const Rows& m) {
  const std::vector<Point> v = to_points(m);
  if (v.size() != N) throw py::value_error("expected " + std::to_string(N) + " points");
  std::array<Point, N> out;
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

BoundaryConfiguration config_of(const Rows& points, const std::vector<double>& weights) {
  return BoundaryConfiguration{to_points(points), weights};
}

AngleSystem angle_system(const std::vector<double>& a) {
  if (a.size() == 5) return AngleSystem::tetrahedral(a[0], a[1], a[2], a[3], a[4]);
  if (a.size() == 7) return AngleSystem::hexahedral(a[0], a[1], a[2], a[3], a[4], a[5], a[6]);
  throw py::value_error("expected 5 angles (a102, a103, a104, a203, a204) or 7");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted Fermat-Torricelli forward, inverse and plasticity solvers";

  static py::exception<Error> error_type(m, "FtnetError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(std::string(to_string(e.code())), e.what());
      PyErr_SetObject(error_type.ptr(), args.ptr());
    }
  });

  py::class_<FtSolution>(m, "FtSolution")
      .def_readonly("point", &FtSolution::point)
      .def_property_readonly("floating", [](const FtSolution& s) { return s.ft_case.floating(); })
      .def_property_readonly("absorbed_vertex", [](const FtSolution& s) { return s.ft_case.absorbed_vertex; })
      .def_readonly("objective", &FtSolution::objective)
      .def_readonly("kkt_residual", &FtSolution::kkt_residual)
      .def_readonly("iterations", &FtSolution::iterations);

  py::class_<MixedWeightSet>(m, "MixedWeightSet")
      .def_readonly("weights", &MixedWeightSet::weights)
      .def_readonly("residual", &MixedWeightSet::residual)
      .def_readonly("total", &MixedWeightSet::total)
      .def_readonly("outflow", &MixedWeightSet::outflow)
      .def("budget_defect", &MixedWeightSet::budget_defect)
      .def("balance_defect", &MixedWeightSet::balance_defect)
      .def("conserved", &MixedWeightSet::conserved, py::arg("tol") = 1e-10);

  py::class_<PlasticityState>(m, "PlasticityState")
      .def_readonly("weights", &PlasticityState::global)
      .def_readonly("split", &PlasticityState::split)
      .def_readonly("sub_ratio", &PlasticityState::sub_ratio);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("minimizer", &OracleResult::minimizer)
      .def_readonly("objective", &OracleResult::objective)
      .def_readonly("levels", &OracleResult::levels)
      .def_readonly("box_lo", &OracleResult::box_lo)
      .def_readonly("box_hi", &OracleResult::box_hi);

  // ---- forward
  m.def(
      "objective",
      [](const Rows& points, const std::vector<double>& weights, const Eigen::VectorXd& x) {
        return objective(config_of(points, weights), to_point(x));
      },
      py::arg("points"), py::arg("weights"), py::arg("x"));
  m.def(
      "classify",
      [](const Rows& points, const std::vector<double>& weights, double tol) {
        return classify(config_of(points, weights), tol).absorbed_vertex;
      },
      py::arg("points"), py::arg("weights"), py::arg("tol") = 1e-10,
      "Index of the absorbing vertex, or None when the FT point floats.");
  m.def(
      "solve",
      [](const Rows& points, const std::vector<double>& weights, double tol, int max_iter) {
        SolveOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        return solve(config_of(points, weights), o);
      },
      py::arg("points"), py::arg("weights"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000);

  // ---- angle algebra
  m.def(
      "cos_alpha_candidates",
      [](const std::vector<double>& angles, int i, int j) {
        const AngleSystem sys = angle_system(angles);
        const RootPair r = (j == 5) ? cos_alpha_extended(sys, i, j) : cos_alpha_candidates(sys, i, j);
        return py::make_tuple(r.opposite, r.same);
      },
      py::arg("angles"), py::arg("i") = 3, py::arg("j") = 4,
      "(opposite, same) hemisphere roots for cos(angle(i, j)).");
  m.def(
      "measure_angles",
      [](const Eigen::VectorXd& a0, const Rows& points) {
        const std::vector<Point> v = to_points(points);
        const AngleSystem s = AngleSystem::measure(to_point(a0), v);
        std::vector<double> out{s.base_angle()};
        for (int i = 3; i <= s.ray_count(); ++i) out.push_back(s.angle_to_first(i));
        for (int i = 3; i <= s.ray_count(); ++i) out.push_back(s.angle_to_second(i));
        return py::make_tuple(out, hemisphere_bits(to_point(a0), v));
      },
      py::arg("a0"), py::arg("points"),
      "Defining angles (a102, a10i..., a20i...) and hemisphere bits seen from a0.");

  // ---- inverse
  m.def(
      "mixed_inverse_tetrahedron",
      [](const Eigen::VectorXd& a0, const Rows& points, double c, double residual, int outflow) {
        return mixed_inverse_tetrahedron(RaySystem::from_points(to_point(a0), to_points(points)), c, residual,
                                         outflow);
      },
      py::arg("a0"), py::arg("points"), py::arg("c"), py::arg("residual"), py::arg("outflow") = 4);
  m.def(
      "mixed_inverse_tetrahedron_angles",
      [](const std::vector<double>& angles, double c, double residual, std::vector<int> bits, int outflow) {
        return mixed_inverse_tetrahedron(angle_system(angles), c, residual, bits, outflow);
      },
      py::arg("angles"), py::arg("c"), py::arg("residual"), py::arg("bits") = std::vector<int>{1, -1},
      py::arg("outflow") = 4);
  m.def(
      "inverse_tetrahedron",
      [](const Eigen::VectorXd& a0, const Rows& points, double c) {
        return inverse_tetrahedron(RaySystem::from_points(to_point(a0), to_points(points)), c);
      },
      py::arg("a0"), py::arg("points"), py::arg("c") = 1.0);
  m.def(
      "residual_for_unique_inverse_tetra",
      [](const Eigen::VectorXd& a0, const Rows& points, double c) {
        return residual_for_unique_inverse_tetra(RaySystem::from_points(to_point(a0), to_points(points)), c);
      },
      py::arg("a0"), py::arg("points"), py::arg("c") = 1.0);
  m.def("mixed_inverse_triangle", &mixed_inverse_triangle, py::arg("a102"), py::arg("a103"), py::arg("c"),
        py::arg("residual"), py::arg("outflow") = 3);
  m.def("inverse_triangle", &inverse_triangle, py::arg("a102"), py::arg("a103"), py::arg("c") = 1.0,
        py::arg("outflow") = 3);
  m.def("residual_for_unique_inverse_triangle", &residual_for_unique_inverse_triangle, py::arg("a102"),
        py::arg("a103"), py::arg("c") = 1.0, py::arg("outflow") = 3);
  m.def(
      "partial_distance_derivatives",
      [](const Eigen::VectorXd& a0, const Rows& points) {
        return partial_distance_derivatives(to_point(a0), to_points(points));
      },
      py::arg("a0"), py::arg("points"));

  // ---- plasticity
  m.def(
      "hexahedron_plasticity",
      [](const Eigen::VectorXd& a0, const Rows& points, double c, double b5, std::array<double, 3> split) {
        return hexahedron_plasticity(HexahedronGeometry{to_point(a0), fixed_points<5>(points)}, c, b5, split);
      },
      py::arg("a0"), py::arg("points"), py::arg("c"), py::arg("b5"),
      py::arg("split") = std::array<double, 3>{1.0 / 3, 1.0 / 3, 1.0 / 3});
  m.def(
      "feasible_b5_interval",
      [](const Eigen::VectorXd& a0, const Rows& points, double c) {
        const WeightInterval w = feasible_b5_interval(HexahedronGeometry{to_point(a0), fixed_points<5>(points)}, c);
        return py::make_tuple(w.lo, w.hi);
      },
      py::arg("a0"), py::arg("points"), py::arg("c") = 1.0);
  m.def(
      "quadrilateral_plasticity",
      [](const Eigen::VectorXd& a0, const Rows& points, double c, double b4) {
        return quadrilateral_plasticity(QuadrilateralGeometry{to_point(a0), fixed_points<4>(points)}, c, b4);
      },
      py::arg("a0"), py::arg("points"), py::arg("c"), py::arg("b4"));
  m.def(
      "feasible_b4_interval",
      [](const Eigen::VectorXd& a0, const Rows& points, double c) {
        const WeightInterval w =
            feasible_b4_interval(QuadrilateralGeometry{to_point(a0), fixed_points<4>(points)}, c);
        return py::make_tuple(w.lo, w.hi);
      },
      py::arg("a0"), py::arg("points"), py::arg("c") = 1.0);
  m.def(
      "geometric_plasticity_transport",
      [](const Rows& points, const std::vector<double>& weights, const std::vector<double>& scales) {
        return from_points(geometric_plasticity_transport(config_of(points, weights), scales).vertices);
      },
      py::arg("points"), py::arg("weights"), py::arg("scales"));

  // ---- oracle
  m.def(
      "brute_force_min",
      [](const Rows& points, const std::vector<double>& weights, int levels, std::uint64_t seed) {
        return brute_force_min(config_of(points, weights), levels, seed);
      },
      py::arg("points"), py::arg("weights"), py::arg("levels") = 8, py::arg("seed") = 0);

  // ---- documents
  m.def(
      "run",
      [](const std::string& command, const std::string& input, std::optional<double> tol,
         std::optional<std::uint64_t> seed, std::optional<int> sweep, bool oracle, bool degrees) {
        cli::Options o;
        o.tol = tol;
        o.seed = seed;
        o.sweep = sweep;
        o.oracle = oracle;
        o.degrees = degrees;
        const cli::Outcome r = cli::run(command, o, input);
        return py::make_tuple(r.exit_code, r.out, r.err);
      },
      py::arg("command"), py::arg("input"), py::arg("tol") = std::nullopt, py::arg("seed") = std::nullopt,
      py::arg("sweep") = std::nullopt, py::arg("oracle") = false, py::arg("degrees") = false,
      "Run a CLI command on a JSON document; returns (exit_code, stdout, stderr).");
}
