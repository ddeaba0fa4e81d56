#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ftnet/cli.hpp"

using namespace ftnet::cli;
using doctest::Approx;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(FTNET_DATA_DIR) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json error_of(const Outcome& o) { return json::parse(o.err)["error"]; }

}  // namespace

TEST_CASE("solve the regular tetrahedron") {
  const Outcome o = run("solve", {}, read_data("regular_tetrahedron.json"));
  REQUIRE(o.exit_code == kExitOk);
  const json r = json::parse(o.out);
  CHECK(r["kind"] == "forward");
  CHECK(r["outputs"]["case"]["kind"] == "floating");
  for (const auto& [key, value] : r["outputs"]["angles"].items()) {
    CHECK(value.get<double>() == Approx(std::acos(-1.0 / 3)).epsilon(1e-10));
  }
  CHECK(r["outputs"]["angles"].size() == 6);
}

TEST_CASE("mixed inverse of the equiangular triangle") {
  const Outcome o = run("mixed-inverse", {}, read_data("equiangular_triangle.json"));
  REQUIRE(o.exit_code == kExitOk);
  const json out = json::parse(o.out)["outputs"];
  for (const auto& w : out["weights"]) CHECK(w.get<double>() == Approx(1.0 / 3).epsilon(1e-12));
  CHECK(out["conserved"] == true);
}

TEST_CASE("documents round trip") {
  for (const char* name : {"regular_tetrahedron.json", "equiangular_triangle.json", "regular_simplex_angles.json",
                           "hexahedron.json", "square.json", "absorbed_triangle.json"}) {
    const json raw = json::parse(read_data(name));
    const ProblemDocument doc = ProblemDocument::parse(raw);
    CHECK(doc.to_json() == raw);
    CHECK(ProblemDocument::parse(doc.to_json()).to_json() == doc.to_json());
  }
}

TEST_CASE("runs are deterministic") {
  const std::string in = read_data("absorbed_triangle.json");
  const Outcome a = run("verify", {}, in);
  const Outcome b = run("verify", {}, in);
  CHECK(a.exit_code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["outputs"]["case"]["vertex"] == 3);
}

TEST_CASE("validation errors point at the field") {
  Outcome o = run("solve", {}, read_data("missing_weights.json"));
  CHECK(o.exit_code == kExitValidation);
  CHECK(o.out.empty());
  CHECK(error_of(o)["pointer"] == "/geometry/weights");

  o = run("inverse", {}, read_data("regular_tetrahedron.json"));
  CHECK(o.exit_code == kExitValidation);
  CHECK(error_of(o)["pointer"] == "/kind");

  json doc = json::parse(read_data("square.json"));
  doc["parameters"]["colour"] = 1;
  o = run("plasticity-quad", {}, doc.dump());
  CHECK(o.exit_code == kExitValidation);
  CHECK(error_of(o)["pointer"] == "/parameters/colour");

  doc = json::parse(read_data("regular_tetrahedron.json"));
  doc["geometry"]["weights"][1] = "heavy";
  o = run("solve", {}, doc.dump());
  CHECK(o.exit_code == kExitValidation);
  CHECK(error_of(o)["pointer"] == "/geometry/weights/1");

  o = run("solve", {}, "{not json");
  CHECK(o.exit_code == kExitValidation);
  o = run("frobnicate", {}, "{}");
  CHECK(o.exit_code == kExitValidation);

  doc = json::parse(read_data("regular_tetrahedron.json"));
  doc["version"] = "2";
  CHECK(run("solve", {}, doc.dump()).exit_code == kExitValidation);
}

TEST_CASE("numerical failures exit 3 with diagnostics") {
  json doc = json::parse(R"({"kind": "forward", "geometry": {"points": [[0,0,0],[3,0,0],[0,1,0],[1,1,2]],
      "weights": [1, 2, 1.5, 1]}, "parameters": {"max_iter": 1, "tol": 1e-300}})");
  const Outcome o = run("solve", {}, doc.dump());
  CHECK(o.exit_code == kExitNumerical);
  const json e = error_of(o);
  CHECK(e["kind"] == "MaxIterationsExceeded");
  CHECK(e["diagnostics"]["best_iterate"].size() == 3);
}

TEST_CASE("plasticity documents") {
  Outcome o = run("plasticity-quad", {}, read_data("square.json"));
  REQUIRE(o.exit_code == kExitOk);
  json out = json::parse(o.out)["outputs"];
  for (const auto& w : out["weights"]) CHECK(w.get<double>() == Approx(0.25).epsilon(1e-12));
  CHECK(out["residual"].get<double>() == Approx(0.5));

  o = run("plasticity-hexa", {}, read_data("hexahedron.json"));
  REQUIRE(o.exit_code == kExitOk);
  out = json::parse(o.out)["outputs"];
  CHECK(out["conserved"] == true);
  CHECK(out["weights"].size() == 5);
}

TEST_CASE("sweeps") {
  Options opt;
  opt.sweep = 21;
  Outcome o = run("plasticity-quad", opt, read_data("square.json"));
  REQUIRE(o.exit_code == kExitOk);
  std::istringstream lines(o.out);
  std::string header, line;
  std::getline(lines, header);
  CHECK(header.rfind("b4,", 0) == 0);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const double deviation = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(deviation <= 1e-8);
  }
  CHECK(rows == 21);

  // Hexahedron columns are affine in B5.
  o = run("plasticity-hexa", opt, read_data("hexahedron.json"));
  REQUIRE(o.exit_code == kExitOk);
  std::istringstream hexa(o.out);
  std::getline(hexa, header);
  std::vector<std::vector<double>> table;
  while (std::getline(hexa, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    table.push_back(row);
  }
  REQUIRE(table.size() == 21);
  for (std::size_t col = 0; col < 6; ++col) {
    for (std::size_t k = 1; k + 1 < table.size(); ++k) {
      CHECK(table[k][col] == Approx(0.5 * (table[k - 1][col] + table[k + 1][col])).epsilon(1e-9));
    }
  }

  opt.sweep = 1;
  o = run("plasticity-quad", opt, read_data("square.json"));
  REQUIRE(o.exit_code == kExitOk);
  std::istringstream one(o.out);
  std::getline(one, header);
  std::getline(one, line);
  CHECK(std::stod(line.substr(0, line.find(','))) == Approx(0.25));
  CHECK_FALSE(std::getline(one, line));
}

TEST_CASE("angles document") {
  Options opt;
  const Outcome o = run("angles", opt, read_data("regular_simplex_angles.json"));
  REQUIRE(o.exit_code == kExitOk);
  const json roots = json::parse(o.out)["outputs"]["roots"]["34"];
  CHECK(roots["opposite"].get<double>() == Approx(-1.0 / 3).epsilon(1e-12));
  CHECK(roots["same"].get<double>() == Approx(1.0).epsilon(1e-12));
}
