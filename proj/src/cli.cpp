#include "ftnet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "ftnet/angles.hpp"
#include "ftnet/errors.hpp"
#include "ftnet/forward.hpp"
#include "ftnet/inverse.hpp"
#include "ftnet/oracle.hpp"
#include "ftnet/plasticity.hpp"

namespace ftnet::cli {

namespace {

const std::set<std::string> kKinds{"forward",         "inverse",         "mixed-inverse", "plasticity-hexa",
                                   "plasticity-quad", "angles",          "verify"};
const std::set<std::string> kAngleNames{"a102", "a103", "a104", "a105", "a203", "a204", "a205"};

// ---- schema helpers ------------------------------------------------------

void expect_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw DocumentError(ptr, "expected an object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& ptr) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      throw DocumentError(ptr + "/" + key, "unknown field");
    }
  }
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw DocumentError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DocumentError(ptr, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw DocumentError(ptr, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw DocumentError(ptr, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], ptr + "/" + std::to_string(i)));
  return out;
}

std::vector<double> coordinates(const json& j, const std::string& ptr) {
  std::vector<double> p = numbers(j, ptr);
  if (p.size() != 2 && p.size() != 3) throw DocumentError(ptr, "expected 2 or 3 coordinates");
  return p;
}

Geometry parse_geometry(const json& j, const std::string& ptr) {
  expect_object(j, ptr);
  reject_unknown(j, {"points", "weights", "a0", "angles", "bits"}, ptr);
  Geometry g;
  if (j.contains("points")) {
    const json& pts = j["points"];
    const std::string pp = ptr + "/points";
    if (!pts.is_array()) throw DocumentError(pp, "expected an array of points");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string ip = pp + "/" + std::to_string(i);
      out.push_back(coordinates(pts[i], ip));
      if (out.back().size() != out.front().size()) throw DocumentError(ip, "mixed point dimensions");
    }
    g.points = std::move(out);
  }
  if (j.contains("weights")) g.weights = numbers(j["weights"], ptr + "/weights");
  if (j.contains("a0")) {
    g.a0 = coordinates(j["a0"], ptr + "/a0");
    if (g.points && !g.points->empty() && g.points->front().size() != g.a0->size()) {
      throw DocumentError(ptr + "/a0", "dimension differs from the points");
    }
  }
  if (j.contains("angles")) {
    const json& a = j["angles"];
    expect_object(a, ptr + "/angles");
    std::map<std::string, double> out;
    for (const auto& [key, value] : a.items()) {
      const std::string ap = ptr + "/angles/" + key;
      if (!kAngleNames.contains(key)) throw DocumentError(ap, "unknown angle name");
      out[key] = number(value, ap);
    }
    g.angles = std::move(out);
  }
  if (j.contains("bits")) {
    const json& b = j["bits"];
    if (!b.is_array()) throw DocumentError(ptr + "/bits", "expected an array of +1/-1");
    std::vector<int> out;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string bp = ptr + "/bits/" + std::to_string(i);
      const int v = integer(b[i], bp);
      if (v != 1 && v != -1) throw DocumentError(bp, "hemisphere bits are +1 or -1");
      out.push_back(v);
    }
    g.bits = std::move(out);
  }
  return g;
}

Parameters parse_parameters(const json& j, const std::string& ptr) {
  expect_object(j, ptr);
  reject_unknown(j, {"c", "residual", "tol", "seed", "b4", "b5", "split", "levels", "max_iter", "scales", "outflow"},
                 ptr);
  Parameters p;
  auto opt_number = [&](const char* key, std::optional<double>& slot) {
    if (j.contains(key)) slot = number(j[key], ptr + "/" + key);
  };
  auto opt_int = [&](const char* key, std::optional<int>& slot) {
    if (j.contains(key)) slot = integer(j[key], ptr + "/" + key);
  };
  opt_number("c", p.c);
  opt_number("residual", p.residual);
  opt_number("tol", p.tol);
  opt_number("b4", p.b4);
  opt_number("b5", p.b5);
  opt_int("levels", p.levels);
  opt_int("max_iter", p.max_iter);
  opt_int("outflow", p.outflow);
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned()) throw DocumentError(ptr + "/seed", "expected a nonnegative integer");
    p.seed = s.get<std::uint64_t>();
  }
  if (j.contains("split")) {
    const std::vector<double> s = numbers(j["split"], ptr + "/split");
    if (s.size() != 3) throw DocumentError(ptr + "/split", "expected three fractions");
    p.split = std::array<double, 3>{s[0], s[1], s[2]};
  }
  if (j.contains("scales")) p.scales = numbers(j["scales"], ptr + "/scales");
  return p;
}

// ---- dispatch helpers ----------------------------------------------------

struct Context {
  const ProblemDocument& doc;
  const Options& options;

  const Geometry& geometry() const {
    static const Geometry empty;
    return doc.geometry ? *doc.geometry : empty;
  }
  const Parameters& params() const {
    static const Parameters empty;
    return doc.parameters ? *doc.parameters : empty;
  }
  bool degrees() const { return options.degrees || doc.degrees.value_or(false); }
  double tol() const { return options.tol.value_or(params().tol.value_or(1e-10)); }
  std::uint64_t seed() const { return options.seed.value_or(params().seed.value_or(0)); }
  double c() const { return params().c.value_or(1.0); }

  std::size_t dim() const {
    const auto& pts = geometry().points;
    if (pts && !pts->empty()) return pts->front().size();
    return geometry().a0 ? geometry().a0->size() : 3;
  }

  std::vector<Point> points(std::size_t lo, std::size_t hi) const {
    const auto& pts = geometry().points;
    if (!pts) throw DocumentError("/geometry/points", "points are required");
    if (pts->size() < lo || pts->size() > hi) {
      throw DocumentError("/geometry/points", lo == hi ? "expected " + std::to_string(lo) + " points"
                                                        : "expected " + std::to_string(lo) + " to " +
                                                              std::to_string(hi) + " points");
    }
    std::vector<Point> out;
    for (const auto& p : *pts) out.push_back(to_point(p));
    return out;
  }

  Point a0() const {
    if (!geometry().a0) throw DocumentError("/geometry/a0", "a0 is required");
    return to_point(*geometry().a0);
  }

  BoundaryConfiguration config() const {
    std::vector<Point> v = points(3, 5);
    if (!geometry().weights) throw DocumentError("/geometry/weights", "weights are required");
    if (geometry().weights->size() != v.size()) {
      throw DocumentError("/geometry/weights", "expected one weight per point");
    }
    return BoundaryConfiguration{std::move(v), *geometry().weights};
  }

  bool has_angle(const std::string& name) const {
    return geometry().angles && geometry().angles->contains(name);
  }

  double angle(const std::string& name) const {
    if (!has_angle(name)) throw DocumentError("/geometry/angles/" + name, name + " is required");
    const double v = geometry().angles->at(name);
    return degrees() ? v * std::numbers::pi / 180.0 : v;
  }

  HemisphereBits bits(std::size_t n, HemisphereBits fallback) const {
    if (!geometry().bits) return fallback;
    if (geometry().bits->size() != n) {
      throw DocumentError("/geometry/bits", "expected " + std::to_string(n) + " hemisphere bits");
    }
    return *geometry().bits;
  }

  static Point to_point(const std::vector<double>& p) {
    return Point(p[0], p[1], p.size() == 3 ? p[2] : 0.0);
  }

  json point_json(const Point& p) const {
    return dim() == 2 ? json::array({p.x(), p.y()}) : json::array({p.x(), p.y(), p.z()});
  }
};

json case_json(const FtCase& c) {
  if (c.floating()) return {{"kind", "floating"}};
  return {{"kind", "absorbed"}, {"vertex", *c.absorbed_vertex + 1}};
}

json weight_set_json(const MixedWeightSet& s) {
  return {{"weights", s.weights},
          {"residual", s.residual},
          {"total", s.total},
          {"outflow", s.outflow},
          {"budget_defect", s.budget_defect()},
          {"balance_defect", s.balance_defect()},
          {"conserved", s.conserved()}};
}

json interval_json(const WeightInterval& w) {
  return {{"lo", w.lo}, {"hi", w.hi}, {"empty", w.empty()}};
}

std::string pair_key(int i, int j) { return "a" + std::to_string(i) + "0" + std::to_string(j); }

FtSolution solve_with(const Context& ctx, const BoundaryConfiguration& config) {
  SolveOptions opts;
  opts.tol = ctx.tol();
  if (ctx.params().max_iter) opts.max_iter = *ctx.params().max_iter;
  return solve(config, opts);
}

// Forward solve on `weights` at fixed vertices; distance of the FT point to `a0`.
json recovery(const Context& ctx, const std::vector<Point>& vertices, const std::vector<double>& weights,
              const Point& a0) {
  const FtSolution sol = solve_with(ctx, BoundaryConfiguration{vertices, weights});
  return {{"recovered", ctx.point_json(sol.point)}, {"deviation", (sol.point - a0).norm()}};
}

json oracle_json(const Context& ctx, const BoundaryConfiguration& config, const FtSolution& sol) {
  const OracleResult o = brute_force_min(config, ctx.params().levels.value_or(8), ctx.seed());
  const auto vertex = oracle_vertex(config, o);
  json out = {{"minimizer", ctx.point_json(o.minimizer)},
              {"objective", o.objective},
              {"levels", o.levels},
              {"gap", o.objective - sol.objective},
              {"distance", (o.minimizer - sol.point).norm()}};
  out["case"] = vertex ? json{{"kind", "absorbed"}, {"vertex", *vertex + 1}} : json{{"kind", "floating"}};
  return out;
}

// ---- commands ------------------------------------------------------------

json cmd_solve(const Context& ctx, json& diagnostics) {
  const BoundaryConfiguration config = ctx.config();
  const FtSolution sol = solve_with(ctx, config);
  json out = {{"point", ctx.point_json(sol.point)}, {"case", case_json(sol.ft_case)}, {"objective", sol.objective}};
  if (sol.ft_case.floating()) {
    json angles = json::object();
    for (std::size_t i = 0; i < config.size(); ++i) {
      for (std::size_t j = i + 1; j < config.size(); ++j) {
        angles[pair_key(static_cast<int>(i) + 1, static_cast<int>(j) + 1)] =
            angle_at(sol.point, config.vertices[i], config.vertices[j]);
      }
    }
    out["angles"] = angles;
  }
  if (ctx.params().scales) {
    if (!sol.ft_case.floating()) {
      throw Error(ErrorCode::FloatingViolated, "scaling along rays needs a floating configuration");
    }
    const BoundaryConfiguration moved =
        geometric_plasticity_transport(config, sol.point, *ctx.params().scales, ctx.tol());
    json points = json::array();
    for (const Point& p : moved.vertices) points.push_back(ctx.point_json(p));
    out["transported"] = {{"points", points}};
    out["transported"].update(recovery(ctx, moved.vertices, moved.weights, sol.point));
  }
  diagnostics["kkt_residual"] = sol.kkt_residual;
  diagnostics["iterations"] = sol.iterations;
  if (ctx.options.oracle) diagnostics["oracle"] = oracle_json(ctx, config, sol);
  return out;
}

json cmd_inverse(const Context& ctx, bool mixed, json& diagnostics) {
  const double c = ctx.c();
  std::optional<double> residual;
  if (mixed) {
    if (!ctx.params().residual) throw DocumentError("/parameters/residual", "residual is required");
    residual = ctx.params().residual;
  }
  const auto outflow = ctx.params().outflow;

  if (ctx.geometry().points) {
    const std::vector<Point> v = ctx.points(3, 4);
    const Point a0 = ctx.a0();
    MixedWeightSet set;
    double unique = 0.0;
    if (v.size() == 3) {
      const TriangleAngles t = triangle_angles(a0, v);
      const int m = outflow.value_or(3);
      unique = residual_for_unique_inverse_triangle(t.a102, t.a103, c, m);
      set = mixed_inverse_triangle(t.a102, t.a103, c, residual.value_or(unique), m);
    } else {
      const RaySystem rays = RaySystem::from_points(a0, v);
      const int m = outflow.value_or(4);
      unique = residual_for_unique_inverse_tetra(rays, c, m);
      set = mixed_inverse_tetrahedron(rays, c, residual.value_or(unique), m);
    }
    json out = weight_set_json(set);
    out["unique_residual"] = unique;
    diagnostics.update(recovery(ctx, v, set.weights, a0));
    return out;
  }

  if (ctx.has_angle("a104")) {
    const AngleSystem sys = AngleSystem::tetrahedral(ctx.angle("a102"), ctx.angle("a103"), ctx.angle("a104"),
                                                     ctx.angle("a203"), ctx.angle("a204"));
    const HemisphereBits bits = ctx.bits(2, {1, -1});
    const int m = outflow.value_or(4);
    const double unique = residual_for_unique_inverse_tetra(sys, c, bits, m);
    json out = weight_set_json(mixed_inverse_tetrahedron(sys, c, residual.value_or(unique), bits, m));
    out["unique_residual"] = unique;
    return out;
  }
  const double a102 = ctx.angle("a102");
  const double a103 = ctx.angle("a103");
  const int m = outflow.value_or(3);
  const double unique = residual_for_unique_inverse_triangle(a102, a103, c, m);
  json out = weight_set_json(mixed_inverse_triangle(a102, a103, c, residual.value_or(unique), m));
  out["unique_residual"] = unique;
  return out;
}

HexahedronGeometry hexa_geometry(const Context& ctx) {
  const std::vector<Point> v = ctx.points(5, 5);
  HexahedronGeometry g{ctx.a0(), {}};
  std::copy(v.begin(), v.end(), g.vertices.begin());
  return g;
}

QuadrilateralGeometry quad_geometry(const Context& ctx) {
  const std::vector<Point> v = ctx.points(4, 4);
  QuadrilateralGeometry g{ctx.a0(), {}};
  std::copy(v.begin(), v.end(), g.vertices.begin());
  return g;
}

std::array<double, 3> split_of(const Context& ctx) {
  return ctx.params().split.value_or(std::array<double, 3>{1.0 / 3, 1.0 / 3, 1.0 / 3});
}

double free_weight(const std::optional<double>& given, const WeightInterval& interval) {
  if (given) return *given;
  if (interval.empty()) throw Error(ErrorCode::EmptyFeasibleInterval, "no free weight keeps all weights positive");
  return interval.midpoint();
}

json cmd_hexa(const Context& ctx, json& diagnostics) {
  const HexahedronGeometry g = hexa_geometry(ctx);
  const double c = ctx.c();
  const WeightInterval interval = feasible_b5_interval(g, c);
  const double b5 = free_weight(ctx.params().b5, interval);
  const PlasticityState state = hexahedron_plasticity(g, c, b5, split_of(ctx));
  json out = weight_set_json(state.global);
  out["b5"] = b5;
  out["interval"] = interval_json(interval);
  out["split"] = state.split;
  json ratios = json::array();
  json subs = json::array();
  for (int j = 0; j < 3; ++j) {
    ratios.push_back(std::isfinite(state.sub_ratio[j]) ? json(state.sub_ratio[j]) : json(nullptr));
    subs.push_back(state.sub_tetra[j] ? weight_set_json(*state.sub_tetra[j]) : json(nullptr));
  }
  out["sub_ratios"] = ratios;
  out["sub_tetrahedra"] = subs;
  json signs = json::array();
  for (int plane = 1; plane <= 3; ++plane) {
    json row = json::array();
    for (int label = 1; label <= 5; ++label) row.push_back(state.signs.at(label, plane));
    signs.push_back(row);
  }
  out["signs"] = signs;
  diagnostics.update(recovery(ctx, {g.vertices.begin(), g.vertices.end()}, state.global.weights, g.a0));
  return out;
}

json cmd_quad(const Context& ctx, json& diagnostics) {
  const QuadrilateralGeometry g = quad_geometry(ctx);
  const double c = ctx.c();
  const WeightInterval interval = feasible_b4_interval(g, c);
  const double b4 = free_weight(ctx.params().b4, interval);
  const MixedWeightSet set = quadrilateral_plasticity(g, c, b4);
  json out = weight_set_json(set);
  out["b4"] = b4;
  out["interval"] = interval_json(interval);
  diagnostics.update(recovery(ctx, {g.vertices.begin(), g.vertices.end()}, set.weights, g.a0));
  return out;
}

json cmd_angles(const Context& ctx) {
  std::optional<AngleSystem> sys;
  HemisphereBits bits;
  if (ctx.geometry().points) {
    const std::vector<Point> v = ctx.points(4, 5);
    const Point a0 = ctx.a0();
    sys = AngleSystem::measure(a0, v);
    bits = hemisphere_bits(a0, v);
  } else if (ctx.has_angle("a105")) {
    sys = AngleSystem::hexahedral(ctx.angle("a102"), ctx.angle("a103"), ctx.angle("a104"), ctx.angle("a105"),
                                  ctx.angle("a203"), ctx.angle("a204"), ctx.angle("a205"));
    bits = ctx.bits(3, {1, -1, 1});
  } else {
    sys = AngleSystem::tetrahedral(ctx.angle("a102"), ctx.angle("a103"), ctx.angle("a104"), ctx.angle("a203"),
                                   ctx.angle("a204"));
    bits = ctx.bits(2, {1, -1});
  }
  const int n = sys->ray_count();
  json roots = json::object();
  for (int i = 3; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const RootPair r = (j == 5) ? cos_alpha_extended(*sys, i, j) : cos_alpha_candidates(*sys, i, j);
      roots[std::to_string(i) + std::to_string(j)] = {{"opposite", r.opposite}, {"same", r.same}};
    }
  }
  const CosineTable table = CosineTable::from_angles(*sys, bits);
  json cosines = json::array();
  for (int i = 1; i <= n; ++i) {
    json row = json::array();
    for (int j = 1; j <= n; ++j) row.push_back(table.cos(i, j));
    cosines.push_back(row);
  }
  return {{"bits", bits}, {"polar_offsets", polar_offsets(*sys)}, {"roots", roots}, {"cosines", cosines}};
}

json cmd_verify(const Context& ctx, json& diagnostics, bool& passed) {
  const BoundaryConfiguration config = ctx.config();
  const FtSolution sol = solve_with(ctx, config);
  const json oracle = oracle_json(ctx, config, sol);
  const bool agree = oracle["case"] == case_json(sol.ft_case);
  const bool not_worse = oracle["gap"].get<double>() >= -1e-9;
  passed = agree && not_worse;
  diagnostics["kkt_residual"] = sol.kkt_residual;
  diagnostics["iterations"] = sol.iterations;
  return {{"point", ctx.point_json(sol.point)},
          {"case", case_json(sol.ft_case)},
          {"objective", sol.objective},
          {"oracle", oracle},
          {"classification_agrees", agree},
          {"passed", passed}};
}

std::string format_row(std::initializer_list<double> head, const std::vector<double>& mid,
                       std::initializer_list<double> tail) {
  std::string line;
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!line.empty()) line += ',';
    line += buf;
  };
  for (double v : head) put(v);
  for (double v : mid) put(v);
  for (double v : tail) put(v);
  return line + "\n";
}

std::string sweep(const Context& ctx, const std::string& kind, int samples) {
  if (samples < 1) throw DocumentError("", "sweep needs at least one sample");
  const double c = ctx.c();
  std::ostringstream csv;
  if (kind == "plasticity-hexa") {
    const HexahedronGeometry g = hexa_geometry(ctx);
    const WeightInterval interval = feasible_b5_interval(g, c);
    if (interval.empty()) throw Error(ErrorCode::EmptyFeasibleInterval, "no B5 keeps all weights positive");
    const std::vector<Point> v(g.vertices.begin(), g.vertices.end());
    csv << "b5,w1,w2,w3,w4,w5,residual,deviation\n";
    for (int k = 0; k < samples; ++k) {
      const double b5 = interval.lo + (k + 1) * (interval.hi - interval.lo) / (samples + 1);
      const PlasticityState s = hexahedron_plasticity(g, c, b5, split_of(ctx));
      const double dev = (solve_with(ctx, BoundaryConfiguration{v, s.global.weights}).point - g.a0).norm();
      csv << format_row({b5}, s.global.weights, {s.global.residual, dev});
    }
  } else if (kind == "plasticity-quad") {
    const QuadrilateralGeometry g = quad_geometry(ctx);
    const WeightInterval interval = feasible_b4_interval(g, c);
    if (interval.empty()) throw Error(ErrorCode::EmptyFeasibleInterval, "no B4 keeps all weights positive");
    const std::vector<Point> v(g.vertices.begin(), g.vertices.end());
    csv << "b4,w1,w2,w3,w4,residual,deviation\n";
    for (int k = 0; k < samples; ++k) {
      const double b4 = interval.lo + (k + 1) * (interval.hi - interval.lo) / (samples + 1);
      const MixedWeightSet s = quadrilateral_plasticity(g, c, b4);
      const double dev = (solve_with(ctx, BoundaryConfiguration{v, s.weights}).point - g.a0).norm();
      csv << format_row({b4}, s.weights, {s.residual, dev});
    }
  } else {
    throw DocumentError("/kind", "sweeps need a plasticity document");
  }
  return csv.str();
}

std::string kind_for(std::string_view command) {
  if (command == "solve") return "forward";
  const std::string k(command);
  return kKinds.contains(k) && k != "forward" ? k : std::string();
}

}  // namespace

ProblemDocument ProblemDocument::parse(const json& j) {
  expect_object(j, "");
  reject_unknown(j, {"version", "kind", "degrees", "geometry", "parameters"}, "");
  ProblemDocument doc;
  if (j.contains("version")) {
    if (!j["version"].is_string()) throw DocumentError("/version", "expected a string");
    doc.version = j["version"].get<std::string>();
    if (*doc.version != "1") throw DocumentError("/version", "unsupported version");
  }
  if (j.contains("kind")) {
    if (!j["kind"].is_string() || !kKinds.contains(j["kind"].get<std::string>())) {
      throw DocumentError("/kind", "unknown problem kind");
    }
    doc.kind = j["kind"].get<std::string>();
  }
  if (j.contains("degrees")) {
    if (!j["degrees"].is_boolean()) throw DocumentError("/degrees", "expected true or false");
    doc.degrees = j["degrees"].get<bool>();
  }
  if (j.contains("geometry")) doc.geometry = parse_geometry(j["geometry"], "/geometry");
  if (j.contains("parameters")) doc.parameters = parse_parameters(j["parameters"], "/parameters");
  return doc;
}

json ProblemDocument::to_json() const {
  json j = json::object();
  if (version) j["version"] = *version;
  if (kind) j["kind"] = *kind;
  if (degrees) j["degrees"] = *degrees;
  if (geometry) {
    json g = json::object();
    if (geometry->points) g["points"] = *geometry->points;
    if (geometry->weights) g["weights"] = *geometry->weights;
    if (geometry->a0) g["a0"] = *geometry->a0;
    if (geometry->angles) g["angles"] = *geometry->angles;
    if (geometry->bits) g["bits"] = *geometry->bits;
    j["geometry"] = g;
  }
  if (parameters) {
    const Parameters& p = *parameters;
    json o = json::object();
    if (p.c) o["c"] = *p.c;
    if (p.residual) o["residual"] = *p.residual;
    if (p.tol) o["tol"] = *p.tol;
    if (p.seed) o["seed"] = *p.seed;
    if (p.b4) o["b4"] = *p.b4;
    if (p.b5) o["b5"] = *p.b5;
    if (p.split) o["split"] = *p.split;
    if (p.levels) o["levels"] = *p.levels;
    if (p.max_iter) o["max_iter"] = *p.max_iter;
    if (p.scales) o["scales"] = *p.scales;
    if (p.outflow) o["outflow"] = *p.outflow;
    j["parameters"] = o;
  }
  return j;
}

json error_payload(std::string_view kind, std::string_view message, std::optional<std::string> pointer) {
  return {{"error",
           {{"kind", kind}, {"message", message}, {"pointer", pointer ? json(*pointer) : json(nullptr)}}}};
}

std::string emit_sweep(const ProblemDocument& doc, int samples) {
  const Options options;
  const Context ctx{doc, options};
  std::string kind = doc.kind.value_or("");
  if (kind.empty() && doc.geometry && doc.geometry->points) {
    kind = doc.geometry->points->size() == 5 ? "plasticity-hexa" : "plasticity-quad";
  }
  return sweep(ctx, kind, samples);
}

Outcome run(std::string_view command, const Options& options, std::string_view input) {
  Outcome outcome;
  auto fail = [&](int code, const json& payload) {
    outcome.exit_code = code;
    outcome.out.clear();
    outcome.err = payload.dump() + "\n";
  };
  try {
    const std::string kind = kind_for(command);
    if (kind.empty()) throw DocumentError("", "unknown command '" + std::string(command) + "'");
    json raw;
    try {
      raw = json::parse(input);
    } catch (const json::parse_error& e) {
      throw DocumentError("", std::string("input is not valid JSON: ") + e.what());
    }
    const ProblemDocument doc = ProblemDocument::parse(raw);
    if (doc.kind && *doc.kind != kind) {
      throw DocumentError("/kind", "document kind '" + *doc.kind + "' does not match command '" +
                                       std::string(command) + "'");
    }
    const Context ctx{doc, options};
    if (!(ctx.tol() > 0.0)) throw DocumentError("/parameters/tol", "tolerance must be positive");

    if (options.sweep) {
      outcome.out = sweep(ctx, kind, *options.sweep);
      return outcome;
    }

    json diagnostics = json::object();
    json outputs;
    bool passed = true;
    if (kind == "forward") {
      outputs = cmd_solve(ctx, diagnostics);
    } else if (kind == "inverse") {
      outputs = cmd_inverse(ctx, false, diagnostics);
    } else if (kind == "mixed-inverse") {
      outputs = cmd_inverse(ctx, true, diagnostics);
    } else if (kind == "plasticity-hexa") {
      outputs = cmd_hexa(ctx, diagnostics);
    } else if (kind == "plasticity-quad") {
      outputs = cmd_quad(ctx, diagnostics);
    } else if (kind == "angles") {
      outputs = cmd_angles(ctx);
    } else {
      outputs = cmd_verify(ctx, diagnostics, passed);
    }
    const json result = {{"version", "1"},
                         {"kind", kind},
                         {"input", doc.to_json()},
                         {"outputs", outputs},
                         {"diagnostics", diagnostics}};
    outcome.out = result.dump(2) + "\n";
    if (!passed) {
      outcome.exit_code = kExitNumerical;
      outcome.err = error_payload("VerificationFailed", "solver and oracle disagree").dump() + "\n";
    }
  } catch (const DocumentError& e) {
    fail(kExitValidation, error_payload("Validation", e.what(), e.pointer()));
  } catch (const ConvergenceError& e) {
    json payload = error_payload(to_string(e.code()), e.what());
    const Eigen::Vector3d& b = e.best_iterate();
    payload["error"]["diagnostics"] = {
        {"best_iterate", {b.x(), b.y(), b.z()}}, {"residual", e.residual()}, {"iterations", e.iterations()}};
    fail(kExitNumerical, payload);
  } catch (const Error& e) {
    fail(is_input_error(e.code()) ? kExitValidation : kExitNumerical, error_payload(to_string(e.code()), e.what()));
  } catch (const std::exception& e) {
    fail(kExitNumerical, error_payload("Internal", e.what()));
  }
  return outcome;
}

}  // namespace ftnet::cli
