#include "ftnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ftnet/errors.hpp"

namespace ftnet {

namespace {

constexpr int kKeep = 6;
constexpr int kCoarse = 17;
constexpr int kPatch = 4;  // steps on each side of a candidate
constexpr int kMaxPasses = 64;

struct Candidate {
  Point x;
  double f;
};

// Keeps the kKeep lowest values; earlier insertions win ties within 1e-15.
class Best {
 public:
  void offer(const Point& x, double f) {
    auto it = items_.begin();
    while (it != items_.end() && it->f <= f + 1e-15) ++it;
    if (it - items_.begin() >= kKeep) return;
    items_.insert(it, Candidate{x, f});
    if (static_cast<int>(items_.size()) > kKeep) items_.pop_back();
  }
  const std::vector<Candidate>& items() const { return items_; }

 private:
  std::vector<Candidate> items_;
};

}  // namespace

OracleResult brute_force_min(const BoundaryConfiguration& config, int levels,
                             std::uint64_t seed) {
  config.validate();
  if (levels < 3) throw Error(ErrorCode::Validation, "oracle needs at least 3 levels");

  Point lo = config.vertices.front();
  Point hi = lo;
  for (const Point& p : config.vertices) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double diam = diameter(config.vertices);
  Vec3 step;
  std::array<bool, 3> flat{};
  for (int a = 0; a < 3; ++a) {
    flat[a] = hi[a] - lo[a] <= kCoincidenceTol * std::max(1.0, diam);
    step[a] = flat[a] ? 0.0 : (hi[a] - lo[a]) / (kCoarse - 1);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  Vec3 offset;
  for (int a = 0; a < 3; ++a) offset[a] = flat[a] ? 0.0 : jitter(rng) * step[a];

  auto clamp_box = [&](Point p) { return p.cwiseMax(lo).cwiseMin(hi); };

  Best best;
  for (const Point& v : config.vertices) best.offer(v, objective(config, v));
  const int nx = flat[0] ? 1 : kCoarse;
  const int ny = flat[1] ? 1 : kCoarse;
  const int nz = flat[2] ? 1 : kCoarse;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nz; ++k) {
        const Point p = clamp_box(lo + offset + Vec3(i * step[0], j * step[1], k * step[2]));
        best.offer(p, objective(config, p));
      }
    }
  }

  // One patch pass around the current candidates. Patches are shifted off
  // the lattice of their center so that a vertex center does not hide a
  // descent cone narrower than one step.
  auto sweep = [&]() {
    for (int a = 0; a < 3; ++a) offset[a] = flat[a] ? 0.0 : jitter(rng) * step[a];
    const int rx = flat[0] ? 0 : kPatch;
    const int ry = flat[1] ? 0 : kPatch;
    const int rz = flat[2] ? 0 : kPatch;
    Best next;
    for (const Point& v : config.vertices) next.offer(v, objective(config, v));
    for (const Candidate& c : best.items()) {
      next.offer(c.x, c.f);
      for (int i = -rx; i <= rx; ++i) {
        for (int j = -ry; j <= ry; ++j) {
          for (int k = -rz; k <= rz; ++k) {
            const Point p = clamp_box(c.x + offset + Vec3(i * step[0], j * step[1], k * step[2]));
            next.offer(p, objective(config, p));
          }
        }
      }
    }
    best = next;
  };

  // Each level recenters until the best value stalls, so candidates can
  // travel along narrow valleys before the step shrinks.
  for (int level = 0; level < levels; ++level) {
    if (level > 0) step /= 4.0;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
      const double before = best.items().front().f;
      sweep();
      if (best.items().front().f >= before - 1e-15 * std::max(1.0, before)) break;
    }
  }

  const Candidate& top = best.items().front();
  return OracleResult{top.x, top.f, levels, lo, hi};
}

std::optional<std::size_t> oracle_vertex(const BoundaryConfiguration& config,
                                         const OracleResult& result) {
  const double radius = kCoincidenceTol * std::max(1.0, diameter(config.vertices));
  for (std::size_t i = 0; i < config.size(); ++i) {
    if ((result.minimizer - config.vertices[i]).norm() <= radius) return i;
  }
  return std::nullopt;
}

std::vector<double> finite_diff(const ScalarField& f, std::span<const double> x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::Validation, "step must be positive and finite");
  }
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  auto eval = [&]() {
    double value;
    try {
      value = f(probe);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::EvaluationFailed, std::string("function failed: ") + e.what());
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::EvaluationFailed, "function returned a non-finite value");
    }
    return value;
  };
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = eval();
    probe[i] = x[i] - h;
    const double down = eval();
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace ftnet
