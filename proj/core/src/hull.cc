#include "qini/hull.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "qini/error.h"

namespace qini {
namespace {

// > 0 when `a` lies strictly above the line from `o` to `b`.
double Turn(double oc, double oe, double ac, double ae, double bc, double be) {
  return (ae - oe) * (bc - oc) - (ac - oc) * (be - oe);
}

}  // namespace

void AppendConvexHull(std::span<const ArmPoint> points,
                      std::vector<ArmPoint>& scratch,
                      std::vector<HullArm>& out) {
  scratch.clear();
  for (const ArmPoint& p : points) {
    if (p.effect > 0.0) scratch.push_back(p);
  }
  if (scratch.empty()) return;

  std::sort(scratch.begin(), scratch.end(),
            [](const ArmPoint& a, const ArmPoint& b) {
              if (a.cost != b.cost) return a.cost < b.cost;
              if (a.effect != b.effect) return a.effect > b.effect;
              return a.arm_id < b.arm_id;
            });

  const std::size_t base = out.size();
  auto size = [&] { return out.size() - base; };

  double last_cost = 0.0;
  for (const ArmPoint& p : scratch) {
    if (size() > 0 && p.cost == last_cost) continue;  // cost tie, first wins
    last_cost = p.cost;
    if (size() > 0 && p.effect <= out.back().effect) continue;
    while (size() > 0) {
      const HullArm& a = out.back();
      const double oc = size() > 1 ? out[out.size() - 2].cost : 0.0;
      const double oe = size() > 1 ? out[out.size() - 2].effect : 0.0;
      if (Turn(oc, oe, a.cost, a.effect, p.cost, p.effect) > 0.0) break;
      out.pop_back();
    }
    out.push_back(HullArm{p.arm_id, p.cost, p.effect, 0.0});
  }

  // Materialize rho. The cross-product test and the quotient can disagree on
  // nearly collinear triples; drop the middle arm when they do so that rho
  // stays strictly decreasing.
  std::size_t kept = base;
  for (std::size_t i = base; i < out.size(); ++i) {
    HullArm arm = out[i];
    for (;;) {
      const double pc = kept > base ? out[kept - 1].cost : 0.0;
      const double pe = kept > base ? out[kept - 1].effect : 0.0;
      arm.rho = (arm.effect - pe) / (arm.cost - pc);
      if (kept == base || arm.rho < out[kept - 1].rho) break;
      --kept;
    }
    out[kept++] = arm;
  }
  out.resize(kept);
}

HullSequence ComputeConvexHull(std::span<const ArmPoint> points, int unit_id) {
  std::unordered_set<int> ids;
  for (const ArmPoint& p : points) {
    if (!std::isfinite(p.cost) || p.cost <= 0.0) {
      throw InvalidArgumentError("arm " + std::to_string(p.arm_id) +
                                 ": cost must be positive and finite");
    }
    if (!std::isfinite(p.effect)) {
      throw InvalidArgumentError("arm " + std::to_string(p.arm_id) +
                                 ": effect must be finite");
    }
    if (!ids.insert(p.arm_id).second) {
      throw InvalidArgumentError("duplicate arm id " +
                                 std::to_string(p.arm_id));
    }
  }
  HullSequence hull;
  hull.unit_id = unit_id;
  std::vector<ArmPoint> scratch;
  AppendConvexHull(points, scratch, hull.arms);
  return hull;
}

}  // namespace qini
