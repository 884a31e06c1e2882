#ifndef QINI_HULL_H_
#define QINI_HULL_H_

#include <span>
#include <vector>

namespace qini {

// One treatment arm of a unit on the (cost, effect) plane. Costs and effects
// are contrasts against the zero-cost control arm.
struct ArmPoint {
  int arm_id = 0;
  double cost = 0.0;
  double effect = 0.0;
};

// An arm retained on the upper-left convex hull. `rho` is the incremental
// cost-benefit ratio of upgrading to this arm from the previous hull arm (or
// from the control at the origin for the first arm).
struct HullArm {
  int arm_id = 0;
  double cost = 0.0;
  double effect = 0.0;
  double rho = 0.0;

  friend bool operator==(const HullArm&, const HullArm&) = default;
};

// Hull arms of one unit, ordered by increasing cost. Along the sequence cost
// and effect are strictly increasing and rho strictly decreasing and
// positive. Empty when no arm has a positive effect.
struct HullSequence {
  int unit_id = 0;
  std::vector<HullArm> arms;
};

// Reduces `points` to the arms on the upper-left convex hull of
// {(0,0)} u points, excluding the origin.
//
// Ties in cost keep the larger effect, then the smaller arm_id. Points that
// are collinear with their hull neighbours are dropped. Membership is decided
// with cross products of differences; rho is formed only for retained arms.
//
// Throws InvalidArgumentError on non-positive or non-finite costs, non-finite
// effects, or duplicated arm ids.
HullSequence ComputeConvexHull(std::span<const ArmPoint> points,
                               int unit_id = 0);

// Variant for hot loops over many units: appends the hull arms to `out`,
// using `scratch` as working storage. Inputs are assumed validated. Same
// ordering and tie-breaking as ComputeConvexHull.
void AppendConvexHull(std::span<const ArmPoint> points,
                      std::vector<ArmPoint>& scratch,
                      std::vector<HullArm>& out);

}  // namespace qini

#endif  // QINI_HULL_H_
