// Brute-force references for the upper-left convex hull. Neither shares code
// with the scan in core/src/hull.cc.
#ifndef QINI_TESTS_HULL_ORACLE_H_
#define QINI_TESTS_HULL_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qini/hull.h"

namespace qini::testing {

// Value at `cost` of the piecewise-linear curve through the origin and
// `chain` (sorted by cost), flat past the last point.
inline double ChainValue(const std::vector<ArmPoint>& chain, double cost) {
  double pc = 0.0, pe = 0.0;
  for (const ArmPoint& p : chain) {
    if (cost <= p.cost) {
      return pe + (p.effect - pe) * (cost - pc) / (p.cost - pc);
    }
    pc = p.cost;
    pe = p.effect;
  }
  return pe;
}

// Enumerates every subset of the positive-effect arms and returns the ids of
// the one subset that (a) forms a chain with strictly increasing cost and
// effect and strictly decreasing slopes, and (b) dominates every other arm.
// Returns {-1} when zero or several subsets qualify. K <= ~16.
inline std::vector<int> SubsetHullOracle(const std::vector<ArmPoint>& points) {
  std::vector<ArmPoint> positive;
  for (const ArmPoint& p : points) {
    if (p.effect > 0.0) positive.push_back(p);
  }
  const std::size_t m = positive.size();
  std::vector<std::vector<int>> found;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<ArmPoint> chain;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) chain.push_back(positive[i]);
    }
    std::sort(chain.begin(), chain.end(),
              [](const ArmPoint& a, const ArmPoint& b) { return a.cost < b.cost; });
    bool ok = true;
    double pc = 0.0, pe = 0.0, prev_slope = 1e300;
    for (const ArmPoint& p : chain) {
      if (!(p.cost > pc) || !(p.effect > pe)) { ok = false; break; }
      const double slope = (p.effect - pe) / (p.cost - pc);
      if (!(slope < prev_slope)) { ok = false; break; }
      prev_slope = slope;
      pc = p.cost;
      pe = p.effect;
    }
    if (!ok) continue;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (mask & (1u << i)) continue;
      if (positive[i].effect > ChainValue(chain, positive[i].cost)) ok = false;
    }
    if (!ok) continue;
    std::vector<int> ids;
    for (const ArmPoint& p : chain) ids.push_back(p.arm_id);
    found.push_back(ids);
  }
  if (found.size() != 1) return {-1};
  return found.front();
}

// O(K^3) membership test: arm a is on the hull iff no single point with
// cost <= c_a (origin included) and no segment between two points spanning
// c_a reaches effect >= e_a. Exact in one dimension since an optimal convex
// combination at fixed cost needs at most two points. Returns hull ids
// sorted by cost.
inline std::vector<int> SegmentHullOracle(const std::vector<ArmPoint>& points) {
  std::vector<ArmPoint> all{{0, 0.0, 0.0}};  // origin
  for (const ArmPoint& p : points) all.push_back(p);
  std::vector<ArmPoint> hull;
  for (std::size_t a = 1; a < all.size(); ++a) {
    const ArmPoint& t = all[a];
    if (!(t.effect > 0.0)) continue;
    bool dominated = false;
    for (std::size_t p = 0; p < all.size() && !dominated; ++p) {
      if (p == a) continue;
      if (all[p].cost <= t.cost && all[p].effect >= t.effect) dominated = true;
      for (std::size_t q = 0; q < all.size() && !dominated; ++q) {
        if (q == a || q == p) continue;
        const ArmPoint& lo = all[p];
        const ArmPoint& hi = all[q];
        if (!(lo.cost <= t.cost && t.cost <= hi.cost && lo.cost < hi.cost)) {
          continue;
        }
        const double v = lo.effect + (hi.effect - lo.effect) *
                                         (t.cost - lo.cost) /
                                         (hi.cost - lo.cost);
        if (v >= t.effect) dominated = true;
      }
    }
    if (!dominated) hull.push_back(t);
  }
  std::sort(hull.begin(), hull.end(),
            [](const ArmPoint& a, const ArmPoint& b) { return a.cost < b.cost; });
  std::vector<int> ids;
  for (const ArmPoint& p : hull) ids.push_back(p.arm_id);
  return ids;
}

}  // namespace qini::testing

#endif  // QINI_TESTS_HULL_ORACLE_H_
