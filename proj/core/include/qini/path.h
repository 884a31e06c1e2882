#ifndef QINI_PATH_H_
#define QINI_PATH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qini/frame.h"
#include "qini/hull.h"

namespace qini {

// One (unit, arm) allocation on the solution path. `spend` and `gain` are the
// cumulative weighted averages after this allocation.
struct PathEvent {
  std::size_t row = 0;   // row of the unit in the frame
  int unit_id = 0;
  int arm_id = 0;
  int column = 0;        // column of arm_id in the frame
  double rho = 0.0;      // priority at which the allocation fired
  double spend = 0.0;
  double gain = 0.0;
  // Index of the unit's previous event, or -1 for a fresh allocation.
  std::int64_t previous = -1;

  bool is_upgrade() const { return previous >= 0; }
};

// The allocation sequence traced by the priority-queue path algorithm.
//
// Spend is strictly increasing across events and the priorities are
// non-increasing. When the walk stopped because spend exceeded `b_max`, the
// last event is the overshooting one and `complete` is false; intermediate
// budgets up to and including b_max interpolate into it. `complete` is true
// when every hull arm was allocated, i.e. the curve has plateaued.
struct SolutionPath {
  std::vector<PathEvent> events;
  bool complete = true;
  double b_max = 0.0;
  std::size_t num_units = 0;
  std::size_t num_arms = 0;
  double total_weight = 0.0;

  double final_spend() const { return events.empty() ? 0.0 : events.back().spend; }
  double final_gain() const { return events.empty() ? 0.0 : events.back().gain; }
};

struct ArmShare {
  int arm_id = 0;
  double fraction = 0.0;

  friend bool operator==(const ArmShare&, const ArmShare&) = default;
};

// Arm allocation of every unit at one budget. A unit holds at most two
// shares whose fractions sum to at most 1; at most one unit in the whole
// assignment is fractional.
struct PolicyAssignment {
  std::vector<std::vector<ArmShare>> units;
  double budget = 0.0;
  double spend = 0.0;  // realized weighted average spend
};

// Hull arms of every unit of a frame, stored contiguously.
class HullTable {
 public:
  explicit HullTable(const EvalFrame& frame);

  std::size_t num_units() const { return offsets_.size() - 1; }
  std::span<const HullArm> arms(std::size_t row) const {
    return {arms_.data() + offsets_[row], offsets_[row + 1] - offsets_[row]};
  }
  // Column of the frame holding the j-th hull arm of `row`.
  int column(std::size_t row, std::size_t j) const {
    return columns_[offsets_[row] + j];
  }

 private:
  std::vector<HullArm> arms_;
  std::vector<int> columns_;
  std::vector<std::size_t> offsets_;
};

// A unit taking part in a path computation with its weight.
struct WeightedRow {
  std::size_t row = 0;
  double weight = 1.0;
};

// Traces the path for all units of `frame` up to average spend `b_max`
// (which may be +infinity). Throws InvalidArgumentError when b_max <= 0.
SolutionPath ComputePath(const EvalFrame& frame, double b_max);

// Same walk over a subset of rows with explicit weights, reusing hulls
// computed once for the whole frame. Used by the bootstrap.
SolutionPath ComputePath(const EvalFrame& frame, const HullTable& hulls,
                         std::span<const WeightedRow> rows, double b_max);

// Policy at budget B reconstructed from the events: allocations up to B are
// replayed in full, the event straddling B is split fractionally. Beyond the
// final spend the last integer allocation is returned.
PolicyAssignment AssignmentAt(const SolutionPath& path, double budget);

// Q(B): piecewise-linear interpolation of cumulative gain in cumulative
// spend; 0 for B <= 0; constant past the final event.
double GainAt(const SolutionPath& path, double budget);

// GainAt over an increasing grid in one merge pass.
std::vector<double> GainOnGrid(const SolutionPath& path,
                               std::span<const double> grid);

// Multi-armed thresholding rule: each unit gets the hull arm whose rho
// interval straddles `lambda`; at an exact tie rho == lambda the upgraded-to
// arm receives share c and the arm below it 1 - c.
PolicyAssignment ThresholdPolicy(const EvalFrame& frame, double lambda,
                                 double c);

// Weighted average of <allocation, values> over units, e.g. the gain of an
// assignment under scores or under tau_hat.
double AssignmentValue(const PolicyAssignment& assignment,
                       const EvalFrame& frame, const Matrix& values);

}  // namespace qini

#endif  // QINI_PATH_H_
