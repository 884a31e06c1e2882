#include "qini/path.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qini/error.h"
#include "qini/numeric.h"

namespace qini {
namespace {

struct QueueEntry {
  double rho;
  int unit_id;
  std::uint32_t slot;   // index into the participating rows
  std::uint32_t next;   // position of the arm on the unit's hull
  int column;           // frame column of the arm
  double cost_delta;    // increments over the unit's previous hull arm
  double score_delta;
};

// Priority order on rho; equal priorities go to the lower unit id first.
struct LowerPriority {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.rho != b.rho) return a.rho < b.rho;
    if (a.unit_id != b.unit_id) return a.unit_id > b.unit_id;
    return a.slot > b.slot;
  }
};

void CheckBudget(double budget, const char* name) {
  if (!(budget > 0.0)) {
    throw InvalidArgumentError(std::string(name) + " must be positive");
  }
}

}  // namespace

HullTable::HullTable(const EvalFrame& frame) {
  const std::size_t n = frame.num_units();
  const std::size_t k = frame.num_arms();
  const std::vector<int>& ids = frame.arm_ids();
  offsets_.reserve(n + 1);
  offsets_.push_back(0);
  arms_.reserve(n * std::min<std::size_t>(k, 2));

  std::vector<ArmPoint> points(k);
  std::vector<ArmPoint> scratch;
  scratch.reserve(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      points[j] = ArmPoint{ids[j], frame.cost()(i, j), frame.tau_hat()(i, j)};
    }
    const std::size_t before = arms_.size();
    AppendConvexHull(points, scratch, arms_);
    for (std::size_t a = before; a < arms_.size(); ++a) {
      columns_.push_back(frame.ColumnOf(arms_[a].arm_id));
    }
    offsets_.push_back(arms_.size());
  }
}

SolutionPath ComputePath(const EvalFrame& frame, double b_max) {
  CheckBudget(b_max, "b_max");
  const HullTable hulls(frame);
  std::vector<WeightedRow> rows(frame.num_units());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = WeightedRow{i, frame.weights()[i]};
  }
  return ComputePath(frame, hulls, rows, b_max);
}

SolutionPath ComputePath(const EvalFrame& frame, const HullTable& hulls,
                         std::span<const WeightedRow> rows, double b_max) {
  CheckBudget(b_max, "b_max");
  if (hulls.num_units() != frame.num_units()) {
    throw InvalidArgumentError("hull table does not belong to the frame");
  }
  SolutionPath path;
  path.b_max = b_max;
  path.num_units = frame.num_units();
  path.num_arms = frame.num_arms();

  CompensatedSum weight_sum;
  for (const WeightedRow& r : rows) {
    if (r.row >= frame.num_units()) {
      throw InvalidArgumentError("row index out of range");
    }
    if (!(r.weight > 0.0) || !std::isfinite(r.weight)) {
      throw InvalidArgumentError("row weights must be positive and finite");
    }
    weight_sum.Add(r.weight);
  }
  path.total_weight = weight_sum.value();
  if (rows.empty()) return path;

  const Matrix& scores = frame.scores();
  const std::vector<int>& unit_ids = frame.unit_ids();

  // Hull ratios fall strictly along each unit's hull, so every arm's
  // predecessor outranks it and the priority-queue pop order equals one
  // global sort of all hull arms. Sorting a flat array is far kinder to the
  // cache than a heap keyed on unit rows.
  std::vector<QueueEntry> order;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const std::size_t row = rows[s].row;
    const auto arms = hulls.arms(row);
    double held_cost = 0.0, held_score = 0.0;
    for (std::size_t j = 0; j < arms.size(); ++j) {
      const int column = hulls.column(row, j);
      const double score = scores(row, static_cast<std::size_t>(column));
      order.push_back(QueueEntry{arms[j].rho, unit_ids[row],
                                 static_cast<std::uint32_t>(s),
                                 static_cast<std::uint32_t>(j), column,
                                 arms[j].cost - held_cost, score - held_score});
      held_cost = arms[j].cost;
      held_score = score;
    }
  }
  std::sort(order.begin(), order.end(),
            [](const QueueEntry& a, const QueueEntry& b) {
              return LowerPriority{}(b, a);
            });

  // An upgrade always refunds the unit's previous hull arm, so its increments
  // were fixed above; only the index of that earlier event is tracked here.
  std::vector<std::int64_t> last_event(rows.size(), -1);
  CompensatedSum spend;
  CompensatedSum gain;
  bool overshot = false;
  std::size_t popped = 0;
  if (std::isinf(b_max)) path.events.reserve(order.size());

  while (spend.value() < b_max && popped < order.size()) {
    const QueueEntry& top = order[popped++];
    const WeightedRow& unit = rows[top.slot];
    const double scale = unit.weight / path.total_weight;
    spend.Add(top.cost_delta * scale);
    gain.Add(top.score_delta * scale);

    const std::int64_t previous = last_event[top.slot];
    last_event[top.slot] = static_cast<std::int64_t>(path.events.size());
    path.events.push_back(PathEvent{
        unit.row, top.unit_id, hulls.arms(unit.row)[top.next].arm_id,
        top.column, top.rho, spend.value(), gain.value(), previous});

    if (spend.value() > b_max) {
      overshot = true;
      break;
    }
  }
  path.complete = popped == order.size() && !overshot;
  return path;
}

PolicyAssignment AssignmentAt(const SolutionPath& path, double budget) {
  CheckBudget(budget, "budget");
  PolicyAssignment out;
  out.budget = budget;
  out.units.assign(path.num_units, {});

  const auto& events = path.events;
  const auto straddle = std::upper_bound(
      events.begin(), events.end(), budget,
      [](double b, const PathEvent& e) { return b < e.spend; });
  for (auto it = events.begin(); it != straddle; ++it) {
    out.units[it->row] = {ArmShare{it->arm_id, 1.0}};
  }
  if (straddle == events.end()) {
    out.spend = path.final_spend();
    return out;
  }

  const double before =
      straddle == events.begin() ? 0.0 : std::prev(straddle)->spend;
  const double c = (budget - before) / (straddle->spend - before);
  out.spend = budget;
  if (c <= 0.0) return out;
  auto& shares = out.units[straddle->row];
  if (straddle->is_upgrade()) {
    const int held = events[static_cast<std::size_t>(straddle->previous)].arm_id;
    shares = {ArmShare{held, 1.0 - c}, ArmShare{straddle->arm_id, c}};
  } else {
    shares = {ArmShare{straddle->arm_id, c}};
  }
  return out;
}

double GainAt(const SolutionPath& path, double budget) {
  if (!(budget > 0.0) || path.events.empty()) return 0.0;
  const auto& events = path.events;
  const auto straddle = std::upper_bound(
      events.begin(), events.end(), budget,
      [](double b, const PathEvent& e) { return b < e.spend; });
  if (straddle == events.end()) return path.final_gain();
  double s0 = 0.0;
  double g0 = 0.0;
  if (straddle != events.begin()) {
    s0 = std::prev(straddle)->spend;
    g0 = std::prev(straddle)->gain;
  }
  const double t = (budget - s0) / (straddle->spend - s0);
  return g0 + t * (straddle->gain - g0);
}

std::vector<double> GainOnGrid(const SolutionPath& path,
                               std::span<const double> grid) {
  std::vector<double> out(grid.size(), 0.0);
  const auto& events = path.events;
  std::size_t e = 0;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double b = grid[g];
    if (b < prev) throw InvalidArgumentError("grid must be increasing");
    prev = b;
    if (!(b > 0.0) || events.empty()) continue;
    while (e < events.size() && events[e].spend <= b) ++e;
    if (e == events.size()) {
      out[g] = path.final_gain();
      continue;
    }
    const double s0 = e == 0 ? 0.0 : events[e - 1].spend;
    const double g0 = e == 0 ? 0.0 : events[e - 1].gain;
    const double t = (b - s0) / (events[e].spend - s0);
    out[g] = g0 + t * (events[e].gain - g0);
  }
  return out;
}

PolicyAssignment ThresholdPolicy(const EvalFrame& frame, double lambda,
                                 double c) {
  if (!(lambda >= 0.0)) throw InvalidArgumentError("lambda must be >= 0");
  if (!(c >= 0.0 && c < 1.0)) {
    throw InvalidArgumentError("interpolation value must lie in [0, 1)");
  }
  const HullTable hulls(frame);
  PolicyAssignment out;
  out.units.assign(frame.num_units(), {});
  for (std::size_t i = 0; i < frame.num_units(); ++i) {
    const auto arms = hulls.arms(i);
    std::size_t above = 0;  // arms with rho > lambda form a prefix
    while (above < arms.size() && arms[above].rho > lambda) ++above;
    auto& shares = out.units[i];
    if (above < arms.size() && arms[above].rho == lambda) {
      if (above > 0) {
        shares.push_back(ArmShare{arms[above - 1].arm_id, 1.0 - c});
      }
      if (c > 0.0) shares.push_back(ArmShare{arms[above].arm_id, c});
    } else if (above > 0) {
      shares.push_back(ArmShare{arms[above - 1].arm_id, 1.0});
    }
  }
  out.spend = AssignmentValue(out, frame, frame.cost());
  out.budget = out.spend;
  return out;
}

double AssignmentValue(const PolicyAssignment& assignment,
                       const EvalFrame& frame, const Matrix& values) {
  if (assignment.units.size() != frame.num_units() ||
      values.rows() != frame.num_units() || values.cols() != frame.num_arms()) {
    throw InvalidArgumentError("assignment does not match the frame");
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < frame.num_units(); ++i) {
    for (const ArmShare& share : assignment.units[i]) {
      const int col = frame.ColumnOf(share.arm_id);
      if (col < 0) throw InvalidArgumentError("assignment uses unknown arm");
      total.Add(frame.weights()[i] * share.fraction *
                values(i, static_cast<std::size_t>(col)));
    }
  }
  return total.value() / frame.total_weight();
}

}  // namespace qini
