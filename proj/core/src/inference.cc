#include "qini/inference.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "qini/error.h"
#include "qini/numeric.h"
#include "qini/random.h"

namespace qini {
namespace {

// One pseudo-unit whose arm k carries the weighted means of tau_hat, cost
// and scores over `rows`.
EvalFrame AverageFrame(const EvalFrame& frame,
                       std::span<const WeightedRow> rows) {
  const std::size_t k = frame.num_arms();
  Matrix tau(1, k), cost(1, k), scores(1, k);
  CompensatedSum weight;
  for (const WeightedRow& r : rows) weight.Add(r.weight);
  for (std::size_t j = 0; j < k; ++j) {
    CompensatedSum t, c, s;
    for (const WeightedRow& r : rows) {
      t.Add(r.weight * frame.tau_hat()(r.row, j));
      c.Add(r.weight * frame.cost()(r.row, j));
      s.Add(r.weight * frame.scores()(r.row, j));
    }
    tau(0, j) = t.value() / weight.value();
    cost(0, j) = c.value() / weight.value();
    scores(0, j) = s.value() / weight.value();
  }
  return EvalFrame(std::move(tau), std::move(cost), std::move(scores), {},
                   {0}, frame.arm_ids());
}

std::vector<WeightedRow> AllRows(const EvalFrame& frame) {
  std::vector<WeightedRow> rows(frame.num_units());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = WeightedRow{i, frame.weights()[i]};
  }
  return rows;
}

// Evaluates one policy's curve on arbitrary weighted subsets of the frame.
class CurveEvaluator {
 public:
  CurveEvaluator(const EvalFrame& frame, const PolicySpec& policy,
                 double b_max)
      : frame_(policy.arms.empty() ? frame : frame.SelectArms(policy.arms)),
        baseline_(policy.baseline),
        b_max_(b_max) {
    if (!baseline_) hulls_.emplace(frame_);
  }

  std::vector<double> Evaluate(std::span<const WeightedRow> rows,
                               std::span<const double> grid) const {
    if (!baseline_) {
      return GainOnGrid(ComputePath(frame_, *hulls_, rows, b_max_), grid);
    }
    return GainOnGrid(ComputePath(AverageFrame(frame_, rows), b_max_), grid);
  }

 private:
  EvalFrame frame_;
  bool baseline_;
  double b_max_;
  std::optional<HullTable> hulls_;
};

void CheckOptions(const EvalFrame& frame, const BootstrapOptions& options) {
  if (!(options.b_max > 0.0) || !std::isfinite(options.b_max)) {
    throw InvalidArgumentError("b_max must be positive and finite");
  }
  if (options.grid_size < 1) {
    throw InvalidArgumentError("grid size must be at least 1");
  }
  if (options.replicates < 2) {
    throw InvalidArgumentError("need at least 2 bootstrap replicates");
  }
  if (frame.num_units() < 4) {
    throw InvalidArgumentError("half-sampling needs at least 4 units");
  }
}

// Rows in canonical order: by unit id, then by row.
std::vector<std::size_t> CanonicalOrder(const EvalFrame& frame) {
  std::vector<std::size_t> order(frame.num_units());
  std::iota(order.begin(), order.end(), 0);
  const auto& ids = frame.unit_ids();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  return order;
}

std::vector<WeightedRow> HalfSample(const EvalFrame& frame,
                                    std::span<const std::size_t> canonical,
                                    std::uint64_t seed, std::uint64_t replicate) {
  const std::size_t n = canonical.size();
  const std::size_t m = n / 2;
  std::vector<std::size_t> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 0);
  Engine engine = MakeEngine(seed, replicate);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(ranks[i], ranks[pick(engine)]);
  }
  std::sort(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<WeightedRow> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t row = canonical[ranks[i]];
    rows[i] = WeightedRow{row, 2.0 * frame.weights()[row]};
  }
  return rows;
}

// Runs `body(r)` for r in [0, count) on up to `threads` workers.
template <typename Body>
void ParallelFor(int count, int threads, Body body) {
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    for (int r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int r = next++; r < count; r = next++) {
        try {
          body(r);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Root of the 1/R variance across replicates at each grid point. Values are
// centred on the first replicate so identical replicates give exactly 0.
std::vector<double> ReplicateStdErr(const std::vector<std::vector<double>>& reps,
                                    std::size_t grid_size) {
  std::vector<double> out(grid_size, 0.0);
  const double count = static_cast<double>(reps.size());
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double pivot = reps.front()[g];
    CompensatedSum sum;
    for (const auto& rep : reps) sum.Add(rep[g] - pivot);
    const double mean = sum.value() / count;
    CompensatedSum squares;
    for (const auto& rep : reps) {
      const double d = rep[g] - pivot - mean;
      squares.Add(d * d);
    }
    out[g] = std::sqrt(squares.value() / count);
  }
  return out;
}

}  // namespace

std::string PolicySpec::Label(const EvalFrame& frame) const {
  const std::vector<int>& ids = arms.empty() ? frame.arm_ids() : arms;
  std::string label = baseline ? "Qbar_{" : "Q_{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) label += ",";
    label += std::to_string(ids[i]);
  }
  return label + "}";
}

std::vector<double> SpendGrid(double b_max, int grid_size) {
  if (!(b_max > 0.0) || !std::isfinite(b_max)) {
    throw InvalidArgumentError("b_max must be positive and finite");
  }
  if (grid_size < 1) throw InvalidArgumentError("grid size must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(grid_size));
  for (int j = 1; j <= grid_size; ++j) {
    grid[static_cast<std::size_t>(j - 1)] = b_max * j / grid_size;
  }
  return grid;
}

SolutionPath BaselinePath(const EvalFrame& frame, double b_max) {
  return ComputePath(AverageFrame(frame, AllRows(frame)), b_max);
}

CurveEstimate BootstrapCurve(const EvalFrame& frame, const PolicySpec& policy,
                             const BootstrapOptions& options) {
  CheckOptions(frame, options);
  const CurveEvaluator evaluator(frame, policy, options.b_max);
  CurveEstimate out;
  out.spend_grid = SpendGrid(options.b_max, options.grid_size);
  out.num_replicates = options.replicates;
  out.policy_label = policy.Label(frame);
  out.gain = evaluator.Evaluate(AllRows(frame), out.spend_grid);

  const auto canonical = CanonicalOrder(frame);
  std::vector<std::vector<double>> reps(
      static_cast<std::size_t>(options.replicates));
  ParallelFor(options.replicates, options.threads, [&](int r) {
    const auto rows = HalfSample(frame, canonical, options.seed,
                                 static_cast<std::uint64_t>(r));
    reps[static_cast<std::size_t>(r)] = evaluator.Evaluate(rows, out.spend_grid);
  });
  out.std_err = ReplicateStdErr(reps, out.spend_grid.size());
  return out;
}

DifferenceEstimate DifferenceCurve(const EvalFrame& frame_a,
                                   const PolicySpec& policy_a,
                                   const EvalFrame& frame_b,
                                   const PolicySpec& policy_b,
                                   const BootstrapOptions& options) {
  if (frame_a.num_units() != frame_b.num_units() ||
      frame_a.unit_ids() != frame_b.unit_ids() ||
      frame_a.weights() != frame_b.weights()) {
    throw InvalidArgumentError(
        "paired comparison needs both frames on the same units");
  }
  CheckOptions(frame_a, options);
  const CurveEvaluator eval_a(frame_a, policy_a, options.b_max);
  const CurveEvaluator eval_b(frame_b, policy_b, options.b_max);

  DifferenceEstimate out;
  out.spend_grid = SpendGrid(options.b_max, options.grid_size);
  out.num_replicates = options.replicates;
  out.label_a = policy_a.Label(frame_a);
  out.label_b = policy_b.Label(frame_b);

  const auto all = AllRows(frame_a);
  const auto full_a = eval_a.Evaluate(all, out.spend_grid);
  const auto full_b = eval_b.Evaluate(all, out.spend_grid);
  out.diff.resize(out.spend_grid.size());
  for (std::size_t g = 0; g < out.diff.size(); ++g) {
    out.diff[g] = full_a[g] - full_b[g];
  }

  const auto canonical = CanonicalOrder(frame_a);
  std::vector<std::vector<double>> reps(
      static_cast<std::size_t>(options.replicates));
  ParallelFor(options.replicates, options.threads, [&](int r) {
    const auto rows = HalfSample(frame_a, canonical, options.seed,
                                 static_cast<std::uint64_t>(r));
    auto a = eval_a.Evaluate(rows, out.spend_grid);
    const auto b = eval_b.Evaluate(rows, out.spend_grid);
    for (std::size_t g = 0; g < a.size(); ++g) a[g] -= b[g];
    reps[static_cast<std::size_t>(r)] = std::move(a);
  });
  out.std_err = ReplicateStdErr(reps, out.spend_grid.size());
  return out;
}

DifferenceEstimate DifferenceCurve(const EvalFrame& frame,
                                   const PolicySpec& policy_a,
                                   const PolicySpec& policy_b,
                                   const BootstrapOptions& options) {
  return DifferenceCurve(frame, policy_a, frame, policy_b, options);
}

double NormalCriticalValue(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgumentError("alpha must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 1.0 - alpha / 2.0);
}

}  // namespace qini
