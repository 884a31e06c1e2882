#include "qini/dgp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qini/path.h"
#include "qini/random.h"

namespace qini::dgp {
namespace {

constexpr std::size_t kBlock = 4096;

void FillUnit(SimDraw& draw, std::size_t i) {
  const auto x = draw.x.row(i);
  draw.cost(i, 0) = x[0];
  draw.cost(i, 1) = 2.0 * x[1];
  const auto tau = TrueEffects(x);
  draw.tau_true(i, 0) = tau[0];
  draw.tau_true(i, 1) = tau[1];
  draw.region[i] = RegionOf(x);
}

SimDraw Generate(std::size_t n, std::uint64_t seed, bool with_outcomes) {
  SimDraw draw;
  draw.x = Matrix(n, kNumCovariates);
  draw.cost = Matrix(n, kNumArms);
  draw.tau_true = Matrix(n, kNumArms);
  draw.region.assign(n, 0);
  if (with_outcomes) {
    draw.w.assign(n, 0);
    draw.y.assign(n, 0.0);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> arm(0, kNumArms);
  for (std::size_t start = 0; start < n; start += kBlock) {
    Engine engine = MakeEngine(seed, start / kBlock);
    std::normal_distribution<double> noise(0.0, kNoiseSd);
    const std::size_t end = std::min(n, start + kBlock);
    for (std::size_t i = start; i < end; ++i) {
      for (int j = 0; j < kNumCovariates; ++j) {
        // Costs must stay positive; a uniform draw of exactly 0 is redrawn.
        double u = unit(engine);
        while (u == 0.0) u = unit(engine);
        draw.x(i, static_cast<std::size_t>(j)) = u;
      }
      FillUnit(draw, i);
      if (with_outcomes) {
        const int w = arm(engine);
        draw.w[i] = w;
        draw.y[i] = MeanOutcome(draw.x.row(i), w) + noise(engine);
      }
    }
  }
  return draw;
}

}  // namespace

ObservedData SimDraw::observed() const {
  return ObservedData{kNumArms, w, y};
}

std::vector<double> SimDraw::probabilities() {
  return {kAssignProb, kAssignProb, kAssignProb};
}

RegionIndicators Regions(std::span<const double> x) {
  const double x5 = x[4];
  const double x7 = x[6];
  RegionIndicators r;
  r.r0 = (x5 <= 0.6 && x7 >= 0.35) ? 1 : 0;
  const double e1 = x5 * x5 / (0.6 * 0.6) + x7 * x7 / (0.35 * 0.35);
  const double e2 = (x5 - 1.0) * (x5 - 1.0) / (0.4 * 0.4) +
                    (x7 - 1.0) * (x7 - 1.0) / (0.35 * 0.35);
  r.r1 = (e1 < 1.0 ? 1 : 0) + (e2 < 1.0 ? 1 : 0);
  r.r2 = 1 - r.r0 - r.r1;
  return r;
}

int RegionOf(std::span<const double> x) {
  const RegionIndicators r = Regions(x);
  if (r.r0 > 0) return 0;
  if (r.r1 > 0) return 1;
  return 2;
}

double MeanOutcome(std::span<const double> x, int w) {
  const RegionIndicators r = Regions(x);
  const double wd = w;
  return (3.0 - wd) * r.r0 + (2.0 - 0.5 * std::abs(wd - 1.0)) * r.r1 +
         1.5 * (wd - 1.0) * r.r2;
}

std::array<double, 2> TrueEffects(std::span<const double> x) {
  const double base = MeanOutcome(x, 0);
  return {MeanOutcome(x, 1) - base, MeanOutcome(x, 2) - base};
}

SimDraw Simulate(std::size_t n, std::uint64_t seed) {
  return Generate(n, seed, true);
}

SimDraw SimulateCovariates(std::size_t n, std::uint64_t seed) {
  return Generate(n, seed, false);
}

EvalFrame OracleFrame(std::size_t oracle_n, std::uint64_t seed) {
  SimDraw draw = SimulateCovariates(oracle_n, seed);
  Matrix tau = draw.tau_true;
  return EvalFrame(std::move(tau), std::move(draw.cost),
                   std::move(draw.tau_true));
}

double TrueGainOracle(double budget, std::size_t oracle_n,
                      std::uint64_t seed) {
  const EvalFrame frame = OracleFrame(oracle_n, seed);
  const SolutionPath path =
      ComputePath(frame, std::numeric_limits<double>::infinity());
  return GainAt(path, budget);
}

}  // namespace qini::dgp
