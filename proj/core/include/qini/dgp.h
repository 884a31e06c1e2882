#ifndef QINI_DGP_H_
#define QINI_DGP_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qini/frame.h"
#include "qini/matrix.h"
#include "qini/scores.h"

namespace qini::dgp {

// Three-armed synthetic design: control plus two treatment arms, covariates
// uniform on [0,1]^10, equal assignment probabilities, costs X1 and 2*X2,
// and Normal noise with variance 4 on top of a piecewise-constant mean.
inline constexpr int kNumCovariates = 10;
inline constexpr int kNumArms = 2;
inline constexpr double kNoiseSd = 2.0;
inline constexpr double kAssignProb = 1.0 / 3.0;

struct SimDraw {
  Matrix x;                 // n x 10
  std::vector<int> w;       // 0, 1 or 2
  std::vector<double> y;
  Matrix cost;              // n x 2: X1, 2*X2
  Matrix tau_true;          // n x 2
  std::vector<int> region;  // dominant region label, see RegionOf

  std::size_t size() const { return w.size(); }
  ObservedData observed() const;
  // Randomization probabilities (1/3, 1/3, 1/3).
  static std::vector<double> probabilities();
};

// Region indicators evaluated as written; 1_2 = 1 - 1_0 - 1_1.
struct RegionIndicators {
  int r0 = 0;
  int r1 = 0;
  int r2 = 0;
};
RegionIndicators Regions(std::span<const double> x);

// 0, 1 or 2: the first region whose indicator is positive.
int RegionOf(std::span<const double> x);

// E[Y(w) | X = x].
double MeanOutcome(std::span<const double> x, int w);

// (tau_1, tau_2) = (m(x,1) - m(x,0), m(x,2) - m(x,0)).
std::array<double, 2> TrueEffects(std::span<const double> x);

// Full draw of n units. Deterministic in seed; units are generated in blocks
// with one substream per block.
SimDraw Simulate(std::size_t n, std::uint64_t seed);

// Covariates, costs and true effects only (no treatment or outcome); the
// oracle population.
SimDraw SimulateCovariates(std::size_t n, std::uint64_t seed);

// Frame with tau_hat := scores := tau_true on a fresh covariate draw.
EvalFrame OracleFrame(std::size_t oracle_n, std::uint64_t seed);

// Monte Carlo truth Q(B) of the policy induced by the true effects.
double TrueGainOracle(double budget, std::size_t oracle_n, std::uint64_t seed);

}  // namespace qini::dgp

#endif  // QINI_DGP_H_
