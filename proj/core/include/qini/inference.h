#ifndef QINI_INFERENCE_H_
#define QINI_INFERENCE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "qini/frame.h"
#include "qini/path.h"

namespace qini {

// Which curve to estimate: targeting with a subset of arms (Q_S), or the
// covariate-free baseline over that subset (Qbar_S). An empty arm list means
// every arm of the frame.
struct PolicySpec {
  std::vector<int> arms;
  bool baseline = false;

  std::string Label(const EvalFrame& frame) const;
};

struct BootstrapOptions {
  double b_max = 1.0;
  int grid_size = 100;
  int replicates = 200;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Gain estimates on a uniform spend grid with bootstrap standard errors.
struct CurveEstimate {
  std::vector<double> spend_grid;
  std::vector<double> gain;
  std::vector<double> std_err;
  int num_replicates = 0;
  std::string policy_label;
};

// Paired difference Q_A - Q_B on a common grid.
struct DifferenceEstimate {
  std::vector<double> spend_grid;
  std::vector<double> diff;
  std::vector<double> std_err;
  int num_replicates = 0;
  std::string label_a;
  std::string label_b;
};

// b_max * j / grid_size for j = 1..grid_size.
std::vector<double> SpendGrid(double b_max, int grid_size);

// Path of the policy that ignores covariates: one pseudo-unit whose arm k has
// the weighted means of tau_hat, cost and scores over the frame. Spend is
// per unit of the original population.
SolutionPath BaselinePath(const EvalFrame& frame, double b_max);

// Half-sampling bootstrap of one curve. Each replicate draws floor(n/2)
// units without replacement (ranks taken after sorting by unit id), gives
// them weight 2, reruns the path and interpolates it onto the grid. The
// standard error is the root of the 1/R variance across replicates.
// Replicate r uses substream (seed, r); results do not depend on `threads`.
CurveEstimate BootstrapCurve(const EvalFrame& frame, const PolicySpec& policy,
                             const BootstrapOptions& options);

// Paired bootstrap: both curves are recomputed on the same half-sample in
// every replicate. The frames must describe the same units.
DifferenceEstimate DifferenceCurve(const EvalFrame& frame_a,
                                   const PolicySpec& policy_a,
                                   const EvalFrame& frame_b,
                                   const PolicySpec& policy_b,
                                   const BootstrapOptions& options);

DifferenceEstimate DifferenceCurve(const EvalFrame& frame,
                                   const PolicySpec& policy_a,
                                   const PolicySpec& policy_b,
                                   const BootstrapOptions& options);

// z_{1 - alpha/2}.
double NormalCriticalValue(double alpha);

}  // namespace qini

#endif  // QINI_INFERENCE_H_
