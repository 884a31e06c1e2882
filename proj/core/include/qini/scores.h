#ifndef QINI_SCORES_H_
#define QINI_SCORES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "qini/matrix.h"

namespace qini {

// Observed experimental or observational data: treatment w in {0..K}
// (0 is control) and outcome y per unit.
struct ObservedData {
  int num_arms = 0;  // K, treatment arms excluding control
  std::vector<int> treatment;
  std::vector<double> outcome;

  std::size_t size() const { return treatment.size(); }
};

// Throws InvalidArgumentError when treatments fall outside 0..K, outcomes are
// not finite, or the two columns differ in length.
void Validate(const ObservedData& data);

// Arms in 0..K without a single observation. Scores are still defined, but
// the corresponding contrasts carry no information.
std::vector<int> UnobservedArms(const ObservedData& data);

// Cross-fit nuisance estimates, one row per unit and one column per arm
// 0..K: conditional means mu_hat and propensities e_hat, each computed
// without the unit's own fold.
struct NuisanceEstimates {
  Matrix mu_hat;
  Matrix e_hat;
  std::vector<int> fold_id;
};

// Rows of e_hat must sum to 1 within 1e-6 and entries lie in [1e-6, 1);
// nothing is clipped.
inline constexpr double kPropensityFloor = 1e-6;

// Inverse-propensity scores for known randomization probabilities
// (length K+1, index 0 is control):
//   score(i, k) = 1(W=k) Y / p_k - 1(W=0) Y / p_0,   k = 1..K.
Matrix IpwScores(const ObservedData& data, std::span<const double> probs);

// Augmented inverse-propensity (doubly robust) scores:
//   score(i, k) = mu_k - mu_0 + (1(W=k)/e_k - 1(W=0)/e_0) (Y - mu_W).
Matrix AipwScores(const ObservedData& data, const NuisanceEstimates& nuisance);

// Balanced fold labels 0..num_folds-1 in a seeded random order; fold sizes
// differ by at most one.
std::vector<int> MakeFolds(std::size_t n, int num_folds, std::uint64_t seed);

}  // namespace qini

#endif  // QINI_SCORES_H_
