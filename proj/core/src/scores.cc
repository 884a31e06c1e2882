#include "qini/scores.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "qini/error.h"
#include "qini/random.h"

namespace qini {

void Validate(const ObservedData& data) {
  if (data.num_arms < 1) {
    throw InvalidArgumentError("need at least one treatment arm");
  }
  if (data.treatment.size() != data.outcome.size()) {
    throw InvalidArgumentError("treatment and outcome lengths differ");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int w = data.treatment[i];
    if (w < 0 || w > data.num_arms) {
      throw InvalidArgumentError("unit " + std::to_string(i) +
                                 ": treatment " + std::to_string(w) +
                                 " outside 0.." +
                                 std::to_string(data.num_arms));
    }
    if (!std::isfinite(data.outcome[i])) {
      throw InvalidArgumentError("unit " + std::to_string(i) +
                                 ": outcome must be finite");
    }
  }
}

std::vector<int> UnobservedArms(const ObservedData& data) {
  std::vector<bool> seen(static_cast<std::size_t>(data.num_arms) + 1, false);
  for (int w : data.treatment) {
    if (w >= 0 && w <= data.num_arms) seen[static_cast<std::size_t>(w)] = true;
  }
  std::vector<int> missing;
  for (int k = 0; k <= data.num_arms; ++k) {
    if (!seen[static_cast<std::size_t>(k)]) missing.push_back(k);
  }
  return missing;
}

Matrix IpwScores(const ObservedData& data, std::span<const double> probs) {
  Validate(data);
  const auto k_arms = static_cast<std::size_t>(data.num_arms);
  if (probs.size() != k_arms + 1) {
    throw InvalidArgumentError("expected " + std::to_string(k_arms + 1) +
                               " probabilities, got " +
                               std::to_string(probs.size()));
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw InvalidArgumentError(
          "randomization probabilities must be positive (overlap)");
    }
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw InvalidArgumentError("randomization probabilities must sum to 1");
  }

  Matrix out(data.size(), k_arms, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto w = static_cast<std::size_t>(data.treatment[i]);
    const double y = data.outcome[i];
    if (w == 0) {
      const double control = -y / probs[0];
      for (std::size_t k = 0; k < k_arms; ++k) out(i, k) = control;
    } else {
      out(i, w - 1) = y / probs[w];
    }
  }
  return out;
}

Matrix AipwScores(const ObservedData& data, const NuisanceEstimates& nuisance) {
  Validate(data);
  const std::size_t n = data.size();
  const auto k_arms = static_cast<std::size_t>(data.num_arms);
  const Matrix& mu = nuisance.mu_hat;
  const Matrix& e = nuisance.e_hat;
  if (mu.rows() != n || e.rows() != n || mu.cols() != k_arms + 1 ||
      e.cols() != k_arms + 1) {
    throw InvalidArgumentError("nuisance matrices must be n x (K+1)");
  }
  if (nuisance.fold_id.size() != n) {
    throw InvalidArgumentError("fold_id length differs from unit count");
  }
  if (std::set<int>(nuisance.fold_id.begin(), nuisance.fold_id.end()).size() <
      2) {
    throw InvalidArgumentError("cross-fitting needs at least two folds");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t k = 0; k <= k_arms; ++k) {
      const double p = e(i, k);
      if (!std::isfinite(mu(i, k)) || !std::isfinite(p)) {
        throw InvalidArgumentError("unit " + std::to_string(i) +
                                   ": nuisance estimate is not finite");
      }
      if (p < kPropensityFloor || p >= 1.0) {
        throw InvalidArgumentError("unit " + std::to_string(i) +
                                   ": propensity outside [1e-6, 1)");
      }
      row_sum += p;
    }
    if (std::fabs(row_sum - 1.0) > 1e-6) {
      throw InvalidArgumentError("unit " + std::to_string(i) +
                                 ": propensities do not sum to 1");
    }
  }

  Matrix out(n, k_arms, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = static_cast<std::size_t>(data.treatment[i]);
    const double residual = data.outcome[i] - mu(i, w);
    for (std::size_t k = 1; k <= k_arms; ++k) {
      double weight = 0.0;
      if (w == k) weight = 1.0 / e(i, k);
      if (w == 0) weight = -1.0 / e(i, 0);
      out(i, k - 1) = mu(i, k) - mu(i, 0) + weight * residual;
    }
  }
  return out;
}

std::vector<int> MakeFolds(std::size_t n, int num_folds, std::uint64_t seed) {
  if (num_folds < 2) throw InvalidArgumentError("need at least two folds");
  if (static_cast<std::size_t>(num_folds) > n) {
    throw InvalidArgumentError("more folds than units");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Engine engine = MakeEngine(seed, 0);
  std::shuffle(order.begin(), order.end(), engine);
  std::vector<int> folds(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    folds[order[rank]] = static_cast<int>(rank % static_cast<std::size_t>(num_folds));
  }
  return folds;
}

}  // namespace qini
