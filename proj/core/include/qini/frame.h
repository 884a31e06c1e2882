#ifndef QINI_FRAME_H_
#define QINI_FRAME_H_

#include <cstddef>
#include <span>
#include <vector>

#include "qini/matrix.h"

namespace qini {

// Per-unit inputs of the path solver for K treatment arms: effect estimates,
// cost contrasts against control, and evaluation scores. Row i is unit i;
// column k is the arm with id `arm_ids()[k]` (1..K unless the frame was
// produced by SelectArms).
//
// Invariants, checked on construction: the three matrices share dimensions,
// costs are positive and finite, effects and scores finite, weights positive
// and finite.
class EvalFrame {
 public:
  EvalFrame() = default;

  // Unit weights default to 1, unit ids to the row index, arm ids to 1..K.
  EvalFrame(Matrix tau_hat, Matrix cost, Matrix scores,
            std::vector<double> weights = {}, std::vector<int> unit_ids = {},
            std::vector<int> arm_ids = {});

  std::size_t num_units() const { return tau_hat_.rows(); }
  std::size_t num_arms() const { return tau_hat_.cols(); }

  const Matrix& tau_hat() const { return tau_hat_; }
  const Matrix& cost() const { return cost_; }
  const Matrix& scores() const { return scores_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<int>& unit_ids() const { return unit_ids_; }
  const std::vector<int>& arm_ids() const { return arm_ids_; }
  double total_weight() const { return total_weight_; }

  // Column index of `arm_id`, or -1 when the frame does not carry that arm.
  int ColumnOf(int arm_id) const;

  // Frame restricted to the listed arm ids (the arm-subset policies Q_S).
  // Arm ids are preserved. Throws on unknown or repeated ids, or an empty
  // list.
  EvalFrame SelectArms(std::span<const int> arm_ids) const;

  // Frame restricted to the listed rows with the given weights.
  EvalFrame SelectUnits(std::span<const std::size_t> rows,
                        std::vector<double> weights) const;

 private:
  Matrix tau_hat_;
  Matrix cost_;
  Matrix scores_;
  std::vector<double> weights_;
  std::vector<int> unit_ids_;
  std::vector<int> arm_ids_;
  double total_weight_ = 0.0;
};

}  // namespace qini

#endif  // QINI_FRAME_H_
