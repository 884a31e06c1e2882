#include "qini/frame.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qini/error.h"

namespace qini {
namespace {

std::string Where(std::size_t row, std::size_t col) {
  return "(unit row " + std::to_string(row) + ", arm column " +
         std::to_string(col) + ")";
}

}  // namespace

EvalFrame::EvalFrame(Matrix tau_hat, Matrix cost, Matrix scores,
                     std::vector<double> weights, std::vector<int> unit_ids,
                     std::vector<int> arm_ids)
    : tau_hat_(std::move(tau_hat)),
      cost_(std::move(cost)),
      scores_(std::move(scores)),
      weights_(std::move(weights)),
      unit_ids_(std::move(unit_ids)),
      arm_ids_(std::move(arm_ids)) {
  const std::size_t n = tau_hat_.rows();
  const std::size_t k = tau_hat_.cols();
  if (cost_.rows() != n || cost_.cols() != k || scores_.rows() != n ||
      scores_.cols() != k) {
    throw InvalidArgumentError(
        "tau_hat, cost and scores must share dimensions");
  }
  if (n == 0) throw InvalidArgumentError("frame has no units");
  if (k == 0) throw InvalidArgumentError("frame has no treatment arms");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double c = cost_(i, j);
      if (!std::isfinite(c) || c <= 0.0) {
        throw InvalidArgumentError("cost must be positive and finite " +
                                   Where(i, j));
      }
      if (!std::isfinite(tau_hat_(i, j))) {
        throw InvalidArgumentError("tau_hat must be finite " + Where(i, j));
      }
      if (!std::isfinite(scores_(i, j))) {
        throw InvalidArgumentError("score must be finite " + Where(i, j));
      }
    }
  }

  if (weights_.empty()) weights_.assign(n, 1.0);
  if (weights_.size() != n) {
    throw InvalidArgumentError("weights length differs from unit count");
  }
  for (double w : weights_) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw InvalidArgumentError("weights must be positive and finite");
    }
  }
  total_weight_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);

  if (unit_ids_.empty()) {
    unit_ids_.resize(n);
    std::iota(unit_ids_.begin(), unit_ids_.end(), 0);
  }
  if (unit_ids_.size() != n) {
    throw InvalidArgumentError("unit_ids length differs from unit count");
  }

  if (arm_ids_.empty()) {
    arm_ids_.resize(k);
    std::iota(arm_ids_.begin(), arm_ids_.end(), 1);
  }
  if (arm_ids_.size() != k) {
    throw InvalidArgumentError("arm_ids length differs from arm count");
  }
  std::vector<int> sorted = arm_ids_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgumentError("arm ids must be distinct");
  }
}

int EvalFrame::ColumnOf(int arm_id) const {
  auto it = std::find(arm_ids_.begin(), arm_ids_.end(), arm_id);
  return it == arm_ids_.end() ? -1 : static_cast<int>(it - arm_ids_.begin());
}

EvalFrame EvalFrame::SelectArms(std::span<const int> arm_ids) const {
  if (arm_ids.empty()) throw InvalidArgumentError("arm subset is empty");
  std::vector<std::size_t> columns;
  for (int id : arm_ids) {
    const int col = ColumnOf(id);
    if (col < 0) {
      throw InvalidArgumentError("arm " + std::to_string(id) +
                                 " is not present in the frame");
    }
    columns.push_back(static_cast<std::size_t>(col));
  }
  return EvalFrame(tau_hat_.SelectColumns(columns), cost_.SelectColumns(columns),
                   scores_.SelectColumns(columns), weights_, unit_ids_,
                   std::vector<int>(arm_ids.begin(), arm_ids.end()));
}

EvalFrame EvalFrame::SelectUnits(std::span<const std::size_t> rows,
                                 std::vector<double> weights) const {
  std::vector<int> ids;
  ids.reserve(rows.size());
  for (std::size_t r : rows) ids.push_back(unit_ids_.at(r));
  return EvalFrame(tau_hat_.SelectRows(rows), cost_.SelectRows(rows),
                   scores_.SelectRows(rows), std::move(weights),
                   std::move(ids), arm_ids_);
}

}  // namespace qini
