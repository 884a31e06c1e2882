#ifndef QINI_NUMERIC_H_
#define QINI_NUMERIC_H_

#include <cmath>

namespace qini {

// Neumaier compensated summation. Path spend and gain are accumulated with
// this so replicate curves agree across summation orders to ~1e-15.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void Add(double value) {
    const double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace qini

#endif  // QINI_NUMERIC_H_
