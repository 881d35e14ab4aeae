#pragma once

namespace ale {

// Smooth transition built from the exp(-1/u) mollifier: value 1 for
// s - shift <= -1 and 0 for s - shift >= 0, monotone in between.
// Derivatives are available through order 4.
class CutoffFunction {
 public:
  explicit CutoffFunction(double shift = 0.0) : shift_(shift) {}

  double shift() const { return shift_; }
  double value(double s) const { return derivative(s, 0); }
  double operator()(double s) const { return derivative(s, 0); }
  double derivative(double s, int k) const;

 private:
  double shift_;
};

}  // namespace ale
