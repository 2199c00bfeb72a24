#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace dgp {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log(sum(exp(...))) accumulator; stable for terms spanning
// many hundreds of orders of magnitude.
class LogSum {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (max_ == kNegInf) {
      max_ = log_term;
      sum_ = 1.0;
    } else if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }
  bool empty() const { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

inline double log_sum_exp(std::span<const double> log_terms) {
  LogSum acc;
  for (double t : log_terms) acc.add(t);
  return acc.value();
}

inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = a > b ? a : b;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log(exp(a) - exp(b)) for a > b.
inline double log_sub_exp(double a, double b) {
  if (b == kNegInf) return a;
  return a + std::log1p(-std::exp(b - a));
}

}  // namespace dgp
