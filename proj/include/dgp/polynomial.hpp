#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace dgp {

// Dense univariate polynomial, coefficients in increasing power order.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  void add_term(int power, double coeff) {
    if (coeff == 0.0) return;
    if (static_cast<std::size_t>(power) >= c_.size()) c_.resize(power + 1, 0.0);
    c_[power] += coeff;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial{};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coefficients() const { return c_; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (std::size_t i = 0; i < b.c_.size(); ++i) r.add_term(static_cast<int>(i), b.c_[i]);
    r.trim();
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (std::size_t i = 0; i < b.c_.size(); ++i) r.add_term(static_cast<int>(i), -b.c_[i]);
    r.trim();
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

}  // namespace dgp
