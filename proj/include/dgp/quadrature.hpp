#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dgp/errors.hpp"
#include "dgp/logsumexp.hpp"

namespace dgp {

// Adaptive Gauss-Kronrod (G7/K15) panel quadrature.
//
// Panels are bisected while the embedded error estimate |K15 - G7| exceeds
// the locally apportioned absolute tolerance. Panel results are merged in
// left-to-right order so the result is deterministic.

namespace gk {
// 15-point Kronrod abscissae (positive half) and weights; Gauss-7 weights
// sit on the odd Kronrod nodes.
inline constexpr double xk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
}  // namespace gk

struct PanelResult {
  double integral;
  double error;
};

template <class F>
PanelResult gk15_panel(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * gk::xk[i]);
    fv[14 - i] = f(c + h * gk::xk[i]);
  }
  fv[7] = f(c);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 7; ++i) k += gk::wk[i] * (fv[i] + fv[14 - i]);
  k += gk::wk[7] * fv[7];
  for (int i = 0; i < 3; ++i) g += gk::wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  g += gk::wg[3] * fv[7];
  return {k * h, std::abs(k - g) * h};
}

struct QuadratureResult {
  double value;
  double error_estimate;
  int panels;
};

// Integrate f over [a, b] to absolute tolerance absTol.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double absTol = 1e-10,
                           int maxPanels = 1 << 16) {
  if (a == b) return {0.0, 0.0, 0};
  struct Seg {
    double a, b, integral, error;
  };
  PanelResult whole = gk15_panel(f, a, b);
  std::vector<Seg> stack{{a, b, whole.integral, whole.error}};
  double total = whole.integral, totalErr = whole.error;
  int panels = 1;
  while (totalErr > absTol) {
    // split the worst segment
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].error > stack[worst].error) worst = i;
    Seg s = stack[worst];
    double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b || panels >= maxPanels)
      throw NumericalError("quadrature failed to converge: error estimate " +
                           std::to_string(totalErr) + " after " + std::to_string(panels) +
                           " panels");
    PanelResult left = gk15_panel(f, s.a, mid), right = gk15_panel(f, mid, s.b);
    total += left.integral + right.integral - s.integral;
    totalErr += left.error + right.error - s.error;
    stack[worst] = {s.a, mid, left.integral, left.error};
    stack.push_back({mid, s.b, right.integral, right.error});
    ++panels;
  }
  // deterministic re-sum in spatial order
  std::vector<Seg> ordered = stack;
  std::sort(ordered.begin(), ordered.end(), [](const Seg& u, const Seg& v) { return u.a < v.a; });
  double sum = 0.0, err = 0.0;
  for (const Seg& s : ordered) {
    sum += s.integral;
    err += s.error;
  }
  return {sum, err, panels};
}

// log of integral of exp(logf(x)) over [a, b]; the integrand is shifted by a
// coarse-grid maximum of logf before exponentiation so the adaptive pass works
// on O(1) numbers.
template <class F>
double log_integrate(const F& logf, double a, double b, double relTol = 1e-10) {
  if (a == b) return kNegInf;
  double shift = kNegInf;
  const int scan = 512;
  for (int i = 0; i <= scan; ++i) {
    double v = logf(a + (b - a) * i / scan);
    if (v > shift) shift = v;
  }
  if (shift == kNegInf) return kNegInf;
  auto g = [&](double x) { return std::exp(logf(x) - shift); };
  QuadratureResult r = integrate(g, a, b, relTol * (b - a));
  if (r.value <= 0.0) return kNegInf;
  return shift + std::log(r.value);
}

// Trapezoid rule in log space: log ∫ exp(logf) on the node set x (ascending).
inline double log_trapezoid(std::span<const double> x, std::span<const double> logf) {
  LogSum acc;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double h = x[i + 1] - x[i];
    acc.add(std::log(0.5 * h) + log_add_exp(logf[i], logf[i + 1]));
  }
  return acc.value();
}

// Cumulative version: out[i] = log ∫_{x0}^{x_i} exp(logf), out[0] = -inf.
inline std::vector<double> log_cum_trapezoid(std::span<const double> x,
                                             std::span<const double> logf) {
  std::vector<double> out(x.size(), kNegInf);
  LogSum acc;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double h = x[i + 1] - x[i];
    acc.add(std::log(0.5 * h) + log_add_exp(logf[i], logf[i + 1]));
    out[i + 1] = acc.value();
  }
  return out;
}

// Gauss-5 on one panel — used for cumulative potential grids where each panel
// is smooth and tiny.
template <class F>
double gauss5_panel(const F& f, double a, double b) {
  static constexpr double x5[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                                   0.538469310105683, 0.906179845938664};
  static constexpr double w5[5] = {0.236926885056189, 0.478628670499366, 0.568888888888889,
                                   0.478628670499366, 0.236926885056189};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += w5[i] * f(c + h * x5[i]);
  return s * h;
}

}  // namespace dgp
