#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dgp/model.hpp"

namespace dgp {

using ScalarFn = std::function<double(double)>;

// Taylor coefficients nu[l] of x/(e^x - 1) - 1 = sum_{l>=1} nu_l x^l,
// generated from the Bernoulli-number recurrence.
struct LemmaCoefficients {
  std::vector<double> nu;  // nu[0] unused; nu[1] = -1/2, nu[2] = 1/12, ...
  static LemmaCoefficients generate(int count);
};

// Endpoint-corrected Riemann sum to order 1/V^2:
//   sum_{l=0}^{xV-1} (1/V) F(l/V, V)  with  F = F0 + F1/V + F2/V^2.
// F1, F2 and the analytic derivative F0prime are optional (null = zero /
// central difference).
double lemma_sum(const ScalarFn& F0, const ScalarFn& F1, const ScalarFn& F2, double x, double V,
                 const ScalarFn& F0prime = nullptr);

// Stochastic potential, raw convention phi0(0) = 0:
//   phi0(x)  = int_0^x ln(lambda0/mu0)
//   phi1(x)  = int_0^x (lambda1/lambda0 - mu1/mu0) + (1/2) ln(mu0(x) lambda0(x))
// phi1 carries an arbitrary additive constant; consumers use differences.
double phi0(const RateExpansion& exp, double x);
double phi1(const RateExpansion& exp, double x);

// phi0''(x) = lambda0'/lambda0 - mu0'/mu0, analytic.
double phi0_curvature(const RateExpansion& exp, double x);

struct PotentialGrid {
  std::vector<double> x;
  std::vector<double> phi0;
  std::vector<double> phi1;
  std::string rule;
  int panels = 0;
  double errorEstimate = 0.0;

  double Phi(double V, std::size_t i) const { return phi0[i] + phi1[i] / V; }
};

PotentialGrid build_potential_grid(const RateExpansion& exp, double xLo, double xHi,
                                   int nPoints = 512);

enum class BistabilityClass { Nonlinear, Stochastic };

struct KramersEstimate {
  double x1Star = 0.0;
  double xDdag = 0.0;
  double barrierLeading = 0.0;     // V * (phi0(xDdag) - phi0(x1Star))
  double barrierCorrection = 0.0;  // phi1(xDdag) - phi1(x1Star)
  double prefactor = 0.0;
  double logTime = 0.0;
  double time = 0.0;
  BistabilityClass bistabilityClass = BistabilityClass::Nonlinear;
};

// Saddle-point escape time from the basin at x1Star over the barrier at
// xDdag. includePhi1 = false drops the 1/V correction from the exponent
// (ablation variant; strictly worse).
KramersEstimate kramers_time(const RateExpansion& exp, double V, double x1Star, double xDdag,
                             bool includePhi1 = true);

// Asymptotic mean first passage time from x to x2 (barrier integral with
// ln(r)/(r-1) prefactors), evaluated by nested log-space quadrature.
double mfpt_asymptotic(const RateExpansion& exp, double V, double x, double x2);

// ln(r)/(r-1) with the series branch for |r-1| < 1e-4.
double log_ratio_prefactor(double r);

// (1/V) ln of int_0^x exp(-V phi(y)) dy via piecewise Laplace asymptotics
// (erf boundary layer around an interior minimum; endpoint expansions
// otherwise).
double laplace_log_min(const ScalarFn& phi, double V, double x);
double laplace_log_max(const ScalarFn& phi, double V, double x);

}  // namespace dgp
