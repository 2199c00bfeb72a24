#include "dgp/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "dgp/errors.hpp"
#include "dgp/logsumexp.hpp"
#include "dgp/quadrature.hpp"

namespace dgp {

LemmaCoefficients LemmaCoefficients::generate(int count) {
  // Bernoulli numbers via sum_{j=0}^{m} C(m+1,j) B_j = 0; nu_l = B_l / l!.
  std::vector<double> B(count + 1, 0.0);
  B[0] = 1.0;
  for (int m = 1; m <= count; ++m) {
    double s = 0.0;
    double binom = 1.0;  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      s += binom * B[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    B[m] = -s / binom;  // binom is now C(m+1, m) = m+1
  }
  LemmaCoefficients lc;
  lc.nu.resize(count + 1, 0.0);
  double fact = 1.0;
  for (int l = 1; l <= count; ++l) {
    fact *= l;
    lc.nu[l] = B[l] / fact;
  }
  return lc;
}

double lemma_sum(const ScalarFn& F0, const ScalarFn& F1, const ScalarFn& F2, double x, double V,
                 const ScalarFn& F0prime) {
  if (!(V > 0.0)) throw ModelError("lemma_sum: V must be positive");
  auto deriv0 = [&](double z) {
    if (F0prime) return F0prime(z);
    double h = 1e-5 * std::max(1.0, std::abs(z));
    return (F0(z + h) - F0(z - h)) / (2.0 * h);
  };
  double i0 = integrate(F0, 0.0, x, 1e-12).value;
  double i1 = F1 ? integrate(F1, 0.0, x, 1e-12).value : 0.0;
  double i2 = F2 ? integrate(F2, 0.0, x, 1e-12).value : 0.0;
  double f1x = F1 ? F1(x) - F1(0.0) : 0.0;
  double s = i0;
  s += (1.0 / V) * (-(F0(x) - F0(0.0)) / 2.0 + i1);
  s += (1.0 / (V * V)) * ((deriv0(x) - deriv0(0.0)) / 12.0 - f1x / 2.0 + i2);
  return s;
}

namespace {

// Reject integrands with an interior zero of mu0 or lambda0 (the integrable
// endpoint singularity at 0 is fine; a zero strictly inside is not).
void check_positive_interior(const Polynomial& p, double x, const char* name) {
  for (int i = 1; i < 1024; ++i) {
    double z = x * i / 1024.0;
    if (!(p(z) > 0.0))
      throw NumericalError(std::string("singular integrand: ") + name + " <= 0 near x=" +
                           std::to_string(z));
  }
}

}  // namespace

double phi0(const RateExpansion& exp, double x) {
  if (x == 0.0) return 0.0;
  check_positive_interior(exp.mu0, x, "mu0");
  check_positive_interior(exp.lambda0, x, "lambda0");
  auto f = [&](double z) { return std::log(exp.lambda0(z) / exp.mu0(z)); };
  return integrate(f, 0.0, x, 1e-10).value;
}

double phi1(const RateExpansion& exp, double x) {
  if (x != 0.0) {
    check_positive_interior(exp.mu0, x, "mu0");
    check_positive_interior(exp.lambda0, x, "lambda0");
  }
  auto f = [&](double z) {
    double l0 = exp.lambda0(z), m0 = exp.mu0(z);
    double l1 = exp.lambda1(z), m1 = exp.mu1(z);
    return l1 / l0 - m1 / m0;
  };
  double integral = x == 0.0 ? 0.0 : integrate(f, 0.0, x, 1e-10).value;
  return integral + 0.5 * std::log(exp.mu0(x) * exp.lambda0(x));
}

double phi0_curvature(const RateExpansion& exp, double x) {
  double l0 = exp.lambda0(x), m0 = exp.mu0(x);
  if (!(l0 > 0.0) || !(m0 > 0.0))
    throw NumericalError("phi0 curvature undefined where a rate vanishes");
  return exp.lambda0Prime(x) / l0 - exp.mu0Prime(x) / m0;
}

PotentialGrid build_potential_grid(const RateExpansion& exp, double xLo, double xHi,
                                   int nPoints) {
  if (!(xLo < xHi) || nPoints < 2) throw ModelError("build_potential_grid: bad grid request");
  PotentialGrid g;
  g.rule = "gauss5-cumulative";
  g.x.resize(nPoints);
  g.phi0.resize(nPoints);
  g.phi1.resize(nPoints);
  auto f0 = [&](double z) { return std::log(exp.lambda0(z) / exp.mu0(z)); };
  auto f1 = [&](double z) {
    return exp.lambda1(z) / exp.lambda0(z) - exp.mu1(z) / exp.mu0(z);
  };
  double p0 = phi0(exp, xLo);
  double p1int = xLo == 0.0 ? 0.0 : integrate(f1, 0.0, xLo, 1e-10).value;
  for (int i = 0; i < nPoints; ++i) {
    double x = xLo + (xHi - xLo) * i / (nPoints - 1);
    g.x[i] = x;
    if (i > 0) {
      p0 += gauss5_panel(f0, g.x[i - 1], x);
      p1int += gauss5_panel(f1, g.x[i - 1], x);
    }
    g.phi0[i] = p0;
    g.phi1[i] = p1int + 0.5 * std::log(exp.mu0(x) * exp.lambda0(x));
  }
  g.panels = nPoints - 1;
  double h = (xHi - xLo) / (nPoints - 1);
  g.errorEstimate = std::pow(h, 5);  // per-panel Gauss-5 order
  return g;
}

KramersEstimate kramers_time(const RateExpansion& exp, double V, double x1Star, double xDdag,
                             bool includePhi1) {
  KramersEstimate k;
  k.x1Star = x1Star;
  k.xDdag = xDdag;
  double c1 = phi0_curvature(exp, x1Star);
  double c2 = phi0_curvature(exp, xDdag);
  if (!(c1 > 0.0) || !(c2 < 0.0))
    throw ModelError("kramers_time: need phi0''(x1*) > 0 > phi0''(xDdag); got " +
                     std::to_string(c1) + ", " + std::to_string(c2));
  double dphi0 = phi0(exp, xDdag) - phi0(exp, x1Star);
  k.barrierLeading = V * dphi0;
  k.barrierCorrection = phi1(exp, xDdag) - phi1(exp, x1Star);
  k.prefactor = 2.0 * M_PI / (exp.lambda0(xDdag) * std::sqrt(c1 * std::abs(c2)));
  k.logTime = std::log(k.prefactor) + k.barrierLeading + (includePhi1 ? k.barrierCorrection : 0.0);
  k.time = std::exp(k.logTime);
  k.bistabilityClass =
      dphi0 > 0.0 ? BistabilityClass::Nonlinear : BistabilityClass::Stochastic;
  return k;
}

double log_ratio_prefactor(double r) {
  // ln(r)/(r-1), continuous and positive for r > 0
  double u = r - 1.0;
  if (std::abs(u) < 1e-4) return 1.0 - u / 2.0 + u * u / 3.0 - u * u * u / 4.0;
  return std::log(r) / u;
}

namespace {

struct MfptGrids {
  std::vector<double> y;        // nodes on [delta, x2], x is a node
  std::vector<double> Phi;      // phi0 + phi1/V at nodes
  std::size_t ix;               // index of x
};

MfptGrids build_mfpt_grid(const RateExpansion& exp, double V, double x, double x2,
                          int nTotal) {
  const double delta = 1e-6 * x2;  // keep off the possible rate zero at 0
  MfptGrids g;
  int n1 = std::max(2, static_cast<int>(nTotal * (x - delta) / (x2 - delta)));
  int n2 = std::max(2, nTotal - n1);
  for (int i = 0; i < n1; ++i) g.y.push_back(delta + (x - delta) * i / n1);
  for (int i = 0; i <= n2; ++i) g.y.push_back(x + (x2 - x) * i / n2);
  g.ix = n1;

  auto f0 = [&](double z) { return std::log(exp.lambda0(z) / exp.mu0(z)); };
  auto f1 = [&](double z) {
    return exp.lambda1(z) / exp.lambda0(z) - exp.mu1(z) / exp.mu0(z);
  };
  double p0 = phi0(exp, delta);
  double p1int = integrate(f1, 0.0, delta, 1e-10).value;
  g.Phi.resize(g.y.size());
  for (std::size_t i = 0; i < g.y.size(); ++i) {
    if (i > 0) {
      p0 += gauss5_panel(f0, g.y[i - 1], g.y[i]);
      p1int += gauss5_panel(f1, g.y[i - 1], g.y[i]);
    }
    double ph1 = p1int + 0.5 * std::log(exp.mu0(g.y[i]) * exp.lambda0(g.y[i]));
    g.Phi[i] = p0 + ph1 / V;
  }
  return g;
}

double mfpt_asymptotic_once(const RateExpansion& exp, double V, double x, double x2,
                            int nTotal) {
  MfptGrids g = build_mfpt_grid(exp, V, x, x2, nTotal);
  const std::size_t N = g.y.size();
  // The prefactors convert sums with locally geometric terms into integrals:
  // a summand growing by s in log per step needs s/(1 - e^{-s}) = g(e^{-s}).
  // The inner summand e^{-V Phi} grows by ln(mu0/lambda0); the outer summand
  // e^{+V Phi} grows by ln(lambda0/mu0).
  std::vector<double> logInnerF(N);
  for (std::size_t i = 0; i < N; ++i) {
    double m0 = exp.mu0(g.y[i]), l0 = exp.lambda0(g.y[i]);
    logInnerF[i] = std::log(log_ratio_prefactor(l0 / m0)) - V * g.Phi[i];
  }
  std::vector<double> logInner = log_cum_trapezoid(g.y, logInnerF);
  // outer integrand over [x, x2]: g(mu0/lambda0)(z) e^{V Phi(z)} / lambda0(z) * inner(z)
  std::vector<double> zs(g.y.begin() + g.ix, g.y.end());
  std::vector<double> logOuterF(zs.size());
  for (std::size_t j = 0; j < zs.size(); ++j) {
    double z = zs[j];
    double m0 = exp.mu0(z), l0 = exp.lambda0(z);
    logOuterF[j] = std::log(log_ratio_prefactor(m0 / l0)) + V * g.Phi[g.ix + j] -
                   std::log(l0) + logInner[g.ix + j];
  }
  double logT = std::log(V) + log_trapezoid(zs, logOuterF);
  return logT;
}

}  // namespace

double mfpt_asymptotic(const RateExpansion& exp, double V, double x, double x2) {
  if (x == x2) return 0.0;
  if (!(x < x2)) throw ModelError("mfpt_asymptotic requires x < x2");
  check_positive_interior(exp.mu0, x2, "mu0");
  check_positive_interior(exp.lambda0, x2, "lambda0");
  double prev = mfpt_asymptotic_once(exp, V, x, x2, 4096);
  for (int n = 8192; n <= (1 << 17); n *= 2) {
    double cur = mfpt_asymptotic_once(exp, V, x, x2, n);
    if (!std::isfinite(cur))
      throw NumericalError(
          "mfpt_asymptotic: integrand not representable at this V; use kramers_time");
    // trapezoid halving is O(h^2): Richardson-extrapolate the pair, whose
    // residual error is |cur - prev| / 3
    if (std::abs(cur - prev) < 3e-7) return std::exp(cur + (cur - prev) / 3.0);
    prev = cur;
  }
  throw NumericalError("mfpt_asymptotic: nested quadrature did not converge; use kramers_time");
}

namespace {

// One-sided derivative helpers (second order), exact for quadratics.
double d1_forward(const ScalarFn& f, double x, double h) {
  return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2 * h)) / (2.0 * h);
}
double d1_backward(const ScalarFn& f, double x, double h) {
  return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) / (2.0 * h);
}
double d2_forward(const ScalarFn& f, double x, double h) {
  return (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2 * h) - f(x + 3 * h)) / (h * h);
}
double d2_backward(const ScalarFn& f, double x, double h) {
  return (2.0 * f(x) - 5.0 * f(x - h) + 4.0 * f(x - 2 * h) - f(x - 3 * h)) / (h * h);
}
double d2_central(const ScalarFn& f, double x, double h) {
  return (-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) /
         (12.0 * h * h);
}

// Locate interior extrema of phi on (0, x) by a dense grid; returns polished
// locations (golden-section).
std::vector<double> interior_extrema(const ScalarFn& phi, double x, bool minima) {
  const int N = 4096;
  std::vector<double> found;
  auto val = [&](double t) { return minima ? phi(t) : -phi(t); };
  double prev = val(0.0), cur = val(x / N);
  for (int i = 1; i < N; ++i) {
    double next = val(x * (i + 1) / N);
    if (cur < prev && cur <= next) {
      // golden-section polish on [x(i-1)/N, x(i+1)/N]
      double a = x * (i - 1) / N, b = x * (i + 1) / N;
      const double gr = 0.6180339887498949;
      double c = b - gr * (b - a), d = a + gr * (b - a);
      for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, x); ++it) {
        if (val(c) < val(d)) {
          b = d;
        } else {
          a = c;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
      }
      found.push_back(0.5 * (a + b));
    }
    prev = cur;
    cur = next;
  }
  return found;
}

// log of the endpoint contribution e^{-V phi(e)} / (V |phi'|) with its
// second-order correction factor.
double log_endpoint_term(double phiE, double dphi, double d2phi, double V) {
  double corr = 1.0 - d2phi / (V * dphi * dphi);
  if (!(corr > 0.0)) corr = 1.0;  // correction out of range; fall back to leading order
  return -V * phiE - std::log(V * std::abs(dphi)) + std::log(corr);
}

}  // namespace

double laplace_log_min(const ScalarFn& phi, double V, double x) {
  if (!(x > 0.0) || !(V > 0.0)) throw ModelError("laplace_log_min: need x > 0, V > 0");
  const double h = 1e-4 * std::max(1.0, x);
  std::vector<double> mins = interior_extrema(phi, x, /*minima=*/true);
  if (mins.size() > 1)
    throw NumericalError("laplace_log_min: multiple interior minima; segment the domain");
  if (mins.empty()) {
    // monotone phi: the integrand peaks at one endpoint
    if (phi(x) < phi(0.0)) {
      double dp = d1_backward(phi, x, h);
      return (log_endpoint_term(phi(x), dp, d2_backward(phi, x, h), V)) / V;
    }
    double dp = d1_forward(phi, 0.0, h);
    return (log_endpoint_term(phi(0.0), dp, d2_forward(phi, 0.0, h), V)) / V;
  }
  double xd = mins[0];
  double c = d2_central(phi, xd, h);
  if (!(c > 0.0)) throw NumericalError("laplace_log_min: non-positive curvature at the minimum");
  // Gaussian layer with the erf cut at the upper limit; the lower endpoint is
  // exponentially subdominant for a unique interior minimum.
  double z = std::sqrt(V * c / 2.0) * (x - xd);
  double logInt = -V * phi(xd) + std::log(0.5 * std::sqrt(2.0 * M_PI / (V * c))) +
                  std::log1p(std::erf(z));
  return logInt / V;
}

double laplace_log_max(const ScalarFn& phi, double V, double x) {
  if (!(x > 0.0) || !(V > 0.0)) throw ModelError("laplace_log_max: need x > 0, V > 0");
  const double h = 1e-4 * std::max(1.0, x);
  std::vector<double> maxs = interior_extrema(phi, x, /*minima=*/false);
  if (maxs.size() > 1)
    throw NumericalError("laplace_log_max: multiple interior maxima; segment the domain");
  double d0 = d1_forward(phi, 0.0, h);
  double dx = d1_backward(phi, x, h);
  if (!maxs.empty()) {
    // trough between two endpoint peaks: add both endpoint contributions
    if (!(d0 > 0.0) || !(dx < 0.0))
      throw NumericalError("laplace_log_max: endpoint slopes inconsistent with interior maximum");
    double t0 = log_endpoint_term(phi(0.0), d0, d2_forward(phi, 0.0, h), V);
    double tx = log_endpoint_term(phi(x), dx, d2_backward(phi, x, h), V);
    return log_add_exp(t0, tx) / V;
  }
  // monotone increasing phi: dominant 0-endpoint minus the upper remainder
  if (d0 > 0.0 && dx > 0.0) {
    double t0 = log_endpoint_term(phi(0.0), d0, d2_forward(phi, 0.0, h), V);
    double tx = log_endpoint_term(phi(x), dx, d2_backward(phi, x, h), V);
    return log_sub_exp(t0, tx) / V;
  }
  throw NumericalError("laplace_log_max: no interior maximum found and phi not increasing");
}

}  // namespace dgp
