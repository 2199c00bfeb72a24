// Acceptance suite: one line of output per criterion, nonzero exit if any
// fails. Each check is self-contained and runs against an independent oracle
// (dense solves, closed forms, adaptive quadrature) at desk scale.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dgp/analysis.hpp"
#include "dgp/asymptotics.hpp"
#include "dgp/diffusion.hpp"
#include "dgp/exact.hpp"
#include "dgp/model.hpp"
#include "dgp/simulate.hpp"
#include "models.hpp"
#include "oracles.hpp"

using namespace dgp;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s - %s\n", idx, ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

// --- adaptive Simpson quadrature oracle --------------------------------------

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = f(0.5 * (a + m)), rm = f(0.5 * (m + b));
  double left = simpson(f, a, m, fa, lm, fm), right = simpson(f, m, b, fm, rm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, m, fa, lm, fm, left, eps / 2, depth - 1) +
         adapt(f, m, b, fm, rm, fb, right, eps / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps = 1e-12) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adapt(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), eps, 40);
}

// (1/V) ln int_a^b exp(sign * V * phi), stabilized by the extremum value
double log_integral_oracle(const std::function<double(double)>& phi, double V, double a, double b,
                           double sign) {
  double ext = sign * V * phi(a);
  for (double y : linspace(a, b, 4001)) ext = std::max(ext, sign * V * phi(y));
  auto f = [&](double y) { return std::exp(sign * V * phi(y) - ext); };
  return (ext + std::log(integrate(f, a, b))) / V;
}

// -----------------------------------------------------------------------------

bool crit1_exact_mfpt_oracle() {
  // supercritical-drift ensemble keeps the dense elimination well conditioned
  std::mt19937_64 gen(98765);
  std::uniform_real_distribution<double> birthC(1.0, 3.0);
  std::uniform_real_distribution<double> deathC(0.1, 0.5);
  std::uniform_int_distribution<long long> startDist(0, 40);
  for (int rep = 0; rep < 20; ++rep) {
    BirthDeathModel m;
    m.birthTerms = {RateTerm::mass_action(birthC(gen), 0), RateTerm::mass_action(birthC(gen), 1)};
    m.deathTerms = {RateTerm::mass_action(deathC(gen), 1), RateTerm::mass_action(deathC(gen), 2)};
    double V = 250.0 + 100.0 * deathC(gen);
    long long nAbsorb = 60 + 20 * rep;
    long long nStart = startDist(gen);
    double T = mfpt_exact_right(m, V, nStart, nAbsorb);
    double Toracle = oracles::mfpt_tridiagonal_right(m, V, nStart, nAbsorb);
    if (std::abs(T / Toracle - 1.0) > 1e-9) return false;
  }
  return true;
}

bool crit2_closed_form_distributions() {
  for (double V : {100.0, 10000.0}) {
    auto d = stationary_distribution(testmodels::poisson(1.0, 2.0), V);
    double lambda = V / 2.0;
    for (long long n = 0; n <= d.nMax; ++n) {
      double ref = n * std::log(lambda) - lambda - std::lgamma(n + 1.0);
      if (std::abs(d.log_p(n) - ref) > 1e-10) return false;
    }
    auto b = stationary_distribution(testmodels::binomial(1.0, 1.0, 1.0), V);
    long long N = std::llround(V);
    for (long long n = 0; n <= b.nMax; ++n) {
      double ref = std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0) +
                   N * std::log(0.5);
      if (std::abs(b.log_p(n) - ref) > 1e-10) return false;
    }
  }
  return true;
}

// max over the window of |Phi_exact - phi0 - phi1/V - const|, const removed
// by the window mean
double potential_residual(const BirthDeathModel& model, const RateExpansion& exp, double V,
                          double xLo, double xHi) {
  auto dist = stationary_distribution(model, V, std::llround(1.3 * xHi * V));
  auto pot = exact_potential(dist);
  std::vector<double> diff;
  for (double x : linspace(xLo, xHi, 101)) {
    long long n = std::llround(x * V);
    diff.push_back(pot.Phi[n] - phi0(exp, (double)n / V) - phi1(exp, (double)n / V) / V);
  }
  double mean = 0.0;
  for (double d : diff) mean += d;
  mean /= diff.size();
  double worst = 0.0;
  for (double d : diff) worst = std::max(worst, std::abs(d - mean));
  return worst;
}

bool crit3_potential_order() {
  struct Case {
    BirthDeathModel model;
    double xLo, xHi;
  };
  std::vector<Case> cases = {{testmodels::poisson(1.0, 2.0), 0.2, 1.2},
                             {testmodels::keizer_regularized(), 0.3, 1.8}};
  for (auto& c : cases) {
    auto exp = build_expansion(c.model);
    double prev = -1.0;
    for (double V : {250.0, 500.0, 1000.0, 2000.0}) {
      double err = potential_residual(c.model, exp, V, c.xLo, c.xHi);
      if (prev > 0.0) {
        double ratio = prev / err;
        if (ratio < 2.5 || ratio > 6.0) return false;
      }
      prev = err;
    }
  }
  return true;
}

bool crit4_kramers_convergence() {
  auto model = testmodels::schlogl();
  auto exp = build_expansion(model);
  double prevErr = 1e300;
  for (double V : {50.0, 100.0, 200.0, 400.0}) {
    double logT = log_mfpt_exact_right(model, V, std::llround(0.3 * V), std::llround(2.415 * V));
    auto full = kramers_time(exp, V, 0.3, 1.2, true);
    auto ablation = kramers_time(exp, V, 0.3, 1.2, false);
    double err = std::abs(std::expm1(full.logTime - logT));
    double errAbl = std::abs(std::expm1(ablation.logTime - logT));
    if (err >= prevErr) return false;
    if (errAbl <= err) return false;
    prevErr = err;
  }
  return true;
}

bool crit5_asymptotic_mfpt() {
  auto model = testmodels::schlogl();
  auto exp = build_expansion(model);
  for (auto [V, tol] : std::vector<std::pair<double, double>>{{60.0, 0.2}, {200.0, 0.1}}) {
    double logT = log_mfpt_exact_right(model, V, std::llround(0.3 * V), std::llround(2.415 * V));
    double Tasym = mfpt_asymptotic(exp, V, 0.3, 2.415);
    if (std::abs(Tasym / std::exp(logT) - 1.0) > tol) return false;
  }
  return true;
}

bool crit6_renewal_identity() {
  using Fn = std::function<double(double)>;
  struct Pot {
    Fn D, b;
  };
  std::vector<Pot> pots = {
      {[](double) { return 1.0; }, [](double x) { return 0.5 - x; }},
      {[](double x) { return 1.0 + 0.2 * x; }, [](double x) { return 0.5 - x; }},
      {[](double x) { return 1.5 - 0.3 * x; }, [](double x) { return 0.8 - 0.5 * x * x; }}};
  for (const auto& pot : pots)
    for (double eps : {0.05, 0.2, 1.0}) {
      DiffusionSpec spec{pot.D, pot.b, eps, 0.2, 1.8, DiffusionProvenance::User};
      double T = diffusion_mfpt(spec, 0.4, 0.4, 1.5);
      double J = stationary_flux(spec, 0.4, 1.5);
      if (std::abs(J * T - 1.0) > 1e-6) return false;
    }
  return true;
}

bool crit7_diffusions_dilemma() {
  auto exp = build_expansion(testmodels::schlogl());
  double V = 100.0;
  auto hgtt = hgtt_approx(exp, V, 0.05, 4.0);
  bool deviates = false;
  for (double x : linspace(0.05, 4.0, 200)) {
    double grad = hgtt.b(x) / (hgtt.epsilon * hgtt.D(x));
    double target = -V * std::log(exp.lambda0(x) / exp.mu0(x));
    if (std::abs(grad - target) > 1e-8 * std::max(1.0, std::abs(target))) return false;
    auto eff = effective_diffusion(exp, V, x);
    double ratio = hgtt.D(x) / eff.Dtilde;
    // the ratio sits below 1 where lambda0 > mu0 and above 1 where
    // lambda0 < mu0 (equality only at fixed points)
    double drift = exp.mu0(x) - exp.lambda0(x);
    if (std::abs(drift) > 1e-3 && (ratio - 1.0) * drift < 0.0) return false;
    // far from fixed points the two approximations disagree by > 5%
    double dFixed = std::min({std::abs(x - 0.3), std::abs(x - 1.2), std::abs(x - 3.2)});
    if (dFixed > 0.3 && std::abs(ratio - 1.0) > 0.05) deviates = true;
  }
  return deviates;
}

bool crit8_monte_carlo() {
  auto hand = testmodels::hand_chain();
  auto schlogl = testmodels::schlogl();
  double Tschlogl = mfpt_exact_right(schlogl, 40.0, 12, 20);
  int passHand = 0, passSchlogl = 0;
  for (int s = 0; s < 40; ++s) {
    auto a = mc_mfpt(hand, 1.0, 0, 2, 100000, 1000 + s);
    if (std::abs(a.mean - 3.0) <= 3.0 * a.stderror) ++passHand;
    auto b = mc_mfpt(schlogl, 40.0, 12, 20, 100000, 5000 + s);
    if (std::abs(b.mean - Tschlogl) <= 3.0 * b.stderror) ++passSchlogl;
  }
  return passHand >= 38 && passSchlogl >= 38;
}

bool crit9_bifurcations() {
  auto keizer = scan_bifurcations(testmodels::keizer_family(), linspace(0.5, 1.5, 100), -0.5, 2.0);
  if (keizer.size() != 1 || keizer[0].kind != BifurcationKind::Transcritical) return false;
  if (std::abs(keizer[0].parameterValue - 1.0) > 1e-6) return false;
  if (std::abs(keizer[0].location) > 1e-6) return false;

  auto cubicFolds =
      scan_bifurcations(testmodels::schlogl_family(), linspace(-1.0, 1.75, 23), -0.5, 5.0);
  if (cubicFolds.size() != 2) return false;
  for (const auto& e : cubicFolds)
    if (e.kind != BifurcationKind::SaddleNode) return false;
  auto cubicPhase =
      phase_transition_scan(testmodels::schlogl_family(), linspace(0.4, 1.6, 25), 0.02, 4.0);
  if (cubicPhase.transitionPoints.size() != 1) return false;
  double mw = cubicPhase.transitionPoints[0];
  if (!(mw > cubicFolds[0].parameterValue && mw < cubicFolds[1].parameterValue)) return false;

  auto quinticFolds =
      scan_bifurcations(testmodels::quintic_family(), linspace(6.5, 10.45, 40), 0.01, 4.4);
  if (quinticFolds.size() != 2) return false;
  auto quinticPhase =
      phase_transition_scan(testmodels::quintic_family(), linspace(6.5, 10.45, 40), 0.01, 4.4);
  return quinticPhase.transitionPoints.empty();
}

bool crit10_vanthoff() {
  // identity phi0Tilde + phi1Tilde/V = Phi
  auto schlogl = testmodels::schlogl();
  double V = 80.0;
  std::vector<double> xs = {0.3, 0.8, 1.2, 2.0, 3.2};
  auto curves = vanthoff_decompose(schlogl, V, xs);
  auto dist = stationary_distribution(schlogl, V);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    long long n = std::llround(xs[i] * V);
    double Phi = -(dist.logWeight[n] - dist.logZ) / V;
    if (std::abs(curves.phi0Tilde[i] + curves.phi1Tilde[i] / V - Phi) >
        1e-10 * std::max(1.0, std::abs(Phi)))
      return false;
  }

  // Poisson enthalpy is exactly V-independent
  auto poisson = testmodels::poisson(1.0, 2.0);
  auto pa = vanthoff_decompose(poisson, 200.0, {0.5, 0.65});
  auto pb = vanthoff_decompose(poisson, 400.0, {0.5, 0.65});
  for (int i : {0, 1})
    if (std::abs(pa.phi0Tilde[i] - pb.phi0Tilde[i]) > 1e-12) return false;

  // binomial enthalpy carries a c*x/(V(et-x)) correction with c = 1/2.
  // Reference keeps the literal backward-difference log term ln((N-n+1)/n)
  // (the continuum version of only that term flips the remainder's sign);
  // x-differences cancel the x-independent expectation contribution.
  auto binom = testmodels::binomial(1.0, 1.0, 1.0);
  double Vb = 100.0;
  long long N = std::llround(Vb);
  auto remainder = [&](double x) {
    long long n = std::llround(x * Vb);
    double f = vanthoff_decompose(binom, Vb, {x}).phi0Tilde[0];
    double ref = -(-std::log(1.0 - x) + x * std::log((double)(N - n + 1) / n));
    return f - ref;
  };
  auto basis = [&](double x) { return x / (Vb * (1.0 - x)); };
  double c = (remainder(0.5) - remainder(0.25)) / (basis(0.5) - basis(0.25));
  return std::abs(c - 0.5) <= 0.005;
}

bool crit11_summation_lemma() {
  // polynomial cases are exact through the 1/V and 1/V^2 corrections
  auto zero = [](double) { return 0.0; };
  auto c2 = [](double) { return 2.0; };
  if (std::abs(lemma_sum(c2, nullptr, nullptr, 1.0, 7.0, zero) - 2.0) > 1e-13) return false;
  auto lin = [](double z) { return z; };
  auto one = [](double) { return 1.0; };
  for (double V : {4.0, 64.0}) {
    double closed = oracles::power_sum_1(std::llround(V)) / (V * V);
    if (std::abs(lemma_sum(lin, nullptr, nullptr, 1.0, V, one) - closed) > 1e-13) return false;
  }
  auto quad = [](double z) { return z * z; };
  auto quadPrime = [](double z) { return 2.0 * z; };
  for (double V : {10.0, 100.0}) {
    double closed = oracles::power_sum_2(std::llround(V)) / (V * V * V);
    if (std::abs(lemma_sum(quad, nullptr, nullptr, 1.0, V, quadPrime) - closed) > 1e-13)
      return false;
  }

  // Laplace log-integrals vs adaptive quadrature, x outside boundary layers
  double V = 400.0, tol = 5.0 / (V * V);
  auto well = [](double y) { return (y - 0.3) * (y - 0.3); };
  if (std::abs(laplace_log_min(well, V, 1.0) - log_integral_oracle(well, V, 0.0, 1.0, -1.0)) > tol)
    return false;
  // the max variant handles an interior maximum of phi (endpoint-dominated
  // integral); the integrand is still exp(-V phi)
  auto bump = [](double y) { return 0.2 - (y - 0.6) * (y - 0.6); };
  if (std::abs(laplace_log_max(bump, V, 1.0) - log_integral_oracle(bump, V, 0.0, 1.0, -1.0)) > tol)
    return false;
  return true;
}

}  // namespace

int main() {
  report(1, crit1_exact_mfpt_oracle(),
         "exact MFPT equals the dense tridiagonal solve on 20 randomized models (1e-9 rel)");
  report(2, crit2_closed_form_distributions(),
         "Poisson and binomial stationary laws match closed forms to 1e-10 up to V = 1e4");
  report(3, crit3_potential_order(),
         "|Phi_exact - phi0 - phi1/V - const| shrinks by [2.5, 6] per V doubling");
  report(4, crit4_kramers_convergence(),
         "Kramers error decreases monotonically in V; phi1-in-exponent beats phi0-only");
  report(5, crit5_asymptotic_mfpt(),
         "asymptotic MFPT integral within 20% (V=60) and 10% (V=200) of exact");
  report(6, crit6_renewal_identity(),
         "diffusion MFPT times stationary flux equals 1 to 1e-6 on a 3x3 case grid");
  report(7, crit7_diffusions_dilemma(),
         "HGTT log-density gradient is -V phi0' exactly, yet D_hgtt/D_tilde deviates > 5%");
  report(8, crit8_monte_carlo(),
         "mc_mfpt brackets exact MFPT within 3 stderr on >= 95% of 40 seeds, both models");
  report(9, crit9_bifurcations(),
         "transcritical at k1=k2 (x=0); two folds + one Maxwell point; quintic has none");
  report(10, crit10_vanthoff(),
         "van't Hoff split: identity to 1e-10, V-free Poisson enthalpy, binomial 1/2 coeff");
  report(11, crit11_summation_lemma(),
         "lemma matches power sums exactly; Laplace log-integrals within 5/V^2 of quadrature");
  return failures == 0 ? 0 : 1;
}
