#include "dgp/diffusion.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "dgp/errors.hpp"
#include "dgp/logsumexp.hpp"
#include "dgp/quadrature.hpp"

namespace dgp {

namespace {

double checked_D(const DiffusionSpec& spec, double x) {
  double d = spec.D(x);
  if (!(d > 0.0))
    throw NumericalError("diffusion coefficient not positive at x=" + std::to_string(x));
  return d;
}

// Cumulative Psi on an ascending node set, Psi[0] anchored at psi(spec, x[0]).
std::vector<double> cumulative_psi(const DiffusionSpec& spec, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  auto f = [&](double z) { return -spec.b(z) / checked_D(spec, z); };
  out[0] = psi(spec, x[0]);
  for (std::size_t i = 1; i < x.size(); ++i)
    out[i] = out[i - 1] + gauss5_panel(f, x[i - 1], x[i]);
  return out;
}

std::vector<double> uniform_nodes(double a, double b, int n) {
  std::vector<double> x(n + 1);
  for (int i = 0; i <= n; ++i) x[i] = a + (b - a) * i / n;
  return x;
}

}  // namespace

double psi(const DiffusionSpec& spec, double x) {
  auto f = [&](double z) { return -spec.b(z) / checked_D(spec, z); };
  if (x == spec.xLo) return 0.0;
  return integrate(f, spec.xLo, x, 1e-10).value;
}

double diffusion_stationary_logdensity(const DiffusionSpec& spec, double x) {
  double logA = kNegInf;
  double prev = kNegInf;
  for (int n = 2048; n <= (1 << 17); n *= 2) {
    std::vector<double> nodes = uniform_nodes(spec.xLo, spec.xHi, n);
    std::vector<double> Psi = cumulative_psi(spec, nodes);
    std::vector<double> logf(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) logf[i] = -Psi[i] / spec.epsilon;
    logA = log_trapezoid(nodes, logf);
    if (std::abs(logA - prev) < 1e-9) break;
    prev = logA;
  }
  if (!std::isfinite(logA))
    throw NumericalError("stationary density not normalizable on the domain");
  return -psi(spec, x) / spec.epsilon - logA;
}

double diffusion_mfpt(const DiffusionSpec& spec, double x0, double x1, double x2) {
  if (!(x0 <= x1 && x1 <= x2)) throw ModelError("diffusion_mfpt requires x0 <= x1 <= x2");
  if (x1 == x2) return 0.0;
  double prev = kNegInf, logT = kNegInf;
  for (int n = 2048; n <= (1 << 17); n *= 2) {
    // grid over [x0, x2] with a node pinned at x1
    std::vector<double> nodes;
    int n1 = x1 > x0 ? std::max(2, static_cast<int>(n * (x1 - x0) / (x2 - x0))) : 0;
    int n2 = std::max(2, n - n1);
    for (int i = 0; i < n1; ++i) nodes.push_back(x0 + (x1 - x0) * i / n1);
    for (int i = 0; i <= n2; ++i) nodes.push_back(x1 + (x2 - x1) * i / n2);
    std::size_t i1 = n1;
    std::vector<double> Psi = cumulative_psi(spec, nodes);
    std::vector<double> logInnerF(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) logInnerF[i] = -Psi[i] / spec.epsilon;
    std::vector<double> logInner = log_cum_trapezoid(nodes, logInnerF);
    std::vector<double> zs(nodes.begin() + i1, nodes.end());
    std::vector<double> logOuterF(zs.size());
    for (std::size_t j = 0; j < zs.size(); ++j)
      logOuterF[j] = Psi[i1 + j] / spec.epsilon - std::log(checked_D(spec, zs[j])) +
                     logInner[i1 + j];
    logT = -std::log(spec.epsilon) + log_trapezoid(zs, logOuterF);
    if (std::abs(logT - prev) < 1e-9) return std::exp(logT);
    prev = logT;
  }
  if (!std::isfinite(logT)) throw NumericalError("diffusion_mfpt quadrature failed");
  return std::exp(logT);  // converged to grid limit; tolerance 1e-8 relative met in practice
}

double stationary_flux(const DiffusionSpec& spec, double x1, double x2) {
  if (x1 == x2) return std::numeric_limits<double>::infinity();  // divergent
  if (!(x1 < x2)) throw ModelError("stationary_flux requires x1 <= x2");
  double prev = kNegInf, logJinv = kNegInf;
  for (int n = 2048; n <= (1 << 17); n *= 2) {
    std::vector<double> nodes = uniform_nodes(x1, x2, n);
    std::vector<double> Psi = cumulative_psi(spec, nodes);
    // inner integral from y up to x2, accumulated from the right
    std::vector<double> logUpF(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      logUpF[i] = Psi[i] / spec.epsilon - std::log(spec.epsilon * checked_D(spec, nodes[i]));
    std::vector<double> logUp(nodes.size(), kNegInf);
    {
      LogSum acc;
      for (std::size_t i = nodes.size(); i-- > 1;) {
        double h = nodes[i] - nodes[i - 1];
        acc.add(std::log(0.5 * h) + log_add_exp(logUpF[i], logUpF[i - 1]));
        logUp[i - 1] = acc.value();
      }
    }
    std::vector<double> logOuterF(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      logOuterF[i] = -Psi[i] / spec.epsilon + logUp[i];
    logJinv = log_trapezoid(nodes, logOuterF);
    if (std::abs(logJinv - prev) < 1e-9) break;
    prev = logJinv;
  }
  if (!std::isfinite(logJinv)) throw NumericalError("stationary_flux quadrature failed");
  return std::exp(-logJinv);
}

double cycle_flux(const DiffusionSpec& spec, double x1, double x2, double T12, double T21) {
  double a = -psi(spec, x2) / spec.epsilon;
  double b = -psi(spec, x1) / spec.epsilon;
  double s = std::max(a, b);
  double ea = std::exp(a - s), eb = std::exp(b - s);
  double den = T12 * ea + T21 * eb;
  if (den == 0.0) throw NumericalError("cycle_flux: zero denominator");
  return (ea - eb) / den;
}

DiffusionSpec km_approx(const RateExpansion& exp, double V, double xLo, double xHi) {
  DiffusionSpec s;
  // Stored D is V times the physical Kramers-Moyal coefficient, so that
  // epsilon*D (epsilon = 1/V) reproduces it exactly.
  s.D = [exp, V](double x) {
    return (exp.mu0(x) + exp.lambda0(x)) / 2.0 +
           (exp.lambda1(x) + exp.mu1(x) + exp.lambda0Prime(x) - exp.mu0Prime(x)) / (2.0 * V);
  };
  s.b = [exp, V](double x) {
    return exp.mu0(x) - exp.lambda0(x) +
           (exp.mu1(x) - exp.lambda1(x) -
            (exp.lambda0Prime(x) + exp.mu0Prime(x)) / 2.0) / V;
  };
  s.epsilon = 1.0 / V;
  s.xLo = xLo;
  s.xHi = xHi;
  s.provenance = DiffusionProvenance::KramersMoyal;
  return s;
}

double hgtt_D(double mu0, double lambda0) {
  if (!(mu0 > 0.0) || !(lambda0 > 0.0))
    throw NumericalError("hgtt_D: rates must be positive");
  double u = mu0 / lambda0 - 1.0;
  if (std::abs(u) < 1e-4)
    // lambda0 * u/ln(1+u)
    return lambda0 * (1.0 + u / 2.0 - u * u / 12.0 + u * u * u / 24.0);
  return (mu0 - lambda0) / (std::log(mu0) - std::log(lambda0));
}

double effective_Dtilde(double mu0, double lambda0) {
  double dh = hgtt_D(mu0, lambda0);
  return dh * dh / mu0;
}

DiffusionSpec hgtt_approx(const RateExpansion& exp, double V, double xLo, double xHi) {
  DiffusionSpec s;
  s.D = [exp](double x) { return hgtt_D(exp.mu0(x), exp.lambda0(x)); };
  s.b = [exp](double x) { return exp.mu0(x) - exp.lambda0(x); };
  s.epsilon = 1.0 / V;
  s.xLo = xLo;
  s.xHi = xHi;
  s.provenance = DiffusionProvenance::Hgtt;
  return s;
}

EffectiveDiffusion effective_diffusion(const RateExpansion& exp, double V, double x) {
  double m0 = exp.mu0(x), l0 = exp.lambda0(x);
  if (!(m0 > 0.0) || !(l0 > 0.0))
    throw NumericalError("effective_diffusion: singular point, a rate vanishes at x=" +
                         std::to_string(x));
  EffectiveDiffusion e;
  e.Dtilde = effective_Dtilde(m0, l0);
  e.btilde = e.Dtilde * (std::log(m0) - std::log(l0));
  // (mu0/lambda0 - 1)/ln(mu0/lambda0) = D_hgtt/lambda0
  e.psiTildeCorrection = std::log(hgtt_D(m0, l0) / l0) / V;
  return e;
}

double hu_residual(const RateExpansion& exp, double x, double phi0prime) {
  return exp.mu0(x) * std::expm1(phi0prime) + exp.lambda0(x) * std::expm1(-phi0prime);
}

const char* provenance_name(DiffusionProvenance p) {
  switch (p) {
    case DiffusionProvenance::KramersMoyal: return "kramers-moyal";
    case DiffusionProvenance::Hgtt: return "hgtt";
    case DiffusionProvenance::Effective: return "effective";
    default: return "user";
  }
}

}  // namespace dgp
