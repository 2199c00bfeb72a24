#pragma once

#include <functional>
#include <string>

#include "dgp/model.hpp"

namespace dgp {

enum class DiffusionProvenance { KramersMoyal, Hgtt, Effective, User };

// Spec for the 1-d diffusion  df/dt = d/dx [ eps D(x) df/dx - b(x) f ].
// eps is kept explicit (1/V for the discrete-chain approximations, free
// otherwise) so one spec type serves both uses.
struct DiffusionSpec {
  std::function<double(double)> D;
  std::function<double(double)> b;
  double epsilon = 1.0;
  double xLo = 0.0;
  double xHi = 1.0;
  DiffusionProvenance provenance = DiffusionProvenance::User;
};

// Psi(x) = -int_{xLo}^x b/D.
double psi(const DiffusionSpec& spec, double x);

// ln f^ss(x) = -Psi(x)/eps - ln A, A the quadrature normalizer over the domain.
double diffusion_stationary_logdensity(const DiffusionSpec& spec, double x);

// MFPT from x1 to x2 with reflecting boundary at x0 <= x1.
double diffusion_mfpt(const DiffusionSpec& spec, double x0, double x1, double x2);

// Stationary flux for the source-at-x1 / sink-at-x2 problem; 1/J equals the
// mirrored double integral.
double stationary_flux(const DiffusionSpec& spec, double x1, double x2);

// J_cycle = (e^{-Psi(x2)/eps} - e^{-Psi(x1)/eps}) /
//           (T12 e^{-Psi(x2)/eps} + T21 e^{-Psi(x1)/eps})
double cycle_flux(const DiffusionSpec& spec, double x1, double x2, double T12, double T21);

// The three discrete-to-continuous approximations.
DiffusionSpec km_approx(const RateExpansion& exp, double V, double xLo, double xHi);
DiffusionSpec hgtt_approx(const RateExpansion& exp, double V, double xLo, double xHi);

struct EffectiveDiffusion {
  double Dtilde;
  double btilde;
  double psiTildeCorrection;  // (1/V) ln((mu0/lambda0 - 1)/(ln mu0 - ln lambda0))
};

EffectiveDiffusion effective_diffusion(const RateExpansion& exp, double V, double x);

// D_hgtt = (mu0 - lambda0)/(ln mu0 - ln lambda0), with the series branch near
// mu0 = lambda0.
double hgtt_D(double mu0, double lambda0);
double effective_Dtilde(double mu0, double lambda0);

// Residual of mu0 (e^{s} - 1) + lambda0 (e^{-s} - 1) at s = phi0prime.
double hu_residual(const RateExpansion& exp, double x, double phi0prime);

const char* provenance_name(DiffusionProvenance p);

}  // namespace dgp
