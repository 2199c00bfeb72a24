#pragma once

// Shared model definitions for the test suite.

#include "dgp/model.hpp"

namespace testmodels {

using dgp::BirthDeathModel;
using dgp::RateTerm;
using dgp::ScanBinding;
using dgp::Side;

// u_n = alpha V, w_n = beta n; stationary law is Poisson(alpha V / beta).
inline BirthDeathModel poisson(double alpha = 1.0, double beta = 2.0) {
  BirthDeathModel m;
  m.birthTerms = {RateTerm::mass_action(alpha, 0)};
  m.deathTerms = {RateTerm::mass_action(beta, 1)};
  return m;
}

// u_n = k1 n, w_n = km1 n(n-1)/V + k2 n; absorbing at n = 0.
inline BirthDeathModel keizer(double k1 = 2.0, double km1 = 1.0, double k2 = 1.0) {
  BirthDeathModel m;
  m.birthTerms = {RateTerm::mass_action(k1, 1)};
  m.deathTerms = {RateTerm::mass_action(km1, 2), RateTerm::mass_action(k2, 1)};
  return m;
}

// Keizer with a small constant birth eps*V added to remove the absorbing state.
inline BirthDeathModel keizer_regularized(double eps = 0.01) {
  BirthDeathModel m = keizer();
  m.birthTerms.push_back(RateTerm::mass_action(eps, 0));
  return m;
}

// u_n = kp (et V - n), w_n = km n; stationary law is binomial(et V, kp/(kp+km)).
inline BirthDeathModel binomial(double kp = 1.0, double km = 1.0, double et = 1.0) {
  BirthDeathModel m;
  m.birthTerms = {{kp * et, 0, 1}, {-kp, 1, 0}};
  m.deathTerms = {RateTerm::mass_action(km, 1)};
  return m;
}

// Bistable cubic drift b(x) = -(x-0.3)(x-1.2)(x-3.2):
//   mu0 = 4.7 x^2 + 1.152, lambda0 = x^3 + 5.16 x.
// Fixed points: 0.3 (stable), 1.2 (barrier), 3.2 (stable).
inline BirthDeathModel schlogl() {
  BirthDeathModel m;
  m.birthTerms = {RateTerm::mass_action(4.7, 2), RateTerm::mass_action(1.152, 0)};
  m.deathTerms = {RateTerm::mass_action(1.0, 3), RateTerm::mass_action(5.16, 1)};
  return m;
}

// schlogl with the constant birth coefficient as scan parameter "mu".
// Folds at mu ~ -0.86543 (x ~ 2.4237) and mu ~ 1.65224 (x ~ 0.70967);
// Maxwell point at mu ~ 1.0780787.
inline BirthDeathModel schlogl_family() {
  BirthDeathModel m = schlogl();
  m.scan = ScanBinding{"mu", {{Side::Birth, 1}}};
  return m;
}

// Keizer-style family with b(x) = (k1 - k2) x - km1 x^2, scanning k1;
// transcritical at k1 = k2 = 1, x = 0.
inline BirthDeathModel keizer_family() {
  BirthDeathModel m = keizer(1.0, 1.0, 1.0);
  m.scan = ScanBinding{"k1", {{Side::Birth, 0}}};
  return m;
}

// Quintic family with two folds inside the scan window and no Maxwell point:
//   lambda0 = g(x) + 8 x^4,  g = 1.6x^5 - 16x^4 + (172/3)x^3 - 88x^2 + 52.5x + 2
//   mu0     = mu   + 8 x^4   (scan binds the constant birth coefficient)
// g' = 8(x-0.5)(x-1.5)(x-2.5)(x-3.5), so b = mu - g has folds at mu = 7.40
// (x=1.5) and mu = 31/3 (x=2.5); the first basin stays the global phi0
// minimum across mu in [6.5, 10.45].
inline BirthDeathModel quintic_family() {
  BirthDeathModel m;
  m.birthTerms = {RateTerm::mass_action(8.5, 0), RateTerm::mass_action(8.0, 4)};
  m.deathTerms = {RateTerm::mass_action(1.6, 5),  RateTerm::mass_action(-8.0, 4),
                  RateTerm::mass_action(172.0 / 3.0, 3), RateTerm::mass_action(-88.0, 2),
                  RateTerm::mass_action(52.5, 1), RateTerm::mass_action(2.0, 0)};
  m.scan = ScanBinding{"mu", {{Side::Birth, 0}}};
  return m;
}

// mu0 = lambda0 = 1 + 3x - x^2 on [0, 3]: b = 0 identically, phi0 flat,
// phi1 = ln(1 + 3x - x^2) has a maximum at x = 1.5.
inline BirthDeathModel flat_phi0() {
  BirthDeathModel m;
  m.birthTerms = {RateTerm::mass_action(1.0, 0), RateTerm::mass_action(3.0, 1),
                  RateTerm::mass_action(-1.0, 2)};
  m.deathTerms = m.birthTerms;
  return m;
}

// 3-state hand chain: u = (1, 1), w = (., 1, 1) up to state 2.
// Implemented as constant rates u = w = 1 (V-independent); T(0 -> 2) = 3.
inline BirthDeathModel hand_chain() {
  BirthDeathModel m;
  m.birthTerms = {{1.0, 0, 0}};
  m.deathTerms = {{1.0, 0, 0}};
  return m;
}

}  // namespace testmodels
