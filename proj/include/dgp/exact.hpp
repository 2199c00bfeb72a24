#pragma once

#include <cstdint>
#include <vector>

#include "dgp/model.hpp"

namespace dgp {

enum class Support { Full, AbsorbedAtZero };

// Stationary distribution in log space. logWeight[n] is log p_n relative to
// p_0 (logWeight[0] = 0); logZ normalizes: p_n = exp(logWeight[n] - logZ).
struct StationaryDistribution {
  double V = 0.0;
  long long nMax = 0;
  std::vector<double> logWeight;
  double logZ = 0.0;
  Support support = Support::Full;

  double log_p(long long n) const { return logWeight[n] - logZ; }
  double p(long long n) const;
  double mean() const;
  double variance() const;
};

// Auto-extends until tail mass < 1e-12 of the total when nMax is omitted
// (nMax < 0); hard cap 1e7 states.
StationaryDistribution stationary_distribution(const BirthDeathModel& model, double V,
                                               long long nMax = -1);

struct ExactPotential {
  std::vector<double> x;    // n/V
  std::vector<double> Phi;  // -(1/V)(logWeight - logZ)
};

ExactPotential exact_potential(const StationaryDistribution& dist);

enum class AbsorbingKind { None, ExtinctionAtZero };

AbsorbingKind detect_absorbing(const BirthDeathModel& model);

// Mean first passage times with a reflecting boundary opposite the absorbing
// target. The log variants stay finite for barrier times beyond double range.
double mfpt_exact_right(const BirthDeathModel& model, double V, long long nStart,
                        long long nAbsorb);
double log_mfpt_exact_right(const BirthDeathModel& model, double V, long long nStart,
                            long long nAbsorb);
double mfpt_exact_left(const BirthDeathModel& model, double V, long long nStart,
                       long long nAbsorb, long long nReflectTop);
double log_mfpt_exact_left(const BirthDeathModel& model, double V, long long nStart,
                           long long nAbsorb, long long nReflectTop);

}  // namespace dgp
