#include "dgp/exact.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "dgp/errors.hpp"
#include "dgp/logsumexp.hpp"

namespace dgp {

namespace {
constexpr long long kHardCap = 10'000'000;
constexpr double kLogTailTol = -27.631021115928547;  // log(1e-12)
}  // namespace

double StationaryDistribution::p(long long n) const {
  if (n < 0 || n > nMax) return 0.0;
  return std::exp(logWeight[n] - logZ);
}

double StationaryDistribution::mean() const {
  double m = 0.0;
  for (long long n = 0; n <= nMax; ++n) m += p(n) * static_cast<double>(n);
  return m;
}

double StationaryDistribution::variance() const {
  double m = mean(), s = 0.0;
  for (long long n = 0; n <= nMax; ++n) {
    double d = static_cast<double>(n) - m;
    s += p(n) * d * d;
  }
  return s;
}

StationaryDistribution stationary_distribution(const BirthDeathModel& model, double V,
                                               long long nMax) {
  if (!(V > 0.0)) throw ModelError("V must be positive");
  StationaryDistribution d;
  d.V = V;
  d.logWeight.push_back(0.0);

  if (birth_rate(model, V, 0) == 0.0) {
    // all stationary mass sits on the absorbing state
    d.support = Support::AbsorbedAtZero;
    d.nMax = 0;
    d.logZ = 0.0;
    return d;
  }

  const bool autoExtend = nMax < 0;
  LogSum total;
  total.add(0.0);
  double prevRatio = kNegInf;
  bool ratiosDecreasing = false;

  long long n = 0;
  while (true) {
    if (!autoExtend && n == nMax) break;
    double u = birth_rate(model, V, n);
    if (u == 0.0) break;  // finite support ends here
    double w1 = death_rate(model, V, n + 1);
    if (!(w1 > 0.0))
      throw ModelError("death rate vanishes at n=" + std::to_string(n + 1) +
                       " while birth continues: stationary weights are not normalizable");
    double ratio = std::log(u) - std::log(w1);
    double lw = d.logWeight.back() + ratio;
    d.logWeight.push_back(lw);
    total.add(lw);
    ++n;
    if (autoExtend) {
      ratiosDecreasing = ratio < prevRatio;
      prevRatio = ratio;
      if (ratiosDecreasing && ratio < std::log(0.99)) {
        // geometric tail bound: remaining mass < exp(lw) * r/(1-r)
        double r = std::exp(ratio);
        double logTail = lw + std::log(r / (1.0 - r));
        if (logTail < total.value() + kLogTailTol) break;
      }
      if (n >= kHardCap) {
        double achieved = ratiosDecreasing && prevRatio < 0.0
                              ? std::exp(lw + std::log(std::exp(prevRatio) /
                                                       (1.0 - std::exp(prevRatio))) -
                                         total.value())
                              : 1.0;
        throw TruncationError(
            "stationary distribution: hard cap of 1e7 states reached before tail criterion",
            achieved);
      }
    }
  }
  if (!autoExtend)  // states above a vanished birth rate carry no weight
    while (static_cast<long long>(d.logWeight.size()) <= nMax) d.logWeight.push_back(kNegInf);
  d.nMax = static_cast<long long>(d.logWeight.size()) - 1;
  d.logZ = total.value();
  return d;
}

ExactPotential exact_potential(const StationaryDistribution& dist) {
  if (dist.support != Support::Full)
    throw ModelError(
        "exact_potential: distribution is absorbed at 0; the stationary potential is "
        "degenerate — use mfpt_exact_left for extinction times (quasi-stationary analysis "
        "is out of scope)");
  ExactPotential p;
  p.x.reserve(dist.nMax + 1);
  p.Phi.reserve(dist.nMax + 1);
  for (long long n = 0; n <= dist.nMax; ++n) {
    p.x.push_back(static_cast<double>(n) / dist.V);
    p.Phi.push_back(-(dist.logWeight[n] - dist.logZ) / dist.V);
  }
  return p;
}

AbsorbingKind detect_absorbing(const BirthDeathModel& model) {
  // probe death rates at a handful of states; extinction needs a path down
  double u0 = birth_rate(model, /*V=*/1.0, 0);
  if (u0 != 0.0) return AbsorbingKind::None;
  for (long long n = 1; n <= 8; ++n)
    if (death_rate(model, 1.0, n) > 0.0) return AbsorbingKind::ExtinctionAtZero;
  return AbsorbingKind::None;
}

namespace {

// log of T = sum_{m=nStart+1}^{nAbsorb} (1/(w_m p_m)) sum_{l<m} p_l, using a
// running log-sum-exp prefix so the double sum costs O(nAbsorb).
double log_mfpt_generic(const std::function<double(long long)>& u,
                        const std::function<double(long long)>& w, long long nStart,
                        long long nAbsorb) {
  if (nStart == nAbsorb) return kNegInf;  // T = 0
  if (nStart > nAbsorb) throw ModelError("mfpt: start state must precede the absorbing state");
  LogSum prefix;  // logsumexp of logWeight[0..m-1]
  LogSum timeSum;
  double lw = 0.0;  // logWeight[m] as m advances
  prefix.add(0.0);
  for (long long m = 1; m <= nAbsorb; ++m) {
    double um1 = u(m - 1);
    if (um1 <= 0.0)
      throw NumericalError("mfpt is infinite: birth rate vanishes at n=" +
                           std::to_string(m - 1) + " below the target");
    // term m: sum_{l<m} p_l / (w_m p_m) with w_m p_m = u_{m-1} p_{m-1}, so the
    // death rate at the absorbing state itself never enters
    if (m > nStart) timeSum.add(prefix.value() - std::log(um1) - lw);
    if (m < nAbsorb) {
      double wm = w(m);
      if (wm <= 0.0)
        throw NumericalError("mfpt: death rate vanishes at n=" + std::to_string(m) +
                             " on the path (stationary weights undefined)");
      lw += std::log(um1) - std::log(wm);
      prefix.add(lw);
    }
  }
  return timeSum.value();
}

}  // namespace

double log_mfpt_exact_right(const BirthDeathModel& model, double V, long long nStart,
                            long long nAbsorb) {
  if (nStart < 0 || nAbsorb < nStart)
    throw ModelError("mfpt_exact_right requires 0 <= nStart <= nAbsorb");
  return log_mfpt_generic([&](long long n) { return birth_rate(model, V, n); },
                          [&](long long n) { return death_rate(model, V, n); }, nStart,
                          nAbsorb);
}

double mfpt_exact_right(const BirthDeathModel& model, double V, long long nStart,
                        long long nAbsorb) {
  double lt = log_mfpt_exact_right(model, V, nStart, nAbsorb);
  return lt == kNegInf ? 0.0 : std::exp(lt);
}

double log_mfpt_exact_left(const BirthDeathModel& model, double V, long long nStart,
                           long long nAbsorb, long long nReflectTop) {
  if (!(0 <= nAbsorb && nAbsorb <= nStart && nStart <= nReflectTop))
    throw ModelError("mfpt_exact_left requires nAbsorb <= nStart <= nReflectTop");
  // mirror the chain about nReflectTop: births become deaths and vice versa
  const long long N = nReflectTop;
  return log_mfpt_generic([&](long long n) { return death_rate(model, V, N - n); },
                          [&](long long n) { return birth_rate(model, V, N - n); },
                          N - nStart, N - nAbsorb);
}

double mfpt_exact_left(const BirthDeathModel& model, double V, long long nStart,
                       long long nAbsorb, long long nReflectTop) {
  double lt = log_mfpt_exact_left(model, V, nStart, nAbsorb, nReflectTop);
  return lt == kNegInf ? 0.0 : std::exp(lt);
}

}  // namespace dgp
