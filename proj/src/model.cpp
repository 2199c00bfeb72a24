#include "dgp/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dgp/errors.hpp"

namespace dgp {

namespace {

double falling_factorial(long long n, int k) {
  if (k == 0) return 1.0;
  if (n < k) return 0.0;
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= static_cast<double>(n - i);
  return p;
}

double term_value(const RateTerm& t, double V, long long n) {
  return t.c * std::pow(V, t.vexp) * falling_factorial(n, t.order);
}

double eval_terms(const std::vector<RateTerm>& terms, double V, long long n, const char* side) {
  double total = 0.0;
  for (const RateTerm& t : terms) total += term_value(t, V, n);
  if (total < 0.0) {
    // name the most negative contribution
    int worst = -1;
    double worstVal = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      double v = term_value(terms[i], V, n);
      if (v < worstVal) {
        worstVal = v;
        worst = static_cast<int>(i);
      }
    }
    throw ModelError(std::string(side) + " rate negative at n=" + std::to_string(n) +
                     " (V=" + std::to_string(V) + "), dominated by term " +
                     std::to_string(worst));
  }
  return total;
}

}  // namespace

BirthDeathModel BirthDeathModel::with_parameter(double value) const {
  if (!scan) throw ModelError("model declares no scan parameter");
  BirthDeathModel m = *this;
  for (auto [side, idx] : scan->targets) {
    auto& terms = side == Side::Birth ? m.birthTerms : m.deathTerms;
    if (idx < 0 || idx >= static_cast<int>(terms.size()))
      throw ModelError("scan target index " + std::to_string(idx) + " out of range");
    terms[idx].c = value;
  }
  return m;
}

void validate_model(const BirthDeathModel& model) {
  for (const auto* terms : {&model.birthTerms, &model.deathTerms})
    for (const RateTerm& t : *terms)
      if (t.order < 0) throw ModelError("rate term order must be nonnegative");
  if (model.birthTerms.empty() && model.deathTerms.empty())
    throw ModelError("model has no rate terms");
}

double birth_rate(const BirthDeathModel& model, double V, long long n) {
  return eval_terms(model.birthTerms, V, n, "birth");
}

double death_rate(const BirthDeathModel& model, double V, long long n) {
  return eval_terms(model.deathTerms, V, n, "death");
}

std::pair<double, double> evaluate_rates(const BirthDeathModel& model, double V, long long n) {
  if (n < 0) throw ModelError("state must be nonnegative");
  if (!(V > 0.0)) throw ModelError("V must be positive");
  return {birth_rate(model, V, n), death_rate(model, V, n)};
}

double birth_rate_dV(const BirthDeathModel& model, double V, long long n) {
  double d = 0.0;
  for (const RateTerm& t : model.birthTerms)
    d += t.c * t.vexp * std::pow(V, t.vexp - 1) * falling_factorial(n, t.order);
  return d;
}

double death_rate_dV(const BirthDeathModel& model, double V, long long n) {
  double d = 0.0;
  for (const RateTerm& t : model.deathTerms)
    d += t.c * t.vexp * std::pow(V, t.vexp - 1) * falling_factorial(n, t.order);
  return d;
}

namespace {

// Expansion of (1/V) * c * V^a * ff(xV, k) in powers of 1/V.
// With d = a + k - 1:
//   d > 0   -> divergent leading behavior, rejected
//   d = 0   -> contributes c x^k to the leading order and
//              -c*k(k-1)/2 * x^{k-1} to the 1/V correction
//              (ff(xV,k) = (xV)^k - [k(k-1)/2](xV)^{k-1} + ...)
//   d = -1  -> contributes c x^k to the 1/V correction only
//   d <= -2 -> O(V^-2), dropped
void accumulate(const std::vector<RateTerm>& terms, Polynomial& lead, Polynomial& corr,
                const char* side) {
  for (const RateTerm& t : terms) {
    int d = t.vexp + t.order - 1;
    if (d > 0)
      throw ModelError(std::string(side) + " term with order " + std::to_string(t.order) +
                       " and volume exponent " + std::to_string(t.vexp) +
                       " diverges as V grows (a > 1-k)");
    if (d == 0) {
      lead.add_term(t.order, t.c);
      if (t.order >= 2) corr.add_term(t.order - 1, -t.c * t.order * (t.order - 1) / 2.0);
    } else if (d == -1) {
      corr.add_term(t.order, t.c);
    }
  }
}

}  // namespace

RateExpansion build_expansion(const BirthDeathModel& model) {
  validate_model(model);
  RateExpansion e;
  accumulate(model.birthTerms, e.mu0, e.mu1, "birth");
  accumulate(model.deathTerms, e.lambda0, e.lambda1, "death");
  e.mu0Prime = e.mu0.derivative();
  e.lambda0Prime = e.lambda0.derivative();
  e.b = e.mu0 - e.lambda0;
  e.bPrime = e.b.derivative();
  return e;
}

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    default: return "degenerate";
  }
}

std::vector<FixedPoint> find_fixed_points(const RateExpansion& exp, double xMin, double xMax,
                                          int gridN) {
  if (!(xMin < xMax)) throw ModelError("find_fixed_points: xMin must be < xMax");
  const auto& b = exp.b;
  auto make_fp = [&](double x) {
    double slope = exp.bPrime(x);
    Stability s = Stability::Degenerate;
    if (slope < -1e-8)
      s = Stability::Stable;
    else if (slope > 1e-8)
      s = Stability::Unstable;
    return FixedPoint{x, s, slope};
  };

  std::vector<double> roots;
  double prevX = xMin, prevB = b(xMin);
  for (int i = 1; i <= gridN; ++i) {
    double x = xMin + (xMax - xMin) * i / gridN;
    double bx = b(x);
    if (prevB == 0.0) {
      roots.push_back(prevX);
    } else if (bx != 0.0 && prevB * bx < 0.0) {
      // bisect to 1e-12 relative
      double lo = prevX, hi = x, blo = prevB;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double bm = b(mid);
        if (bm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (blo * bm < 0.0)
          hi = mid;
        else {
          lo = mid;
          blo = bm;
        }
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prevX = x;
    prevB = bx;
  }
  if (prevB == 0.0) roots.push_back(prevX);

  // dedupe (a root sitting exactly on a grid node can be seen twice)
  std::sort(roots.begin(), roots.end());
  std::vector<FixedPoint> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back().location) < 1e-9 * std::max(1.0, std::abs(r)))
      continue;
    out.push_back(make_fp(r));
  }
  return out;
}

}  // namespace dgp
