#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgp/polynomial.hpp"

namespace dgp {

// One falling-factorial monomial of a rate law:
//   c * V^a * n(n-1)...(n-k+1)
// With the mass-action default a = 1-k this tends to c*x^k per unit volume.
struct RateTerm {
  double c = 0.0;
  int order = 0;        // k >= 0
  int vexp = 0;         // a

  static RateTerm mass_action(double c, int order) { return {c, order, 1 - order}; }
};

enum class Side { Birth, Death };

// Binds a named scan parameter into selected term coefficients.
struct ScanBinding {
  std::string name;
  std::vector<std::pair<Side, int>> targets;  // (side, term index)
};

struct BirthDeathModel {
  std::vector<RateTerm> birthTerms;
  std::vector<RateTerm> deathTerms;
  std::optional<ScanBinding> scan;

  // Returns a copy with the scan parameter's value written into every bound
  // coefficient. Throws ModelError if no scan binding is declared.
  BirthDeathModel with_parameter(double value) const;
};

void validate_model(const BirthDeathModel& model);

// Exact rate evaluation. Each rate is the sum of its term list; a negative
// total is a model-validity error naming the offending term and state.
std::pair<double, double> evaluate_rates(const BirthDeathModel& model, double V, long long n);
double birth_rate(const BirthDeathModel& model, double V, long long n);
double death_rate(const BirthDeathModel& model, double V, long long n);

// d/dV of the rates (analytic: only the V^a factors depend on V).
double birth_rate_dV(const BirthDeathModel& model, double V, long long n);
double death_rate_dV(const BirthDeathModel& model, double V, long long n);

// Large-V expansion of the intensive rates:
//   (1/V) u_{xV}(V) = mu0(x) + mu1(x)/V + O(V^-2),  same for w with lambda.
struct RateExpansion {
  Polynomial mu0, mu1, lambda0, lambda1;
  Polynomial mu0Prime, lambda0Prime;
  Polynomial b;       // mu0 - lambda0
  Polynomial bPrime;

  double drift(double x) const { return b(x); }
};

RateExpansion build_expansion(const BirthDeathModel& model);

enum class Stability { Stable, Unstable, Degenerate };

struct FixedPoint {
  double location;
  Stability stability;
  double driftSlope;  // b'(x*)
};

// All sign-change roots of b on [xMin, xMax], polished to 1e-12 relative and
// sorted ascending. gridN controls the bracketing grid.
std::vector<FixedPoint> find_fixed_points(const RateExpansion& exp, double xMin, double xMax,
                                          int gridN = 2048);

const char* stability_name(Stability s);

}  // namespace dgp
