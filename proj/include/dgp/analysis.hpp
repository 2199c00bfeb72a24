#pragma once

#include <string>
#include <vector>

#include "dgp/model.hpp"

namespace dgp {

enum class BifurcationKind { Transcritical, SaddleNode };

struct BifurcationEvent {
  double parameterValue;
  BifurcationKind kind;
  double location;
  std::string evidence;
};

// Deterministic bifurcations of b(x) across the scan parameter: root sets are
// matched between adjacent grid values by nearest-neighbor continuation;
// events are localized by bisection to 1e-8 in the parameter.
std::vector<BifurcationEvent> scan_bifurcations(const BirthDeathModel& family,
                                                const std::vector<double>& muGrid, double xLo,
                                                double xHi);

struct PhaseSample {
  double mu;
  int branch;
  double xMin;
  double phi0Min;
  bool isGlobal;
};

struct PhaseDiagram {
  std::vector<PhaseSample> samples;
  std::vector<double> transitionPoints;  // Maxwell points (argmin branch switches)
};

PhaseDiagram phase_transition_scan(const BirthDeathModel& family,
                                   const std::vector<double>& muGrid, double xLo, double xHi,
                                   int xGridN = 2048);

enum class BistabilityLabel { Nonlinear, Stochastic, Indeterminate };

struct BasinClassification {
  double basinMin;    // x of the stable fixed point
  double barrier;     // x of the adjacent unstable fixed point
  BistabilityLabel label;
  double dPhi0;       // phi0(barrier) - phi0(basinMin)
  double dPhi1;
};

// Classify one (basin minimum, barrier) pair from phi0/phi1 differences.
BasinClassification classify_basin_pair(const RateExpansion& exp, double V, double basinMin,
                                        double barrier);

// One entry per (stable basin, adjacent barrier) pair found on [xLo, xHi];
// empty for single-basin models.
std::vector<BasinClassification> classify_bistability(const RateExpansion& exp, double V,
                                                      double xLo, double xHi);

const char* bistability_name(BistabilityLabel label);

struct VanthoffCurves {
  double V = 0.0;
  std::vector<double> x;
  std::vector<double> phi0Tilde;
  std::vector<double> phi1Tilde;
};

// Enthalpy/entropy split of the exact potential via analytic d/dV of the
// normalized stationary log-weights; phi0Tilde + phi1Tilde/V recovers
// Phi(x,V) identically.
VanthoffCurves vanthoff_decompose(const BirthDeathModel& model, double V,
                                  const std::vector<double>& xGrid);

}  // namespace dgp
