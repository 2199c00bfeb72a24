#include "dgp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgp/asymptotics.hpp"
#include "dgp/errors.hpp"
#include "dgp/exact.hpp"

namespace dgp {

namespace {

struct RootSet {
  double mu;
  std::vector<FixedPoint> roots;
};

// Fixed points at a parameter value; if the grid lands exactly on a
// degenerate root, nudge the parameter so adjacent-interval root counts stay
// clean.
RootSet roots_at(const BirthDeathModel& family, double mu, double xLo, double xHi,
                 double nudge) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    double m = mu + attempt * nudge;
    auto fps = find_fixed_points(build_expansion(family.with_parameter(m)), xLo, xHi);
    bool degenerate = std::any_of(fps.begin(), fps.end(), [](const FixedPoint& f) {
      return f.stability == Stability::Degenerate;
    });
    if (!degenerate) return {m, std::move(fps)};
  }
  throw NumericalError("scan: persistent degenerate root at parameter " + std::to_string(mu) +
                       "; refine the grid");
}

// Greedy nearest-neighbor matching between two equally sized root lists;
// returns index pairs (ia, ib).
std::vector<std::pair<int, int>> match_roots(const std::vector<FixedPoint>& a,
                                             const std::vector<FixedPoint>& b) {
  std::vector<std::pair<int, int>> pairs;
  std::vector<bool> usedA(a.size(), false), usedB(b.size(), false);
  for (std::size_t k = 0; k < a.size(); ++k) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (usedA[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (usedB[j]) continue;
        double d = std::abs(a[i].location - b[j].location);
        if (d < best) {
          best = d;
          bi = static_cast<int>(i);
          bj = static_cast<int>(j);
        }
      }
    }
    usedA[bi] = usedB[bj] = true;
    pairs.emplace_back(bi, bj);
  }
  return pairs;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

std::vector<BifurcationEvent> scan_bifurcations(const BirthDeathModel& family,
                                                const std::vector<double>& muGrid, double xLo,
                                                double xHi) {
  if (!family.scan) throw ModelError("scan_bifurcations: model declares no scan parameter");
  if (muGrid.size() < 2 || !std::is_sorted(muGrid.begin(), muGrid.end()))
    throw ModelError("scan_bifurcations: muGrid must be sorted with >= 2 entries");
  const double nudge = 1e-9 * (muGrid.back() - muGrid.front());
  std::vector<BifurcationEvent> events;

  RootSet prev = roots_at(family, muGrid[0], xLo, xHi, nudge);
  for (std::size_t i = 1; i < muGrid.size(); ++i) {
    RootSet cur = roots_at(family, muGrid[i], xLo, xHi, nudge);
    int diff = static_cast<int>(cur.roots.size()) - static_cast<int>(prev.roots.size());
    if (diff == 2 || diff == -2) {
      // saddle-node: bisect on root count
      double lo = prev.mu, hi = cur.mu;
      std::size_t loCount = prev.roots.size();
      RootSet moreSide = diff > 0 ? cur : prev;
      while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        RootSet rs = roots_at(family, mid, xLo, xHi, nudge);
        if (rs.roots.size() == loCount)
          lo = rs.mu;
        else {
          hi = rs.mu;
          if (rs.roots.size() == moreSide.roots.size()) moreSide = rs;
        }
      }
      // location: midpoint of the closest root pair on the richer side
      double loc = moreSide.roots[0].location;
      double bestGap = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j + 1 < moreSide.roots.size(); ++j) {
        double gap = moreSide.roots[j + 1].location - moreSide.roots[j].location;
        if (gap < bestGap) {
          bestGap = gap;
          loc = 0.5 * (moreSide.roots[j].location + moreSide.roots[j + 1].location);
        }
      }
      events.push_back({0.5 * (lo + hi), BifurcationKind::SaddleNode, loc,
                        "root count " + std::to_string(prev.roots.size()) + " -> " +
                            std::to_string(cur.roots.size())});
    } else if (diff == 0 && !prev.roots.empty()) {
      // look for an exchanged-stability crossing among continued roots
      auto pairs = match_roots(prev.roots, cur.roots);
      double trackX = 0.0, bestMove = std::numeric_limits<double>::infinity();
      bool flip = false;
      for (auto [ia, ib] : pairs) {
        if (prev.roots[ia].stability != cur.roots[ib].stability) {
          double move = std::abs(prev.roots[ia].location - cur.roots[ib].location);
          if (move < bestMove) {
            bestMove = move;
            trackX = prev.roots[ia].location;
            flip = true;
          }
        }
      }
      if (flip) {
        // transcritical: bisect on the sign of b'(tracked root)
        auto slope_at = [&](double mu, double& xTrack) {
          RootSet rs = roots_at(family, mu, xLo, xHi, nudge);
          double best = std::numeric_limits<double>::infinity();
          const FixedPoint* nearest = nullptr;
          for (const FixedPoint& f : rs.roots) {
            double d = std::abs(f.location - xTrack);
            if (d < best) {
              best = d;
              nearest = &f;
            }
          }
          if (!nearest) throw NumericalError("scan: tracked root lost; refine the grid");
          xTrack = nearest->location;
          return nearest->driftSlope;
        };
        double xa = trackX, xb = trackX;
        int sa = sign_of(slope_at(prev.mu, xa));
        double lo = prev.mu, hi = cur.mu;
        double xm = trackX;
        while (hi - lo > 1e-8) {
          double mid = 0.5 * (lo + hi);
          xm = 0.5 * (xa + xb);
          int sm;
          try {
            sm = sign_of(slope_at(mid, xm));
          } catch (const NumericalError&) {
            // the colliding roots are within the degeneracy resolution: mid
            // IS the crossing to working precision
            lo = hi = mid;
            break;
          }
          if (sm == 0) {
            lo = hi = mid;
            break;
          }
          if (sm == sa) {
            lo = mid;
            xa = xm;
          } else {
            hi = mid;
            xb = xm;
          }
        }
        events.push_back({0.5 * (lo + hi), BifurcationKind::Transcritical, xm,
                          "stability exchange at x=" + std::to_string(xm)});
      }
    } else if (diff != 0) {
      throw NumericalError("scan: root count changed by " + std::to_string(diff) +
                           " across one grid step; refine muGrid");
    }
    prev = std::move(cur);
  }
  return events;
}

namespace {

struct Branch {
  double lastX;
  bool active;
};

// minima of phi0 = stable fixed points of b within the window
std::vector<FixedPoint> stable_minima(const BirthDeathModel& family, double mu, double xLo,
                                      double xHi, int gridN) {
  auto fps = find_fixed_points(build_expansion(family.with_parameter(mu)), xLo, xHi, gridN);
  std::vector<FixedPoint> mins;
  for (const FixedPoint& f : fps)
    if (f.stability == Stability::Stable) mins.push_back(f);
  return mins;
}

}  // namespace

PhaseDiagram phase_transition_scan(const BirthDeathModel& family,
                                   const std::vector<double>& muGrid, double xLo, double xHi,
                                   int xGridN) {
  if (!family.scan) throw ModelError("phase_transition_scan: model declares no scan parameter");
  if (muGrid.empty()) throw ModelError("phase_transition_scan: empty muGrid");
  if (detect_absorbing(family.with_parameter(muGrid.front())) == AbsorbingKind::ExtinctionAtZero)
    throw ModelError(
        "phase_transition_scan: family is absorbing at n=0 — the stationary distribution "
        "concentrates on extinction for every parameter value, so no phi0 landscape exists");

  const double matchTol = (xHi - xLo) / 8.0;
  PhaseDiagram diagram;
  std::vector<Branch> branches;

  auto phi0_at = [&](double mu, double x) {
    return phi0(build_expansion(family.with_parameter(mu)), x);
  };
  // per-mu minima labeled with persistent branch ids
  auto labeled_minima = [&](double mu, std::vector<Branch>& branchState) {
    std::vector<std::pair<int, FixedPoint>> out;
    for (const FixedPoint& m : stable_minima(family, mu, xLo, xHi, xGridN)) {
      int id = -1;
      double best = matchTol;
      for (std::size_t bIdx = 0; bIdx < branchState.size(); ++bIdx) {
        double d = std::abs(branchState[bIdx].lastX - m.location);
        if (d < best) {
          best = d;
          id = static_cast<int>(bIdx);
        }
      }
      if (id < 0) {
        id = static_cast<int>(branchState.size());
        branchState.push_back({m.location, true});
      } else {
        branchState[id].lastX = m.location;
      }
      out.emplace_back(id, m);
    }
    return out;
  };

  int prevGlobal = -1;
  double prevMu = muGrid.front();
  std::vector<Branch> prevBranches;
  for (double mu : muGrid) {
    auto labeled = labeled_minima(mu, branches);
    if (labeled.empty())
      throw NumericalError("phase_transition_scan: no stable fixed point at mu=" +
                           std::to_string(mu));
    int global = -1;
    double bestPhi = std::numeric_limits<double>::infinity();
    std::vector<PhaseSample> row;
    for (auto& [id, m] : labeled) {
      double p = phi0_at(mu, m.location);
      row.push_back({mu, id, m.location, p, false});
      if (p < bestPhi) {
        bestPhi = p;
        global = id;
      }
    }
    for (auto& s : row) s.isGlobal = (s.branch == global);
    bool bothCoexist = prevGlobal >= 0 && global != prevGlobal;
    if (bothCoexist) {
      bool prevHasNew = false, curHasOld = false;
      for (const auto& s : diagram.samples)
        if (s.mu == prevMu && s.branch == global) prevHasNew = true;
      for (const auto& s : row)
        if (s.branch == prevGlobal) curHasOld = true;
      if (prevHasNew && curHasOld) {
        // Maxwell point: bisect on the phi0 difference between the branches
        double xOld = 0.0, xNew = 0.0;
        for (const auto& s : diagram.samples)
          if (s.mu == prevMu) {
            if (s.branch == prevGlobal) xOld = s.xMin;
            if (s.branch == global) xNew = s.xMin;
          }
        double lo = prevMu, hi = mu;
        while (hi - lo > 1e-8) {
          double mid = 0.5 * (lo + hi);
          auto mins = stable_minima(family, mid, xLo, xHi, xGridN);
          const FixedPoint *mo = nullptr, *mn = nullptr;
          for (const FixedPoint& m : mins) {
            if (!mo || std::abs(m.location - xOld) < std::abs(mo->location - xOld)) mo = &m;
            if (!mn || std::abs(m.location - xNew) < std::abs(mn->location - xNew)) mn = &m;
          }
          if (!mo || !mn || mo == mn)
            throw NumericalError("phase_transition_scan: lost a minimum during bisection");
          double d = phi0_at(mid, mn->location) - phi0_at(mid, mo->location);
          // old branch is global on the lo side (d > 0 there)
          if (d > 0.0) {
            lo = mid;
            xOld = mo->location;
            xNew = mn->location;
          } else {
            hi = mid;
          }
        }
        diagram.transitionPoints.push_back(0.5 * (lo + hi));
      }
    }
    diagram.samples.insert(diagram.samples.end(), row.begin(), row.end());
    prevGlobal = global;
    prevMu = mu;
    prevBranches = branches;
  }
  return diagram;
}

BasinClassification classify_basin_pair(const RateExpansion& exp, double V, double basinMin,
                                        double barrier) {
  const double tol = 10.0 / V;
  BasinClassification c;
  c.basinMin = basinMin;
  c.barrier = barrier;
  c.dPhi0 = phi0(exp, barrier) - phi0(exp, basinMin);
  c.dPhi1 = phi1(exp, barrier) - phi1(exp, basinMin);
  if (c.dPhi0 > tol)
    c.label = BistabilityLabel::Nonlinear;
  else if (c.dPhi0 < -tol)
    c.label = BistabilityLabel::Stochastic;
  else
    c.label = c.dPhi1 > 0.0 ? BistabilityLabel::Stochastic : BistabilityLabel::Indeterminate;
  return c;
}

std::vector<BasinClassification> classify_bistability(const RateExpansion& exp, double V,
                                                      double xLo, double xHi) {
  auto fps = find_fixed_points(exp, xLo, xHi);
  std::vector<BasinClassification> out;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    if (fps[i].stability != Stability::Stable) continue;
    for (int dir : {-1, +1}) {
      std::size_t j = i + dir;
      if (j >= fps.size()) continue;
      if (fps[j].stability != Stability::Unstable) continue;
      // escape over this barrier must lead to another stable basin
      std::size_t k = j + dir;
      if (k >= fps.size() || fps[k].stability != Stability::Stable) continue;
      out.push_back(classify_basin_pair(exp, V, fps[i].location, fps[j].location));
    }
  }
  return out;
}

const char* bistability_name(BistabilityLabel label) {
  switch (label) {
    case BistabilityLabel::Nonlinear: return "nonlinear";
    case BistabilityLabel::Stochastic: return "stochastic";
    default: return "indeterminate";
  }
}

VanthoffCurves vanthoff_decompose(const BirthDeathModel& model, double V,
                                  const std::vector<double>& xGrid) {
  if (detect_absorbing(model) == AbsorbingKind::ExtinctionAtZero)
    throw ModelError("vanthoff_decompose: absorbing model has a degenerate potential");
  StationaryDistribution dist = stationary_distribution(model, V);

  // analytic d/dV of the log-weights: each term of log(u_l/w_{l+1}) carries
  // only V^a factors, so the derivative is exact
  std::vector<double> dlw(dist.nMax + 1, 0.0);
  for (long long n = 1; n <= dist.nMax; ++n) {
    double u = birth_rate(model, V, n - 1), w = death_rate(model, V, n);
    dlw[n] = dlw[n - 1] + birth_rate_dV(model, V, n - 1) / u - death_rate_dV(model, V, n) / w;
  }
  // d logZ / dV = E_p[d logWeight / dV]
  double E = 0.0;
  for (long long n = 0; n <= dist.nMax; ++n) E += dist.p(n) * dlw[n];

  VanthoffCurves curves;
  curves.V = V;
  for (double x : xGrid) {
    long long n = std::llround(x * V);
    if (n < 1 || n > dist.nMax)
      throw ModelError("vanthoff_decompose: x=" + std::to_string(x) +
                       " maps outside the distribution support");
    double u = birth_rate(model, V, n - 1), w = death_rate(model, V, n);
    if (!(u > 0.0) || !(w > 0.0))
      throw ModelError("vanthoff_decompose: vanishing rate at the backward difference");
    double backdiff = std::log(u / w);                  // d(ln p)/dn as a difference
    double dlnp_dV = dlw[n] - E;                        // at fixed n
    double logp = dist.logWeight[n] - dist.logZ;
    double p0t = -(dlnp_dV + x * backdiff);
    curves.x.push_back(x);
    curves.phi0Tilde.push_back(p0t);
    curves.phi1Tilde.push_back(-logp - V * p0t);  // makes the split exact
  }
  return curves;
}

}  // namespace dgp
