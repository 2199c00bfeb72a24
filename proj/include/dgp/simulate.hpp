#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dgp/model.hpp"

namespace dgp {

struct StopRule {
  std::optional<double> tMax;
  std::optional<long long> hitState;

  static StopRule at_time(double t) { return {t, std::nullopt}; }
  static StopRule at_state(long long n) { return {std::nullopt, n}; }
};

struct Trajectory {
  std::vector<double> times;       // event times, increasing
  std::vector<long long> states;   // state after each event
  long long n0 = 0;
  std::uint64_t seed = 0;
  bool absorbed = false;           // trapped before the stop rule fired
  double finalTime = 0.0;
};

Trajectory ssa_trajectory(const BirthDeathModel& model, double V, long long n0, StopRule stop,
                          std::uint64_t seed, std::uint64_t maxEvents = 100'000'000);

struct HittingTimeEstimate {
  double mean = 0.0;
  double stderror = 0.0;
  std::uint64_t replicas = 0;   // completed replicas
  std::uint64_t requested = 0;
  std::uint64_t seedBase = 0;
};

// Monte-Carlo MFPT from n0 to nAbsorb (either direction). Replica r draws
// from the (seedBase, r) stream; results are independent of execution order
// and thread count. maxSeconds caps wall-clock time; on expiry a partial
// result carries the completed-replica count.
HittingTimeEstimate mc_mfpt(const BirthDeathModel& model, double V, long long n0,
                            long long nAbsorb, std::uint64_t replicas, std::uint64_t seedBase,
                            int threads = 0, double maxSeconds = 0.0);

}  // namespace dgp
