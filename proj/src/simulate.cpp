#include "dgp/simulate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "dgp/errors.hpp"
#include "dgp/exact.hpp"
#include "dgp/rng.hpp"

namespace dgp {

namespace {

// Lazily grown rate cache: rate laws are polynomial in n, so per-state values
// are computed once per call site.
class RateCache {
 public:
  RateCache(const BirthDeathModel& model, double V) : model_(model), V_(V) {}
  double u(long long n) {
    ensure(n);
    return u_[n];
  }
  double w(long long n) {
    ensure(n);
    return w_[n];
  }

 private:
  void ensure(long long n) {
    while (static_cast<long long>(u_.size()) <= n) {
      long long m = static_cast<long long>(u_.size());
      u_.push_back(birth_rate(model_, V_, m));
      w_.push_back(m == 0 ? 0.0 : death_rate(model_, V_, m));
    }
  }
  const BirthDeathModel& model_;
  double V_;
  std::vector<double> u_, w_;
};

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

Trajectory ssa_trajectory(const BirthDeathModel& model, double V, long long n0, StopRule stop,
                          std::uint64_t seed, std::uint64_t maxEvents) {
  if (n0 < 0) throw ModelError("ssa_trajectory: n0 must be nonnegative");
  if (!stop.tMax && !stop.hitState) throw ModelError("ssa_trajectory: empty stop rule");
  Trajectory traj;
  traj.n0 = n0;
  traj.seed = seed;
  CounterRng rng(seed, 0);
  RateCache rates(model, V);
  Kahan t;
  long long n = n0;
  for (std::uint64_t ev = 0; ev < maxEvents; ++ev) {
    if (stop.hitState && n == *stop.hitState) break;
    double u = rates.u(n), w = rates.w(n);
    double total = u + w;
    if (total <= 0.0) {
      traj.absorbed = true;
      break;
    }
    double dt = -std::log(rng.uniform()) / total;
    if (stop.tMax && t.sum + dt > *stop.tMax) {
      t = Kahan{};
      t.add(*stop.tMax);
      break;
    }
    t.add(dt);
    n += rng.uniform() <= u / total ? 1 : -1;
    traj.times.push_back(t.sum);
    traj.states.push_back(n);
  }
  traj.finalTime = t.sum;
  return traj;
}

namespace {

// passage time without trajectory recording; returns -1 if the event cap hits
double passage_time(RateCache& rates, long long n0, long long nAbsorb, CounterRng& rng,
                    std::uint64_t maxEvents) {
  Kahan t;
  long long n = n0;
  for (std::uint64_t ev = 0; ev < maxEvents; ++ev) {
    if (n == nAbsorb) return t.sum;
    double u = rates.u(n), w = rates.w(n);
    double total = u + w;
    if (total <= 0.0)
      throw NumericalError("mc_mfpt: trapped in absorbing state n=" + std::to_string(n) +
                           " before reaching the target");
    t.add(-std::log(rng.uniform()) / total);
    n += rng.uniform() <= u / total ? 1 : -1;
  }
  return -1.0;
}

struct ChunkStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double M2 = 0.0;
  bool done = false;

  void add(double v) {
    ++count;
    double d = v - mean;
    mean += d / count;
    M2 += d * (v - mean);
  }
  void merge(const ChunkStats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    double d = o.mean - mean;
    std::uint64_t n = count + o.count;
    M2 += o.M2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / n;
    mean += d * static_cast<double>(o.count) / n;
    count = n;
  }
};

}  // namespace

HittingTimeEstimate mc_mfpt(const BirthDeathModel& model, double V, long long n0,
                            long long nAbsorb, std::uint64_t replicas, std::uint64_t seedBase,
                            int threads, double maxSeconds) {
  HittingTimeEstimate est;
  est.seedBase = seedBase;
  est.requested = replicas;
  if (n0 == nAbsorb) {
    est.replicas = replicas;
    return est;
  }
  if (replicas < 2) throw ModelError("mc_mfpt requires at least 2 replicas");
  if (nAbsorb > n0 && detect_absorbing(model) == AbsorbingKind::ExtinctionAtZero)
    throw NumericalError(
        "mc_mfpt: rightward passage is not certain (extinction at 0 absorbs trajectories)");
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;

  constexpr std::uint64_t kChunk = 1024;
  constexpr std::uint64_t kMaxEvents = 1'000'000'000ull;
  const std::uint64_t nChunks = (replicas + kChunk - 1) / kChunk;
  std::vector<ChunkStats> chunks(nChunks);
  std::atomic<std::uint64_t> nextChunk{0};
  std::atomic<bool> expired{false};
  auto start = std::chrono::steady_clock::now();

  auto worker = [&]() {
    RateCache rates(model, V);
    while (!expired.load(std::memory_order_relaxed)) {
      std::uint64_t c = nextChunk.fetch_add(1);
      if (c >= nChunks) return;
      ChunkStats& s = chunks[c];
      std::uint64_t lo = c * kChunk, hi = std::min(replicas, lo + kChunk);
      for (std::uint64_t r = lo; r < hi; ++r) {
        CounterRng rng(seedBase, r + 1);
        double t = passage_time(rates, n0, nAbsorb, rng, kMaxEvents);
        if (t < 0.0) throw NumericalError("mc_mfpt: replica exceeded the event cap");
        s.add(t);
      }
      s.done = true;
      if (maxSeconds > 0.0) {
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > maxSeconds) expired.store(true, std::memory_order_relaxed);
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ChunkStats total;  // deterministic merge in chunk order
  for (const ChunkStats& s : chunks)
    if (s.done) total.merge(s);
  if (total.count < 2) throw NumericalError("mc_mfpt: wall-clock budget left < 2 replicas");
  est.mean = total.mean;
  est.replicas = total.count;
  est.stderror = std::sqrt(total.M2 / (total.count - 1) / total.count);
  return est;
}

}  // namespace dgp
