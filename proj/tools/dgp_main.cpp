// dgp: command-line front end for the birth-death process library.
//
// Every run writes its artifacts plus a manifest.json echoing the resolved
// model, parameters, and library version; `dgp rerun --manifest m.json`
// re-executes the recorded run through the same code path.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dgp/analysis.hpp"
#include "dgp/asymptotics.hpp"
#include "dgp/diffusion.hpp"
#include "dgp/errors.hpp"
#include "dgp/exact.hpp"
#include "dgp/model.hpp"
#include "dgp/model_io.hpp"
#include "dgp/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// CSV emission, RFC 4180 quoting

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string num(long long v) { return std::to_string(v); }

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw dgp::ModelError("cannot open output file " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_quote(fields[i]);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw dgp::ModelError("cannot open output file " + path.string());
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Shared run context

struct RunContext {
  dgp::BirthDeathModel model;
  json modelJson;  // resolved model, embedded in the manifest
  fs::path outDir;
  std::vector<std::string> artifacts;

  fs::path artifact(const std::string& name) {
    artifacts.push_back(name);
    return outDir / name;
  }
};

int resolve_threads(int flagValue) {
  if (const char* env = std::getenv("DGP_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return flagValue;
}

// Named fixed-point selectors. "lower"/"upper" are the outermost stable
// roots of b on the search window, "barrier" the unstable root between
// them, "past-barrier" the midpoint of barrier and upper basin.
struct Selectors {
  std::vector<dgp::FixedPoint> fps;

  const dgp::FixedPoint& stable(bool lower) const {
    const dgp::FixedPoint* hit = nullptr;
    for (const auto& f : fps)
      if (f.stability == dgp::Stability::Stable) {
        hit = &f;
        if (lower) break;
      }
    if (!hit) throw dgp::ModelError("no stable fixed point in the search window");
    return *hit;
  }

  double barrier() const {
    double lo = stable(true).location, hi = stable(false).location;
    for (const auto& f : fps)
      if (f.stability == dgp::Stability::Unstable && f.location > lo && f.location < hi)
        return f.location;
    throw dgp::ModelError("no barrier between the stable fixed points");
  }

  double resolve(const std::string& name) const {
    if (name == "lower") return stable(true).location;
    if (name == "upper") return stable(false).location;
    if (name == "barrier") return barrier();
    if (name == "past-barrier") return 0.5 * (barrier() + stable(false).location);
    try {
      std::size_t pos = 0;
      double x = std::stod(name, &pos);
      if (pos == name.size()) return x;
    } catch (const std::exception&) {
    }
    throw dgp::ModelError("unknown location selector '" + name + "'");
  }
};

// ---------------------------------------------------------------------------
// Commands. Each takes its parameters as JSON so the manifest rerun path is
// literally the same call.

void run_stationary(RunContext& ctx, const json& p) {
  double V = p.at("V");
  long long nMax = p.value("nmax", -1LL);
  auto dist = dgp::stationary_distribution(ctx.model, V, nMax);
  auto pot = dgp::exact_potential(dist);
  CsvWriter csv(ctx.artifact("stationary.csv"), {"n", "x", "log_p", "p", "Phi"});
  for (long long n = 0; n <= dist.nMax; ++n)
    csv.row({num(n), num(n / V), num(dist.log_p(n)), num(dist.p(n)), num(pot.Phi[n])});
}

void run_potential(RunContext& ctx, const json& p) {
  double V = p.at("V");
  double xLo = p.at("xlo"), xHi = p.at("xhi");
  int points = p.value("points", 512);
  auto exp = dgp::build_expansion(ctx.model);
  auto grid = dgp::build_potential_grid(exp, xLo, xHi, points);
  CsvWriter csv(ctx.artifact("potential.csv"), {"x", "phi0", "phi1", "Phi_at_V"});
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    csv.row({num(grid.x[i]), num(grid.phi0[i]), num(grid.phi1[i]), num(grid.Phi(V, i))});

  // Kramers escape report whenever the window holds a basin/barrier pair.
  Selectors sel{dgp::find_fixed_points(exp, xLo, xHi)};
  bool hasPair = false;
  try {
    sel.barrier();
    hasPair = true;
  } catch (const dgp::ModelError&) {
  }
  if (hasPair) {
    auto k = dgp::kramers_time(exp, V, sel.stable(true).location, sel.barrier());
    write_json(ctx.artifact("kramers.json"),
               json{{"x_basin", k.x1Star},
                    {"x_barrier", k.xDdag},
                    {"barrier_leading", k.barrierLeading},
                    {"barrier_correction", k.barrierCorrection},
                    {"prefactor", k.prefactor},
                    {"log_time", k.logTime},
                    {"time", k.time},
                    {"bistability",
                     k.bistabilityClass == dgp::BistabilityClass::Nonlinear ? "nonlinear"
                                                                            : "stochastic"}});
  }
}

void run_mfpt(RunContext& ctx, const json& p) {
  double V = p.at("V");
  double searchHi = p.value("search_hi", 10.0);
  auto exp = dgp::build_expansion(ctx.model);
  Selectors sel{dgp::find_fixed_points(exp, 0.0, searchHi)};

  double xFrom = sel.resolve(p.at("from").get<std::string>());
  double xTo = sel.resolve(p.at("to").get<std::string>());
  long long nStart = std::llround(xFrom * V);
  long long nAbsorb = std::llround(xTo * V);
  bool rightward = nAbsorb >= nStart;
  long long reflectTop =
      p.value("reflect_top", -1LL) >= 0 ? p.at("reflect_top").get<long long>()
                                        : std::llround(searchHi * V);

  json report{{"n_start", nStart}, {"n_absorb", nAbsorb}, {"V", V}, {"estimates", json::object()}};
  CsvWriter csv(ctx.artifact("mfpt.csv"), {"n_start", "n_absorb", "T"});

  for (const auto& method : p.at("methods")) {
    std::string m = method.get<std::string>();
    if (m == "exact") {
      double logT = rightward
                        ? dgp::log_mfpt_exact_right(ctx.model, V, nStart, nAbsorb)
                        : dgp::log_mfpt_exact_left(ctx.model, V, nStart, nAbsorb, reflectTop);
      report["estimates"]["exact"] = {{"T", std::exp(logT)}, {"log_T", logT}};
      csv.row({num(nStart), num(nAbsorb), num(std::exp(logT))});
    } else if (m == "asymptotic") {
      double T = dgp::mfpt_asymptotic(exp, V, xFrom, xTo);
      report["estimates"]["asymptotic"] = {{"T", T}};
    } else if (m == "kramers") {
      // basin = stable root nearest the start, barrier = unstable root
      // strictly between start and target
      const dgp::FixedPoint* basin = nullptr;
      for (const auto& f : sel.fps)
        if (f.stability == dgp::Stability::Stable &&
            (!basin || std::abs(f.location - xFrom) < std::abs(basin->location - xFrom)))
          basin = &f;
      const dgp::FixedPoint* ddag = nullptr;
      for (const auto& f : sel.fps)
        if (f.stability == dgp::Stability::Unstable &&
            f.location > std::min(xFrom, xTo) && f.location < std::max(xFrom, xTo))
          ddag = &f;
      if (!basin || !ddag)
        throw dgp::ModelError("kramers method needs a stable basin and an intervening barrier");
      auto k = dgp::kramers_time(exp, V, basin->location, ddag->location);
      report["estimates"]["kramers"] = {{"T", k.time},
                                        {"log_T", k.logTime},
                                        {"x_basin", k.x1Star},
                                        {"x_barrier", k.xDdag},
                                        {"prefactor", k.prefactor}};
    } else if (m == "mc") {
      auto est = dgp::mc_mfpt(ctx.model, V, nStart, nAbsorb,
                              p.value("replicas", 1000ULL), p.value("seed", 1ULL),
                              resolve_threads(p.value("threads", 0)));
      report["estimates"]["mc"] = {{"mean", est.mean},
                                   {"stderr", est.stderror},
                                   {"replicas", est.replicas},
                                   {"seed", est.seedBase}};
    } else {
      throw dgp::ModelError("unknown mfpt method '" + m + "'");
    }
  }
  write_json(ctx.artifact("mfpt.json"), report);
}

void run_simulate(RunContext& ctx, const json& p) {
  double V = p.at("V");
  long long n0 = p.at("n0");
  std::uint64_t seed = p.value("seed", 1ULL);
  dgp::StopRule stop;
  if (p.contains("tmax")) stop = dgp::StopRule::at_time(p.at("tmax"));
  if (p.contains("hit")) stop = dgp::StopRule::at_state(p.at("hit").get<long long>());

  auto traj = dgp::ssa_trajectory(ctx.model, V, n0, stop, seed,
                                  p.value("max_events", 100'000'000ULL));
  CsvWriter csv(ctx.artifact("trajectory.csv"), {"t", "n"});
  csv.row({num(0.0), num(traj.n0)});
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    csv.row({num(traj.times[i]), num(traj.states[i])});

  std::uint64_t replicas = p.value("replicas", 1ULL);
  if (replicas > 1 && p.contains("hit")) {
    auto est = dgp::mc_mfpt(ctx.model, V, n0, p.at("hit").get<long long>(), replicas, seed,
                            resolve_threads(p.value("threads", 0)));
    write_json(ctx.artifact("estimate.json"), json{{"mean", est.mean},
                                                   {"stderr", est.stderror},
                                                   {"replicas", est.replicas},
                                                   {"seed", est.seedBase}});
  }
}

const char* kind_name(dgp::BifurcationKind k) {
  return k == dgp::BifurcationKind::Transcritical ? "transcritical" : "saddle-node";
}

void run_scan(RunContext& ctx, const json& p) {
  if (!ctx.model.scan || ctx.model.scan->name != p.at("param").get<std::string>())
    throw dgp::ModelError("model declares no scan parameter named '" +
                          p.at("param").get<std::string>() + "'");
  double lo = p.at("lo"), hi = p.at("hi");
  int count = p.at("count");
  if (count < 2 || !(hi > lo)) throw dgp::ModelError("scan range must be lo:hi:count, count >= 2");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / (count - 1);
  double xLo = p.value("xlo", 1e-3), xHi = p.value("xhi", 10.0);

  auto events = dgp::scan_bifurcations(ctx.model, grid, xLo, xHi);
  {
    std::ofstream out(ctx.artifact("events.jsonl"));
    for (const auto& e : events)
      out << json{{"param", e.parameterValue},
                  {"kind", kind_name(e.kind)},
                  {"x", e.location},
                  {"evidence", e.evidence}}
                 .dump()
          << '\n';
  }

  if (!p.value("phase", true)) return;

  auto diagram = dgp::phase_transition_scan(ctx.model, grid, xLo, xHi, p.value("xgrid", 2048));
  CsvWriter csv(ctx.artifact("phase.csv"),
                {"mu", "branch_id", "x_min", "phi0_min", "is_global", "row_type"});
  for (const auto& s : diagram.samples)
    csv.row({num(s.mu), num((long long)s.branch), num(s.xMin), num(s.phi0Min),
             s.isGlobal ? "1" : "0", "branch"});
  for (double mu : diagram.transitionPoints)
    csv.row({num(mu), "-1", "", "", "", "transition"});
}

void run_decompose(RunContext& ctx, const json& p) {
  double V = p.at("V");
  std::vector<double> xs;
  if (p.contains("x")) {
    xs = p.at("x").get<std::vector<double>>();
  } else {
    double xLo = p.at("xlo"), xHi = p.at("xhi");
    int points = p.value("points", 101);
    for (int i = 0; i < points; ++i) xs.push_back(xLo + (xHi - xLo) * i / (points - 1));
  }
  auto curves = dgp::vanthoff_decompose(ctx.model, V, xs);
  CsvWriter csv(ctx.artifact("decompose.csv"), {"x", "phi0_tilde", "phi1_tilde", "Phi"});
  for (std::size_t i = 0; i < xs.size(); ++i)
    csv.row({num(curves.x[i]), num(curves.phi0Tilde[i]), num(curves.phi1Tilde[i]),
             num(curves.phi0Tilde[i] + curves.phi1Tilde[i] / V)});
}

void run_diffusion_compare(RunContext& ctx, const json& p) {
  double V = p.at("V");
  double xLo = p.at("xlo"), xHi = p.at("xhi");
  int points = p.value("points", 201);
  auto exp = dgp::build_expansion(ctx.model);
  auto km = dgp::km_approx(exp, V, xLo, xHi);
  auto hgtt = dgp::hgtt_approx(exp, V, xLo, xHi);
  CsvWriter csv(ctx.artifact("diffusion.csv"),
                {"x", "D_km", "D_hgtt", "D_tilde", "b", "phi0_prime", "gradient_km",
                 "gradient_hgtt"});
  for (int i = 0; i < points; ++i) {
    double x = xLo + (xHi - xLo) * i / (points - 1);
    auto eff = dgp::effective_diffusion(exp, V, x);
    double m0 = exp.mu0(x), l0 = exp.lambda0(x);
    csv.row({num(x), num(km.D(x)), num(hgtt.D(x)), num(eff.Dtilde), num(exp.b(x)),
             num(std::log(l0 / m0)), num(km.b(x) / (km.epsilon * km.D(x))),
             num(hgtt.b(x) / (hgtt.epsilon * hgtt.D(x)))});
  }
}

void dispatch(RunContext& ctx, const std::string& command, const json& params) {
  if (command == "stationary")
    run_stationary(ctx, params);
  else if (command == "potential")
    run_potential(ctx, params);
  else if (command == "mfpt")
    run_mfpt(ctx, params);
  else if (command == "simulate")
    run_simulate(ctx, params);
  else if (command == "scan")
    run_scan(ctx, params);
  else if (command == "decompose")
    run_decompose(ctx, params);
  else if (command == "diffusion-compare")
    run_diffusion_compare(ctx, params);
  else
    throw dgp::ModelError("unknown command '" + command + "' in manifest");
}

void execute(const std::string& command, const std::string& modelJsonText, const json& params,
             const std::string& outDir) {
  RunContext ctx;
  ctx.model = dgp::model_from_json(modelJsonText);
  dgp::validate_model(ctx.model);
  ctx.modelJson = json::parse(modelJsonText);
  ctx.outDir = outDir;
  fs::create_directories(ctx.outDir);
  dispatch(ctx, command, params);
  write_json(ctx.outDir / "manifest.json", json{{"version", kVersion},
                                                {"command", command},
                                                {"model", ctx.modelJson},
                                                {"params", params},
                                                {"artifacts", ctx.artifacts}});
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dgp::ModelError("cannot read file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"birth-death process toolkit"};
  app.require_subcommand(1);

  std::string modelPath, outDir = ".", manifestPath;
  double V = 100.0, xLo = 0.0, xHi = 1.0;
  int points = 0, threads = 0, xGrid = 2048;
  long long nMax = -1, n0 = 0, hitState = 0, reflectTop = -1;
  std::uint64_t seed = 1, replicas = 1000, maxEvents = 100'000'000ULL;
  double tMax = 0.0, searchHi = 10.0;
  std::string fromSel = "lower", toSel = "past-barrier", methodsArg = "exact";
  std::string param, range;
  std::vector<double> xList;

  auto add_common = [&](CLI::App* sub, bool needsModel = true) {
    if (needsModel) sub->add_option("--model", modelPath, "model JSON file")->required();
    sub->add_option("--out", outDir, "output directory");
    return sub;
  };

  auto* stationary = add_common(app.add_subcommand("stationary", "exact stationary distribution"));
  stationary->add_option("--V", V, "system size")->required();
  stationary->add_option("--nmax", nMax, "truncation (default: auto)");

  auto* potential = add_common(app.add_subcommand("potential", "phi0/phi1 potential grid"));
  potential->add_option("--V", V)->required();
  potential->add_option("--xlo", xLo)->required();
  potential->add_option("--xhi", xHi)->required();
  potential->add_option("--points", points);

  auto* mfpt = add_common(app.add_subcommand("mfpt", "mean first passage time"));
  mfpt->add_option("--V", V)->required();
  mfpt->add_option("--from-basin,--from", fromSel, "lower|upper|<x>");
  mfpt->add_option("--to", toSel, "barrier|past-barrier|lower|upper|<x>");
  mfpt->add_option("--methods", methodsArg, "comma list of exact,asymptotic,kramers,mc");
  mfpt->add_option("--replicas", replicas);
  mfpt->add_option("--seed", seed);
  mfpt->add_option("--threads", threads);
  mfpt->add_option("--search-hi", searchHi, "fixed-point search upper bound");
  mfpt->add_option("--reflect-top", reflectTop);

  auto* simulate = add_common(app.add_subcommand("simulate", "Gillespie trajectory"));
  simulate->add_option("--V", V)->required();
  simulate->add_option("--n0", n0)->required();
  auto* optT = simulate->add_option("--tmax", tMax);
  auto* optH = simulate->add_option("--hit-state", hitState);
  optT->excludes(optH);
  simulate->add_option("--seed", seed);
  simulate->add_option("--replicas", replicas)->default_val(1);
  simulate->add_option("--threads", threads);
  simulate->add_option("--max-events", maxEvents);

  auto* scan = add_common(app.add_subcommand("scan", "bifurcation / phase-transition scan"));
  scan->add_option("--param", param)->required();
  scan->add_option("--range", range, "lo:hi:count")->required();
  scan->add_option("--xlo", xLo)->default_val(1e-3);
  scan->add_option("--xhi", xHi)->default_val(10.0);
  scan->add_option("--xgrid", xGrid);
  bool bifOnly = false;
  scan->add_flag("--bifurcations-only", bifOnly,
                 "skip the phase diagram (useful when the scan range leaves "
                 "the stationary regime)");

  auto* decompose = add_common(app.add_subcommand("decompose", "van't Hoff enthalpy/entropy split"));
  decompose->add_option("--V", V)->required();
  decompose->add_option("--x", xList, "explicit x values");
  decompose->add_option("--xlo", xLo);
  decompose->add_option("--xhi", xHi);
  decompose->add_option("--points", points);

  auto* diff = add_common(app.add_subcommand("diffusion-compare", "diffusion approximations"));
  diff->add_option("--V", V)->required();
  diff->add_option("--xlo", xLo)->required();
  diff->add_option("--xhi", xHi)->required();
  diff->add_option("--points", points);

  auto* rerun = app.add_subcommand("rerun", "re-execute a recorded run");
  rerun->add_option("--manifest", manifestPath, "manifest.json from a previous run")->required();
  rerun->add_option("--out", outDir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 64;
  }

  try {
    if (rerun->parsed()) {
      json m = json::parse(slurp(manifestPath));
      RunContext ctx;
      ctx.modelJson = m.at("model");
      ctx.model = dgp::model_from_json(ctx.modelJson.dump());
      dgp::validate_model(ctx.model);
      ctx.outDir = outDir;
      fs::create_directories(ctx.outDir);
      dispatch(ctx, m.at("command"), m.at("params"));
      write_json(ctx.outDir / "manifest.json", json{{"version", kVersion},
                                                    {"command", m.at("command")},
                                                    {"model", ctx.modelJson},
                                                    {"params", m.at("params")},
                                                    {"artifacts", ctx.artifacts}});
      return 0;
    }

    json params;
    std::string command;
    if (stationary->parsed()) {
      command = "stationary";
      params = {{"V", V}, {"nmax", nMax}};
    } else if (potential->parsed()) {
      command = "potential";
      params = {{"V", V}, {"xlo", xLo}, {"xhi", xHi}};
      if (points > 0) params["points"] = points;
    } else if (mfpt->parsed()) {
      command = "mfpt";
      std::vector<std::string> methods;
      std::stringstream ss(methodsArg);
      for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) methods.push_back(tok);
      params = {{"V", V},       {"from", fromSel},     {"to", toSel},
                {"methods", methods}, {"replicas", replicas}, {"seed", seed},
                {"threads", threads}, {"search_hi", searchHi}};
      if (reflectTop >= 0) params["reflect_top"] = reflectTop;
    } else if (simulate->parsed()) {
      command = "simulate";
      if (!*optT && !*optH)
        throw dgp::ModelError("simulate needs exactly one of --tmax / --hit-state");
      params = {{"V", V}, {"n0", n0}, {"seed", seed}, {"replicas", replicas},
                {"threads", threads}, {"max_events", maxEvents}};
      if (*optT) params["tmax"] = tMax;
      if (*optH) params["hit"] = hitState;
    } else if (scan->parsed()) {
      command = "scan";
      double lo, hi;
      int count;
      char c1, c2;
      std::istringstream rs(range);
      if (!(rs >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || !rs.eof())
        throw dgp::ModelError("--range must be lo:hi:count");
      params = {{"param", param}, {"lo", lo},     {"hi", hi},
                {"count", count}, {"xlo", xLo},   {"xhi", xHi},
                {"xgrid", xGrid}, {"phase", !bifOnly}};
    } else if (decompose->parsed()) {
      command = "decompose";
      params = {{"V", V}};
      if (!xList.empty())
        params["x"] = xList;
      else {
        params["xlo"] = xLo;
        params["xhi"] = xHi;
        if (points > 0) params["points"] = points;
      }
    } else if (diff->parsed()) {
      command = "diffusion-compare";
      params = {{"V", V}, {"xlo", xLo}, {"xhi", xHi}};
      if (points > 0) params["points"] = points;
    }

    execute(command, slurp(modelPath), params, outDir);
    return 0;
  } catch (const dgp::ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return 2;
  } catch (const dgp::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return 2;
  }
}
