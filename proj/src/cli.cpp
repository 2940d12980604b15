#include "lmbs/cli.hpp"

#include "lmbs/autocov.hpp"
#include "lmbs/config.hpp"
#include "lmbs/discrete.hpp"
#include "lmbs/error.hpp"
#include "lmbs/moments.hpp"
#include "lmbs/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace lmbs::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<long> paths;
  std::optional<double> step;
  std::optional<double> horizon;
  std::string format = "csv";
  int threads = 1;
};

json flags_json(const Flags& f) {
  json j;
  j["config"] = f.config;
  j["out"] = f.out;
  j["format"] = f.format;
  j["seed"] = f.seed ? json(*f.seed) : json(nullptr);
  j["paths"] = f.paths ? json(*f.paths) : json(nullptr);
  j["step"] = f.step ? json(*f.step) : json(nullptr);
  j["horizon"] = f.horizon ? json(*f.horizon) : json(nullptr);
  return j;
}

std::string num17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Writes result files under --out and remembers them for the manifest.
class Output {
 public:
  Output(const Flags& flags, std::string command) : flags_(flags), command_(std::move(command)) {
    if (flags.format != "csv" && flags.format != "json")
      fail(ErrorKind::Config, "cli", "output", "--format must be csv or json");
    std::error_code ec;
    fs::create_directories(flags.out, ec);
    if (ec) fail(ErrorKind::Config, "cli", "output", "cannot create output directory '" + flags.out + "'");
  }

  void table(const std::string& stem, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows) {
    if (flags_.format == "csv") {
      std::string text;
      for (std::size_t c = 0; c < header.size(); ++c) text += (c ? "," : "") + header[c];
      text += "\n";
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + num17(row[c]);
        text += "\n";
      }
      write(stem + ".csv", text);
    } else {
      json arr = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = jnum(row[c]);
        arr.push_back(obj);
      }
      write(stem + ".json", arr.dump(2) + "\n");
    }
  }

  void document(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void manifest(const config::RunConfig& rc, const json& parameters, double seconds) {
    json m;
    m["tool"] = "lmbs";
    m["version"] = kVersion;
    m["subcommand"] = command_;
    m["config_path"] = flags_.config;
    m["config"] = rc.snapshot;
    m["flags"] = flags_json(flags_);
    m["seed"] = rc.sim.seed;
    m["parameters"] = parameters;
    m["outputs"] = files_;
    m["timings"] = {{"wall_seconds", seconds}, {"threads", flags_.threads}};
    const fs::path p = fs::path(flags_.out) / (command_ + ".manifest.json");
    std::ofstream f(p);
    f << m.dump(2) << "\n";
  }

 private:
  void write(const std::string& name, const std::string& text) {
    const fs::path p = fs::path(flags_.out) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) fail(ErrorKind::Config, "cli", "output", "cannot write '" + p.string() + "'");
    f << text;
    files_.push_back(name);
  }

  const Flags& flags_;
  std::string command_;
  std::vector<std::string> files_;
};

json verdict_json(const IntegralResult& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["value"] = r.verdict == IntegralVerdict::Finite ? jnum(r.value) : json(nullptr);
  return j;
}

json stationarity_json(const Stationarity& s) {
  json j;
  j["stationary"] = s.stationary;
  j["margin"] = s.reason && *s.reason != NonStationaryReason::MarginAtLeastOne ? json(nullptr) : jnum(s.margin);
  j["reason"] = s.reason ? json(to_string(*s.reason)) : json(nullptr);
  j["near_critical"] = s.near_critical;
  return j;
}

const char* moment_name(MomentClass c) {
  switch (c) {
    case MomentClass::Finite: return "finite";
    case MomentClass::Infinite: return "infinite";
    case MomentClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

const char* tail_name(TailKind k) {
  switch (k) {
    case TailKind::None: return "none";
    case TailKind::Light: return "light";
    case TailKind::RegularlyVarying: return "regularly-varying";
    case TailKind::Unknown: return "unknown";
  }
  return "unknown";
}

QuadratureOptions quadrature_with_flags(const Model& m, const Flags& f) {
  QuadratureOptions q = m.quadrature();
  if (f.step) q.step = *f.step;
  if (f.horizon) q.horizon = *f.horizon;
  return q;
}

void apply_simulation_flags(config::RunConfig& rc, const Flags& f) {
  if (f.seed) rc.sim.seed = *f.seed;
  if (f.paths) rc.sim.paths = *f.paths;
  if (f.step) rc.sim.h = *f.step;
  if (f.horizon) rc.sim.T = *f.horizon;
  rc.sim.threads = f.threads;
  rc.sim.record_every = config::resolve_record_every(rc);
}

// ---- subcommands -----------------------------------------------------------

int cmd_validate(const config::RunConfig& rc, const Flags& f, Output& out, json& params) {
  const ModelConfig& mc = rc.model;
  const double tol = mc.balance_tol.value_or(default_balance_tolerance(mc.lambda, mc.kappa));
  const Balance b = validate_balance(mc.lambda, mc.kappa, tol);
  json j;
  j["balanced"] = b.balanced;
  j["discrepancy"] = b.discrepancy;
  j["balance_tolerance"] = tol;
  j["first_moment"] = moment_name(first_moment_class(mc.kappa).kind);
  params = {{"balance_tolerance", tol}};
  if (!b.balanced) {
    out.document("validate.json", j);
    std::cout << j.dump(2) << "\n";
    std::cerr << json{{"error",
                       {{"kind", to_string(ErrorKind::Config)},
                        {"module", "measures"},
                        {"operation", "validate_balance"},
                        {"message", "lambda and kappa masses differ by " + num17(b.discrepancy)}}}}
                     .dump()
              << "\n";
    return kExitConfig;
  }
  const Model m(mc);
  const Stationarity s = stationarity_margin(m);
  j["l2_sq"] = verdict_json(m.l2());
  j.update(stationarity_json(s));
  j["memory"] = s.stationary ? json(to_string(classify_memory(m))) : json(nullptr);
  (void)f;
  out.document("validate.json", j);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_analyze(const config::RunConfig& rc, const Flags& f, Output& out, json& params) {
  const Model m(rc.model);
  const Kernel& k = m.kernel();
  const QuadratureOptions q = quadrature_with_flags(m, f);
  std::vector<std::vector<double>> rows;
  for (double x : rc.kernel_grid) rows.push_back({x, k(x)});
  out.table("kernel", {"x", "K"}, rows);
  json j;
  j["tau"] = k.tau();
  j["breakpoints"] = k.breakpoints();
  j["closed_form"] = k.closed_form().has_value();
  const TailInfo t = k.tail();
  j["tail"] = {{"kind", tail_name(t.kind)}, {"alpha", t.alpha}, {"log_exponent", t.log_exponent}};
  j["l1"] = verdict_json(l1_norm(k, q));
  j["l2_sq"] = verdict_json(l2_norm_sq(k, q));
  j["integral"] = verdict_json(integral(k, q));
  j["verdicts"] = {{"l1", j["l1"]["verdict"]}, {"l2_sq", j["l2_sq"]["verdict"]}};
  out.document("analyze.json", j);
  params = {{"quadrature", {{"horizon", q.horizon}, {"step", q.step}}}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_solve(const config::RunConfig& rc, const Flags& f, Output& out, json& params) {
  const Model m(rc.model);
  const double T = f.horizon.value_or(rc.solve_horizon);
  const double h = f.step.value_or(rc.solve_step);
  const MomentSolution sol = solve_second_moment(m, T, h);
  const GridFunction r = resolvent(m, T, h);
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(sol.t.size()));
  for (Eigen::Index i = 0; i < sol.t.size(); ++i) rows.push_back({sol.t[i], sol.values[i], r.values[i]});
  out.table("moments", {"t", "EV2", "resolvent"}, rows);
  json j = stationarity_json(sol.stationarity);
  j["verdict"] = sol.stationarity.stationary ? "stationary" : "non-stationary";
  j["limit"] = sol.limit ? jnum(*sol.limit) : json(nullptr);
  j["final_EV2"] = sol.values[sol.values.size() - 1];
  j["resolvent_integral"] = cumulative_trapezoid(r.values, h)[r.values.size() - 1];
  out.document("solve.json", j);
  params = {{"T", T}, {"h", h}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_gamma(const config::RunConfig& rc, const Flags& f, Output& out, json& params) {
  const Model m(rc.model);
  const QuadratureOptions q = quadrature_with_flags(m, f);
  const double cf = c_factor(m);
  std::optional<Regime> regime;
  std::vector<std::vector<double>> rows;
  for (double d : rc.deltas) {
    const double g = gamma(m, d, q);
    double asym = std::nan("");
    if (d > 1.0) {
      try {
        const Asymptote a = asymptotic_gamma(m, d);
        asym = a.value;
        regime = a.regime;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NumericalPrecondition) throw;
      }
    }
    const double ratio = std::isnan(asym) ? std::nan("") : (asym == 0.0 ? (g == 0.0 ? 1.0 : std::nan("")) : g / asym);
    rows.push_back({d, g, asym, ratio});
  }
  out.table("gamma", {"delta", "gamma", "asymptote", "ratio"}, rows);
  json j;
  j["memory_class"] = to_string(classify_memory(m));
  j["c_factor"] = cf;
  j["regime"] = regime ? json(to_string(*regime)) : json(nullptr);
  out.document("gamma.json", j);
  params = {{"deltas", rc.deltas}, {"quadrature", {{"horizon", q.horizon}, {"step", q.step}}}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// One theory-vs-empirical comparison.
struct Check {
  std::string name;
  double theory;
  double empirical;
  double tolerance;
  bool gating;

  bool pass() const { return std::abs(empirical - theory) <= tolerance; }
  json to_json() const {
    return {{"name", name},       {"theory", jnum(theory)}, {"empirical", jnum(empirical)},
            {"tolerance", jnum(tolerance)}, {"pass", pass()}, {"gating", gating}};
  }
};

std::string label(const std::string& base, double t) { return base + "(" + num17(t) + ")"; }

std::vector<Check> simulation_checks(const Model& m, const config::RunConfig& rc, const PathEnsemble& e,
                                     json& estimators) {
  std::vector<Check> checks;
  const double s2 = m.sigma() * m.sigma();
  const MomentSolution sol = solve_second_moment(m, rc.sim.T, rc.sim.h);
  const bool stationary = sol.stationarity.stationary;
  auto finite_ev2 = [&](double t) { return sol.values[grid_steps(t, rc.sim.h, "cli", "report")]; };

  estimators["moments"] = json::array();
  for (double t : rc.moment_times) {
    const MomentEstimate mo = empirical_moments(e, t);
    estimators["moments"].push_back({{"t", t},
                                     {"mean_V", mo.mean},
                                     {"se_mean", jnum(mo.se_mean)},
                                     {"var_V", mo.var},
                                     {"se_var", jnum(mo.se_var)}});
    checks.push_back({label("mean_V", t), m.sigma(), mo.mean, 3.0 * mo.se_mean, true});
    const double var_theory = finite_ev2(t) - s2;
    checks.push_back({label("var_V", t), var_theory, mo.var, std::max(0.05 * var_theory, 3.0 * mo.se_var), true});
    if (stationary) {
      const double lim = *sol.limit - s2;
      checks.push_back({label("var_V_vs_stationary_limit", t), lim, mo.var, std::max(0.05 * lim, 3.0 * mo.se_var),
                        false});
    }
  }

  const Eigen::Index last = e.t.size() - 1;
  const MomentEstimate xm = column_moments(e.x.col(last));
  checks.push_back({label("mean_X", rc.sim.T), 0.0, xm.mean, 3.0 * xm.se_mean, true});
  const Eigen::VectorXd x2 = e.x.col(last).array().square();
  const MomentEstimate x2m = column_moments(x2);
  const double ito = rc.sim.h * sol.values.head(sol.values.size() - 1).sum();
  checks.push_back({label("ito_isometry_EX2", rc.sim.T), ito, x2m.mean, std::max(0.05 * ito, 3.0 * x2m.se_mean),
                    true});

  estimators["autocov"] = json::array();
  for (double d : rc.autocov_deltas) {
    const double t = rc.autocov_time;
    const CovEstimate c = empirical_autocov(e, t, d);
    const MomentSolution upto = solve_second_moment(m, t, rc.sim.h);
    const double theory = covariance_surface(m, upto, t, d);
    estimators["autocov"].push_back({{"t", t}, {"delta", d}, {"cov", c.cov}, {"se", jnum(c.se)}});
    checks.push_back({"autocov(t=" + num17(t) + ",delta=" + num17(d) + ")", theory, c.cov,
                      std::max(0.10 * std::abs(theory), 3.0 * c.se), true});
    if (stationary) {
      const double g = gamma(m, d);
      checks.push_back({"autocov_vs_gamma(delta=" + num17(d) + ")", g, c.cov, std::max(0.10 * g, 3.0 * c.se), false});
    }
  }

  const CorrEstimate eff = returns_efficiency(e, rc.efficiency_delta, rc.efficiency_lag, rc.efficiency_time);
  estimators["efficiency"] = {{"delta", rc.efficiency_delta},
                              {"Delta", rc.efficiency_lag},
                              {"t", rc.efficiency_time},
                              {"corr", eff.corr},
                              {"se", eff.se},
                              {"degenerate", eff.degenerate}};
  if (!eff.degenerate) checks.push_back({"return_correlation", 0.0, eff.corr, 3.0 * eff.se, true});
  return checks;
}

int cmd_simulate(config::RunConfig rc, const Flags& f, Output& out, json& params) {
  apply_simulation_flags(rc, f);
  const Model m(rc.model);
  const PathEnsemble e = simulate(m, rc.sim);
  json est;
  const std::vector<Check> checks = simulation_checks(m, rc, e, est);
  json j;
  j["T"] = rc.sim.T;
  j["h"] = rc.sim.h;
  j["paths"] = rc.sim.paths;
  j["seed"] = rc.sim.seed;
  j["estimators"] = est;
  j["theory_comparisons"] = json::array();
  for (const Check& c : checks) j["theory_comparisons"].push_back(c.to_json());
  out.document("simulate.json", j);
  if (rc.sample_paths > 0) {
    std::vector<std::vector<double>> rows;
    const long n = std::min(rc.sample_paths, e.paths());
    for (long p = 0; p < n; ++p)
      for (Eigen::Index r = 0; r < e.t.size(); ++r)
        rows.push_back({static_cast<double>(p), e.t[r], e.v(p, r), e.x(p, r), e.s(p, r)});
    out.table("paths", {"path", "t", "V", "X", "S"}, rows);
  }
  params = {{"T", rc.sim.T},       {"h", rc.sim.h},           {"paths", rc.sim.paths},
            {"seed", rc.sim.seed}, {"record_every", rc.sim.record_every}, {"s0", rc.sim.s0}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

std::vector<Check> discrete_checks(const config::RunConfig& rc, long steps, long paths, std::uint64_t seed,
                                   int threads, json& summary, DiscreteEnsemble* keep = nullptr) {
  const DiscreteModel& dm = *rc.discrete;
  const DiscreteStationarity ds = discrete_stationarity(dm);
  summary["stationarity"] = stationarity_json(ds.verdict);
  summary["explicit_terms"] = ds.terms;
  summary["memory"] = to_string(discrete_memory(dm));
  summary["steps"] = steps;
  summary["paths"] = paths;
  const DiscreteEnsemble e = simulate_discrete(dm, steps, paths, seed, threads);
  std::vector<Check> checks;
  const MomentEstimate vm = column_moments(e.v.col(steps - 1));
  checks.push_back({"discrete_mean_V(n=" + std::to_string(steps) + ")", dm.sigma, vm.mean, 3.0 * vm.se_mean, true});
  if (steps >= 2) {
    const Eigen::VectorXd a = e.u.col(steps - 2);
    const Eigen::VectorXd b = e.u.col(steps - 1);
    const Eigen::ArrayXd prod = (a.array() - a.mean()) * (b.array() - b.mean());
    const double cov = prod.mean();
    const double se = std::sqrt((prod - cov).square().mean() / static_cast<double>(prod.size()));
    checks.push_back({"discrete_U_lag1_cov", 0.0, cov, 3.0 * se, true});
  }
  if (keep) *keep = e;
  return checks;
}

int cmd_discrete(const config::RunConfig& rc, const Flags& f, Output& out, json& params) {
  if (!rc.discrete) fail(ErrorKind::Config, "cli", "discrete", "configuration has no [discrete] section");
  const long steps = f.horizon ? static_cast<long>(std::llround(*f.horizon)) : rc.discrete_steps;
  const long paths = f.paths.value_or(rc.discrete_paths);
  const std::uint64_t seed = f.seed.value_or(rc.sim.seed);
  json j;
  DiscreteEnsemble e;
  const std::vector<Check> checks = discrete_checks(rc, steps, paths, seed, f.threads, j, &e);
  j["checks"] = json::array();
  for (const Check& c : checks) j["checks"].push_back(c.to_json());
  out.document("discrete.json", j);
  std::vector<std::vector<double>> rows;
  const long sampled = std::max<long>(1, std::min<long>(rc.sample_paths, paths));
  for (long p = 0; p < sampled; ++p)
    for (long n = 1; n <= steps; ++n)
      rows.push_back({static_cast<double>(p), static_cast<double>(n), e.v(p, n - 1), e.u(p, n - 1), e.x(p, n)});
  out.table("discrete_paths", {"path", "n", "V", "U", "X"}, rows);
  params = {{"steps", steps}, {"paths", paths}, {"seed", seed}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_report(config::RunConfig rc, const Flags& f, Output& out, json& params) {
  apply_simulation_flags(rc, f);
  const Model m(rc.model);
  std::vector<Check> checks;
  json j;
  const Stationarity s = stationarity_margin(m);
  j["stationarity"] = stationarity_json(s);
  if (s.stationary) {
    const double lim = limit_second_moment(m);
    const double g0 = gamma(m, 0.0);
    const double theory = lim - m.sigma() * m.sigma();
    checks.push_back({"gamma0_vs_limit_minus_sigma2", theory, g0, 0.005 * std::abs(theory), true});
    j["memory"] = to_string(classify_memory(m));
    json rates = json::array();
    for (double d : rc.deltas) {
      if (!(d > 1.0)) continue;
      try {
        const Asymptote a = asymptotic_gamma(m, d);
        const double g = gamma(m, d);
        const double ratio = a.value == 0.0 ? 1.0 : g / a.value;
        rates.push_back({{"delta", d}, {"gamma", g}, {"asymptote", a.value}, {"ratio", ratio},
                         {"regime", to_string(a.regime)}});
        checks.push_back({"rate_ratio(delta=" + num17(d) + ")", 1.0, ratio, 0.10, false});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NumericalPrecondition) throw;
      }
    }
    j["rates"] = rates;
  }
  const PathEnsemble e = simulate(m, rc.sim);
  json est;
  for (const Check& c : simulation_checks(m, rc, e, est)) checks.push_back(c);
  j["estimators"] = est;
  if (rc.discrete) {
    json d;
    for (const Check& c : discrete_checks(rc, rc.discrete_steps, rc.discrete_paths, rc.sim.seed, f.threads, d))
      checks.push_back(c);
    j["discrete"] = d;
  }
  bool all = true;
  j["entries"] = json::array();
  for (const Check& c : checks) {
    j["entries"].push_back(c.to_json());
    if (c.gating && !c.pass()) all = false;
  }
  j["all_pass"] = all;
  j["simulation"] = {{"T", rc.sim.T}, {"h", rc.sim.h}, {"paths", rc.sim.paths}, {"seed", rc.sim.seed}};
  out.document("report.json", j);
  params = {{"T", rc.sim.T}, {"h", rc.sim.h}, {"paths", rc.sim.paths}, {"seed", rc.sim.seed},
            {"record_every", rc.sim.record_every}};
  std::cout << j.dump(2) << "\n";
  if (!all) {
    std::cerr << json{{"error",
                       {{"kind", to_string(ErrorKind::ToleranceFailure)},
                        {"module", "cli"},
                        {"operation", "report"},
                        {"message", "one or more gating checks missed their tolerance"}}}}
                     .dump()
              << "\n";
    return kExitTolerance;
  }
  return kExitOk;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::NumericalPrecondition:
    case ErrorKind::TailUndetermined: return kExitPrecondition;
    case ErrorKind::ToleranceFailure: return kExitTolerance;
  }
  return kExitInternal;
}

void print_error(const std::string& kind, const std::string& module, const std::string& op, const std::string& msg) {
  std::cerr << json{{"error", {{"kind", kind}, {"module", module}, {"operation", op}, {"message", msg}}}}.dump()
            << "\n";
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Long-memory Black-Scholes volatility model: kernels, moments, autocovariance, simulation"};
  app.set_version_flag("--version", std::string("lmbs ") + kVersion);
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  long paths = 0;
  double step = 0.0, horizon = 0.0;
  app.add_option("--config", flags.config, "configuration file (INI-style or JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--out", flags.out, "output directory")->capture_default_str();
  auto* paths_opt = app.add_option("--paths", paths, "number of Monte Carlo paths")->check(CLI::PositiveNumber);
  auto* step_opt = app.add_option("--step", step, "time step of the subcommand's grid")->check(CLI::PositiveNumber);
  auto* horizon_opt =
      app.add_option("--horizon", horizon, "horizon of the subcommand's grid")->check(CLI::PositiveNumber);
  app.add_option("--format", flags.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", flags.threads, "worker threads (speed only)")->check(CLI::PositiveNumber);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "balance, stationarity and memory verdicts"},
      {"analyze", "kernel table and integral norms"},
      {"solve", "second-moment Volterra solution and resolvent"},
      {"gamma", "limiting autocovariance and asymptote ratios"},
      {"simulate", "Monte Carlo ensemble estimators"},
      {"discrete", "discrete-time recursion analogues"},
      {"report", "full theory-versus-simulation verdict table"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("config", "cli", "parse", e.what());
    return kExitConfig;
  }
  if (*seed_opt) flags.seed = seed;
  if (*paths_opt) flags.paths = paths;
  if (*step_opt) flags.step = step;
  if (*horizon_opt) flags.horizon = horizon;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (flags.config.empty()) fail(ErrorKind::Config, "cli", command.c_str(), "--config is required");
    const auto start = std::chrono::steady_clock::now();
    config::RunConfig rc = config::load(flags.config);
    Output out(flags, command);
    json params;
    int code = kExitOk;
    if (command == "validate") code = cmd_validate(rc, flags, out, params);
    else if (command == "analyze") code = cmd_analyze(rc, flags, out, params);
    else if (command == "solve") code = cmd_solve(rc, flags, out, params);
    else if (command == "gamma") code = cmd_gamma(rc, flags, out, params);
    else if (command == "simulate") code = cmd_simulate(rc, flags, out, params);
    else if (command == "discrete") code = cmd_discrete(rc, flags, out, params);
    else code = cmd_report(rc, flags, out, params);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.manifest(rc, params, seconds);
    return code;
  } catch (const Error& e) {
    print_error(to_string(e.kind()), e.module(), e.operation(), e.detail());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    print_error("internal", "cli", command, e.what());
    return kExitInternal;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace lmbs::cli
