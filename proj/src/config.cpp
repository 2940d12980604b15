#include "lmbs/config.hpp"

#include "lmbs/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lmbs::config {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::Config, "cli", "config", msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

json scalar(const std::string& token) {
  if (token.empty()) config_error("empty value");
  const std::string low = lower(token);
  if (low == "true" || low == "yes" || low == "on") return true;
  if (low == "false" || low == "no" || low == "off") return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (token.find_first_of(".eE") == std::string::npos) {
    if (token[0] == '-') {
      long long v = 0;
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec == std::errc() && p == last) return v;
    } else {
      unsigned long long v = 0;
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec == std::errc() && p == last) return v;
    }
  }
  double d = 0.0;
  auto [p, ec] = std::from_chars(first, last, d);
  if (ec == std::errc() && p == last) return d;
  return token;
}

json item(const std::string& token) {
  const auto colon = token.find(':');
  if (colon == std::string::npos) return scalar(token);
  return json::array({scalar(trim(token.substr(0, colon))), scalar(trim(token.substr(colon + 1)))});
}

json value(const std::string& raw) {
  if (raw.find(',') == std::string::npos) return item(raw);
  json list = json::array();
  std::stringstream ss(raw);
  std::string piece;
  while (std::getline(ss, piece, ',')) list.push_back(item(trim(piece)));
  return list;
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i)
    if ((line[i] == '#' || line[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1]))))
      return line.substr(0, i);
  return line;
}

// ---- schema ---------------------------------------------------------------

const json kSchema = {
    {"model",
     {{"sigma", "volatility level, nonzero (1)"},
      {"beta", "feedback strength (0)"},
      {"mu", "price drift (0)"},
      {"tau", "delay horizon of lambda, >= 0 (0)"}}},
    {"kappa",
     {{"family", "zero | power_law | power_log_law | exponential | tabulated (zero)"},
      {"scale", "density scale c (1)"},
      {"alpha", "tail index (1)"},
      {"log_exponent", "power_log_law exponent p (0)"},
      {"rate", "exponential rate (1)"},
      {"t", "tabulated sample times"},
      {"k", "tabulated sample values"},
      {"tail_alpha", "declared tail index of a table (none)"},
      {"atoms", "list of location:weight pairs (none)"}}},
    {"lambda",
     {{"family", "density family on [-tau, 0], as for kappa (zero)"},
      {"scale", "density scale"},
      {"alpha", "tail index"},
      {"log_exponent", "log exponent"},
      {"rate", "exponential rate"},
      {"t", "tabulated sample times"},
      {"k", "tabulated sample values"},
      {"tail_alpha", "declared tail index"},
      {"atoms", "location:weight pairs, location u means mass at -u"},
      {"auto_balance", "replace lambda by one atom at 0 carrying kappa's mass (true when [lambda] is absent)"}}},
    {"numerics",
     {{"horizon", "kernel quadrature horizon (max(100, 50 tau, last atom + 100, table end + 100))"},
      {"quad_step", "kernel quadrature step (0.01)"},
      {"solve_horizon", "Volterra horizon T (200)"},
      {"solve_step", "Volterra step h (0.05)"},
      {"balance_tol", "balance tolerance (1e-9 closed forms, 1e-6 tables)"}}},
    {"simulation",
     {{"horizon", "simulated horizon T (50)"},
      {"step", "Euler step h (0.01)"},
      {"paths", "number of paths (1000)"},
      {"seed", "64-bit seed (0)"},
      {"s0", "initial price (1)"},
      {"record_every", "keep every k-th grid point (steps per time unit when 1/h is an integer, else 1)"},
      {"sample_paths", "paths written to the per-path CSV (0)"}}},
    {"analysis",
     {{"deltas", "lags for gamma (0, 1, 5, 10, 100, 1000, 10000)"},
      {"kernel_grid", "points where analyze tabulates K"},
      {"moment_times", "times for empirical moments (10, 50)"},
      {"autocov_time", "base time for empirical autocovariance (40)"},
      {"autocov_deltas", "lags for empirical autocovariance (1, 5)"},
      {"efficiency_delta", "return window (1)"},
      {"efficiency_lag", "distance between return windows (5)"},
      {"efficiency_time", "start of the first window (10)"}}},
    {"discrete",
     {{"family", "power_law | finite | from_kernel"},
      {"scale", "power_law scale c (1)"},
      {"alpha", "power_law tail index (1)"},
      {"a", "finite coefficient list"},
      {"h", "from_kernel lattice step (simulation step)"},
      {"sigma", "sigma (model sigma)"},
      {"beta", "beta (model beta)"},
      {"noise", "normal | rademacher (normal)"},
      {"steps", "recursion length (1000)"},
      {"paths", "number of paths (1000)"}}},
};

void check_schema(const json& doc) {
  if (!doc.is_object()) config_error("configuration must be an object of sections");
  for (const auto& [section, body] : doc.items()) {
    if (!kSchema.contains(section)) config_error("unknown section [" + section + "]");
    if (!body.is_object()) config_error("section [" + section + "] must be a table of keys");
    for (const auto& [key, v] : body.items())
      if (!kSchema[section].contains(key)) config_error("unknown key '" + key + "' in [" + section + "]");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) config_error(where + " must be a number");
  return v.get<double>();
}

double get(const json& sec, const char* key, double fallback, const std::string& section) {
  return sec.contains(key) ? number(sec[key], section + "." + key) : fallback;
}

long get_count(const json& sec, const char* key, long fallback, const std::string& section) {
  if (!sec.contains(key)) return fallback;
  const json& v = sec[key];
  if (!v.is_number_integer()) config_error(section + "." + key + " must be an integer");
  return v.get<long>();
}

std::vector<double> list(const json& v, const std::string& where) {
  std::vector<double> out;
  if (v.is_array())
    for (const auto& e : v) out.push_back(number(e, where));
  else
    out.push_back(number(v, where));
  return out;
}

std::vector<Atom> atoms(const json& v, const std::string& where) {
  std::vector<Atom> out;
  auto one = [&](const json& e) {
    if (e.is_array() && e.size() == 2) return Atom{number(e[0], where), number(e[1], where)};
    if (e.is_object() && e.contains("location") && e.contains("weight"))
      return Atom{number(e["location"], where), number(e["weight"], where)};
    config_error(where + " entries must be location:weight pairs");
  };
  if (v.is_array() && !v.empty() && v[0].is_number()) {
    out.push_back(one(v));
  } else if (v.is_array()) {
    for (const auto& e : v) out.push_back(one(e));
  } else {
    out.push_back(one(v));
  }
  return out;
}

DensityFamily density(const json& sec, const std::string& section) {
  const std::string family = sec.contains("family") ? lower(sec["family"].get<std::string>()) : "zero";
  const double scale = get(sec, "scale", 1.0, section);
  const double alpha = get(sec, "alpha", 1.0, section);
  if (family == "zero") return ZeroDensity{};
  if (family == "power_law") return PowerLaw{scale, alpha};
  if (family == "power_log_law") return PowerLogLaw{scale, alpha, get(sec, "log_exponent", 0.0, section)};
  if (family == "exponential") return Exponential{scale, get(sec, "rate", 1.0, section)};
  if (family == "tabulated") {
    if (!sec.contains("t") || !sec.contains("k")) config_error(section + ": tabulated density needs t and k");
    Tabulated tab{list(sec["t"], section + ".t"), list(sec["k"], section + ".k"), std::nullopt};
    if (sec.contains("tail_alpha")) tab.tail_alpha = number(sec["tail_alpha"], section + ".tail_alpha");
    return tab;
  }
  config_error(section + ": unknown density family '" + family + "'");
}

SignedMeasure measure(const json& sec, Support support, const std::string& section) {
  std::vector<Atom> a;
  if (sec.contains("atoms")) a = atoms(sec["atoms"], section + ".atoms");
  return SignedMeasure(support, std::move(a), density(sec, section));
}

long auto_record_every(double T, double h) {
  const double per_unit = 1.0 / h;
  const double r = std::round(per_unit);
  if (r < 1.0 || std::abs(per_unit - r) > 1e-9 * per_unit) return 1;
  const double steps = std::round(T / h);
  const auto k = static_cast<long>(r);
  return static_cast<long>(steps) % k == 0 ? k : 1;
}

}  // namespace

const json& schema() { return kSchema; }

json parse_ini(const std::string& text) {
  json doc = json::object();
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') config_error("line " + std::to_string(lineno) + ": malformed section header");
      section = lower(trim(body.substr(1, body.size() - 2)));
      if (!doc.contains(section)) doc[section] = json::object();
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) config_error("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) config_error("line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = lower(trim(body.substr(0, eq)));
    doc[section][key] = value(trim(body.substr(eq + 1)));
  }
  return doc;
}

json read_document(const std::string& path) {
  std::ifstream f(path);
  if (!f) config_error("cannot open configuration file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = (first != std::string::npos && text[first] == '{') ||
                       (path.size() >= 5 && path.substr(path.size() - 5) == ".json");
  if (!is_json) return parse_ini(text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
}

RunConfig from_document(const json& doc) {
  check_schema(doc);
  RunConfig rc;
  rc.snapshot = doc;
  const json empty = json::object();
  auto section = [&](const char* name) -> const json& { return doc.contains(name) ? doc[name] : empty; };

  try {
    const json& model = section("model");
    rc.model.sigma = get(model, "sigma", 1.0, "model");
    rc.model.beta = get(model, "beta", 0.0, "model");
    rc.model.mu = get(model, "mu", 0.0, "model");
    const double tau = get(model, "tau", 0.0, "model");
    if (!(tau >= 0.0)) config_error("model.tau must be >= 0");

    rc.model.kappa = measure(section("kappa"), Support::half_line(), "kappa");
    const json& lam = section("lambda");
    bool auto_balance = !doc.contains("lambda");
    if (lam.contains("auto_balance")) {
      if (!lam["auto_balance"].is_boolean()) config_error("lambda.auto_balance must be true or false");
      auto_balance = lam["auto_balance"].get<bool>();
    }
    rc.model.lambda = auto_balance ? balancing_point_mass(rc.model.kappa, tau)
                                   : measure(lam, Support::delay(tau), "lambda");

    const json& num = section("numerics");
    if (num.contains("balance_tol")) rc.model.balance_tol = number(num["balance_tol"], "numerics.balance_tol");
    if (num.contains("horizon") || num.contains("quad_step")) {
      QuadratureOptions q;
      q.horizon = get(num, "horizon", 100.0, "numerics");
      q.step = get(num, "quad_step", 0.01, "numerics");
      rc.model.quadrature = q;
    }
    rc.solve_horizon = get(num, "solve_horizon", rc.solve_horizon, "numerics");
    rc.solve_step = get(num, "solve_step", rc.solve_step, "numerics");

    const json& sim = section("simulation");
    rc.sim.T = get(sim, "horizon", rc.sim.T, "simulation");
    rc.sim.h = get(sim, "step", rc.sim.h, "simulation");
    rc.sim.paths = get_count(sim, "paths", rc.sim.paths, "simulation");
    if (sim.contains("seed")) {
      if (!sim["seed"].is_number_integer()) config_error("simulation.seed must be an integer");
      rc.sim.seed = sim["seed"].is_number_unsigned() ? sim["seed"].get<std::uint64_t>()
                                                     : static_cast<std::uint64_t>(sim["seed"].get<long long>());
    }
    rc.sim.s0 = get(sim, "s0", rc.sim.s0, "simulation");
    rc.sim.record_every = get_count(sim, "record_every", 0, "simulation");
    rc.sample_paths = get_count(sim, "sample_paths", 0, "simulation");

    const json& an = section("analysis");
    if (an.contains("deltas")) rc.deltas = list(an["deltas"], "analysis.deltas");
    if (an.contains("kernel_grid")) rc.kernel_grid = list(an["kernel_grid"], "analysis.kernel_grid");
    if (an.contains("moment_times")) rc.moment_times = list(an["moment_times"], "analysis.moment_times");
    rc.autocov_time = get(an, "autocov_time", rc.autocov_time, "analysis");
    if (an.contains("autocov_deltas")) rc.autocov_deltas = list(an["autocov_deltas"], "analysis.autocov_deltas");
    rc.efficiency_delta = get(an, "efficiency_delta", rc.efficiency_delta, "analysis");
    rc.efficiency_lag = get(an, "efficiency_lag", rc.efficiency_lag, "analysis");
    rc.efficiency_time = get(an, "efficiency_time", rc.efficiency_time, "analysis");

    if (doc.contains("discrete")) {
      const json& d = doc["discrete"];
      DiscreteModel dm;
      dm.sigma = get(d, "sigma", rc.model.sigma, "discrete");
      dm.beta = get(d, "beta", rc.model.beta, "discrete");
      const std::string noise = d.contains("noise") ? lower(d["noise"].get<std::string>()) : "normal";
      if (noise == "normal")
        dm.noise = Noise::StandardNormal;
      else if (noise == "rademacher")
        dm.noise = Noise::Rademacher;
      else
        config_error("discrete.noise must be normal or rademacher");
      const std::string family = d.contains("family") ? lower(d["family"].get<std::string>()) : "power_law";
      if (family == "power_law") {
        dm.a_seq = PowerLawSeq{get(d, "scale", 1.0, "discrete"), get(d, "alpha", 1.0, "discrete")};
      } else if (family == "finite") {
        if (!d.contains("a")) config_error("discrete.a is required for the finite family");
        dm.a_seq = FiniteSeq{list(d["a"], "discrete.a")};
      } else if (family == "from_kernel") {
        const Model base(rc.model);
        dm.a_seq = FromKernel{base.kernel(), get(d, "h", rc.sim.h, "discrete")};
      } else {
        config_error("discrete.family must be power_law, finite or from_kernel");
      }
      validate(dm);
      rc.discrete = dm;
      rc.discrete_steps = get_count(d, "steps", rc.discrete_steps, "discrete");
      rc.discrete_paths = get_count(d, "paths", rc.discrete_paths, "discrete");
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("malformed value: ") + e.what());
  }
  return rc;
}

RunConfig load(const std::string& path) { return from_document(read_document(path)); }

/// Resolves the automatic record stride once T and h are final.
long resolve_record_every(const RunConfig& rc) {
  return rc.sim.record_every > 0 ? rc.sim.record_every : auto_record_every(rc.sim.T, rc.sim.h);
}

}  // namespace lmbs::config
