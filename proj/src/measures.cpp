#include "lmbs/measures.hpp"

#include "lmbs/error.hpp"
#include "lmbs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lmbs {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::NumericalPrecondition: return "numerical-precondition";
    case ErrorKind::TailUndetermined: return "tail-undetermined";
    case ErrorKind::ToleranceFailure: return "tolerance-failure";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegligibleSample = 1e-12;

[[noreturn]] void config_error(const char* op, const std::string& msg) {
  fail(ErrorKind::Config, "measures", op, msg);
}

// log(e + s) written in u = log(1+s) so it stays finite for any u.
double log_e_plus(double u) {
  return u + std::log1p((std::numbers::e - 1.0) * std::exp(-u));
}

// --- tabulated helpers ----------------------------------------------------

bool last_sample_negligible(const Tabulated& tab) {
  double peak = 0.0;
  for (double v : tab.k) peak = std::max(peak, std::abs(v));
  return std::abs(tab.k.back()) <= kNegligibleSample * peak;
}

double table_interp(const Tabulated& tab, double t) {
  const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
  if (it == tab.t.begin()) return 0.0;
  if (it == tab.t.end()) return tab.k.back();
  const auto i = static_cast<std::size_t>(it - tab.t.begin()) - 1;
  const double w = (t - tab.t[i]) / (tab.t[i + 1] - tab.t[i]);
  return tab.k[i] + w * (tab.k[i + 1] - tab.k[i]);
}

// C in C (1+t)^(-1-alpha), the continuation beyond the last sample.
double table_tail_constant(const Tabulated& tab) {
  return tab.k.back() * std::pow(1.0 + tab.t.back(), 1.0 + *tab.tail_alpha);
}

// int_x^inf of the continuation beyond t_N, x >= t_N.
double table_beyond(const Tabulated& tab, double x, bool absolute) {
  if (x == kInf) return 0.0;
  const double kn = absolute ? std::abs(tab.k.back()) : tab.k.back();
  if (tab.tail_alpha) {
    const double a = *tab.tail_alpha;
    return kn * std::pow(1.0 + tab.t.back(), 1.0 + a) / a * std::pow(1.0 + x, -a);
  }
  if (kn == 0.0 || last_sample_negligible(tab)) return 0.0;
  fail(ErrorKind::TailUndetermined, "measures", "density_tail",
       "tabulated density has no declared tail index and a non-negligible last sample");
}

// Integral of a linear piece from (a, ka) to (b, kb) of |k| or k, optionally
// weighted by s (Simpson is exact for the resulting quadratics).
double linear_piece(double a, double ka, double b, double kb, bool absolute, bool first_moment) {
  if (b <= a) return 0.0;
  auto piece = [first_moment](double a0, double k0, double b0, double k1) {
    const double m = 0.5 * (a0 + b0);
    const double km = 0.5 * (k0 + k1);
    if (!first_moment) return 0.5 * (b0 - a0) * (k0 + k1);
    return (b0 - a0) / 6.0 * (a0 * k0 + 4.0 * m * km + b0 * k1);
  };
  if (!absolute) return piece(a, ka, b, kb);
  if ((ka >= 0.0) == (kb >= 0.0) || ka == 0.0 || kb == 0.0)
    return piece(a, std::abs(ka), b, std::abs(kb));
  const double zero = a + (b - a) * ka / (ka - kb);
  return piece(a, std::abs(ka), zero, 0.0) + piece(zero, 0.0, b, std::abs(kb));
}

// int_a^b over the sampled range only (zero outside [t_0, t_N]).
double table_inside(const Tabulated& tab, double a, double b, bool absolute, bool first_moment) {
  const double lo = std::max(a, tab.t.front());
  const double hi = std::min(b, tab.t.back());
  if (hi <= lo) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < tab.t.size(); ++i) {
    const double s0 = std::max(lo, tab.t[i]);
    const double s1 = std::min(hi, tab.t[i + 1]);
    if (s1 <= s0) continue;
    sum += linear_piece(s0, table_interp(tab, s0), s1, table_interp(tab, s1), absolute, first_moment);
  }
  return sum;
}

double table_mass(const Tabulated& tab, double a, double b, bool absolute) {
  double sum = table_inside(tab, a, b, absolute, false);
  if (b > tab.t.back()) {
    const double from = std::max(a, tab.t.back());
    if (b == kInf) {
      sum += table_beyond(tab, from, absolute);
    } else if (tab.tail_alpha) {
      sum += table_beyond(tab, from, absolute) - table_beyond(tab, b, absolute);
    }
  }
  return sum;
}

// --- power-log law --------------------------------------------------------

// int_x^inf c (1+t)^(-1-alpha) log(e+t)^(-p) dt with 1+t = (1+x) e^w, then
// y = alpha w: (c/alpha)(1+x)^(-alpha) int_0^inf e^(-y) g(y/alpha) dy.
double power_log_tail(const PowerLogLaw& d, double x) {
  if (x == kInf) return 0.0;
  const double u0 = std::log1p(x);
  const auto& rule = numerics::gauss_legendre8();
  auto integrand = [&](double y) {
    return std::exp(-y) * std::pow(log_e_plus(u0 + y / d.alpha), -d.log_exponent);
  };
  double acc = 0.0;
  for (int panel = 0; panel < 44; ++panel)
    acc += numerics::gauss_panel(integrand, panel, panel + 1.0, rule);
  return d.scale / d.alpha * std::exp(-d.alpha * u0) * acc;
}

// --- validation -----------------------------------------------------------

void validate_density(const DensityFamily& d, const char* op) {
  auto positive = [op](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) config_error(op, std::string(what) + " must be positive and finite");
  };
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          positive(f.scale, "power_law scale");
          positive(f.alpha, "power_law alpha");
        } else if constexpr (std::is_same_v<T, PowerLogLaw>) {
          positive(f.scale, "power_log_law scale");
          positive(f.alpha, "power_log_law alpha");
          if (!std::isfinite(f.log_exponent)) config_error(op, "power_log_law log exponent must be finite");
        } else if constexpr (std::is_same_v<T, Exponential>) {
          positive(f.scale, "exponential scale");
          positive(f.rate, "exponential rate");
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          if (f.t.size() < 2 || f.t.size() != f.k.size())
            config_error(op, "tabulated density needs >= 2 samples with matching t and k");
          if (f.t.front() < 0.0) config_error(op, "tabulated grid must start at t >= 0");
          for (std::size_t i = 0; i < f.t.size(); ++i) {
            if (!std::isfinite(f.t[i]) || !std::isfinite(f.k[i]))
              config_error(op, "tabulated samples must be finite");
            if (i > 0 && !(f.t[i] > f.t[i - 1]))
              config_error(op, "tabulated grid must be strictly increasing");
          }
          if (f.tail_alpha) positive(*f.tail_alpha, "tabulated tail index");
        }
      },
      d);
}

}  // namespace

// --- density primitives ---------------------------------------------------

double density_value(const DensityFamily& d, double t) {
  return std::visit(
      [t](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return f.scale * std::pow(1.0 + t, -1.0 - f.alpha);
        } else if constexpr (std::is_same_v<T, PowerLogLaw>) {
          return f.scale * std::pow(1.0 + t, -1.0 - f.alpha) *
                 std::pow(std::log(std::numbers::e + t), -f.log_exponent);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return f.scale * std::exp(-f.rate * t);
        } else {
          if (t <= f.t.back()) return table_interp(f, t);
          if (!f.tail_alpha) return 0.0;
          return f.k.back() * std::pow((1.0 + t) / (1.0 + f.t.back()), -1.0 - *f.tail_alpha);
        }
      },
      d);
}

double density_tail(const DensityFamily& d, double x) {
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return x == kInf ? 0.0 : f.scale / f.alpha * std::pow(1.0 + x, -f.alpha);
        } else if constexpr (std::is_same_v<T, PowerLogLaw>) {
          return power_log_tail(f, x);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return x == kInf ? 0.0 : f.scale / f.rate * std::exp(-f.rate * x);
        } else {
          return table_mass(f, x, kInf, false);
        }
      },
      d);
}

double density_mass(const DensityFamily& d, double a, double b) {
  if (b <= a) return 0.0;
  if (const auto* tab = std::get_if<Tabulated>(&d)) return table_mass(*tab, a, b, false);
  return density_tail(d, a) - density_tail(d, b);
}

double density_abs_mass(const DensityFamily& d, double a, double b) {
  if (b <= a) return 0.0;
  if (const auto* tab = std::get_if<Tabulated>(&d)) return table_mass(*tab, a, b, true);
  return density_mass(d, a, b);
}

TailInfo tail_info(const DensityFamily& d) {
  return std::visit(
      [](const auto& f) -> TailInfo {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return {TailKind::None};
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return {TailKind::RegularlyVarying, f.alpha, f.scale, 0.0};
        } else if constexpr (std::is_same_v<T, PowerLogLaw>) {
          return {TailKind::RegularlyVarying, f.alpha, f.scale, f.log_exponent};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return {TailKind::Light};
        } else {
          if (!f.tail_alpha) return {TailKind::Unknown};
          if (f.k.back() == 0.0) return {TailKind::None};
          return {TailKind::RegularlyVarying, *f.tail_alpha, table_tail_constant(f), 0.0};
        }
      },
      d);
}

bool density_nonnegative(const DensityFamily& d) {
  if (const auto* tab = std::get_if<Tabulated>(&d))
    return std::all_of(tab->k.begin(), tab->k.end(), [](double v) { return v >= 0.0; });
  return true;
}

std::string family_name(const DensityFamily& d) {
  static constexpr const char* names[] = {"zero", "power_law", "power_log_law", "exponential", "tabulated"};
  return names[d.index()];
}

// --- SignedMeasure --------------------------------------------------------

SignedMeasure::SignedMeasure(Support support, std::vector<Atom> atoms, DensityFamily density)
    : support_(support), atoms_(std::move(atoms)), density_(std::move(density)) {
  constexpr const char* op = "SignedMeasure";
  if (support_.kind == SupportKind::DelayInterval && (!(support_.tau >= 0.0) || !std::isfinite(support_.tau)))
    config_error(op, "delay horizon tau must be finite and >= 0");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.location) || !std::isfinite(a.weight)) config_error(op, "atoms must be finite");
    if (a.location < 0.0) config_error(op, "atom locations must be >= 0");
    if (is_delay() && a.location > support_.tau) config_error(op, "lambda atoms must lie in [0, tau]");
    if (i > 0 && !(a.location > atoms_[i - 1].location))
      config_error(op, "atom locations must be strictly increasing");
  }
  validate_density(density_, op);
}

double SignedMeasure::upper() const noexcept {
  return is_delay() ? support_.tau : kInf;
}

// --- operations -----------------------------------------------------------

double total_mass(const SignedMeasure& m) {
  double sum = 0.0;
  for (const Atom& a : m.atoms()) sum += a.weight;
  return sum + density_mass(m.density(), 0.0, m.upper());
}

double total_variation(const SignedMeasure& m) {
  double sum = 0.0;
  for (const Atom& a : m.atoms()) sum += std::abs(a.weight);
  return sum + density_abs_mass(m.density(), 0.0, m.upper());
}

double default_balance_tolerance(const SignedMeasure& lambda, const SignedMeasure& kappa) {
  const bool tabulated = std::holds_alternative<Tabulated>(lambda.density()) ||
                         std::holds_alternative<Tabulated>(kappa.density());
  return tabulated ? kBalanceTolTabulated : kBalanceTolClosedForm;
}

Balance validate_balance(const SignedMeasure& lambda, const SignedMeasure& kappa, double tol) {
  if (!lambda.is_delay()) config_error("validate_balance", "lambda must be supported on [-tau, 0]");
  if (kappa.is_delay()) config_error("validate_balance", "kappa must be supported on [0, inf)");
  const double discrepancy = total_mass(lambda) - total_mass(kappa);
  return {std::abs(discrepancy) <= tol, discrepancy};
}

namespace {

// int_0^inf s k(s) ds for the power-log law, alpha >= 1 (p > 1 when alpha = 1).
double power_log_first_moment(const PowerLogLaw& d) {
  // s k(s) ds = c (1 - e^-u) e^((1-alpha) u) log(e+s)^(-p) du
  auto f = [&](double u) {
    return d.scale * -std::expm1(-u) * std::exp((1.0 - d.alpha) * u) *
           std::pow(log_e_plus(u), -d.log_exponent);
  };
  return numerics::log_tail_integral(f, 0.0, d.alpha - 1.0, d.log_exponent, d.scale);
}

}  // namespace

FirstMoment first_moment_class(const SignedMeasure& kappa) {
  if (kappa.is_delay()) config_error("first_moment_class", "kappa must be supported on [0, inf)");
  double atoms = 0.0;
  for (const Atom& a : kappa.atoms()) atoms += a.location * std::abs(a.weight);
  const FirstMoment infinite{MomentClass::Infinite, kInf};
  return std::visit(
      [&](const auto& f) -> FirstMoment {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return {MomentClass::Finite, atoms};
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          if (f.alpha <= 1.0) return infinite;
          return {MomentClass::Finite, atoms + f.scale / (f.alpha * (f.alpha - 1.0))};
        } else if constexpr (std::is_same_v<T, PowerLogLaw>) {
          if (f.alpha < 1.0 || (f.alpha == 1.0 && f.log_exponent <= 1.0)) return infinite;
          return {MomentClass::Finite, atoms + power_log_first_moment(f)};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return {MomentClass::Finite, atoms + f.scale / (f.rate * f.rate)};
        } else {
          if (!f.tail_alpha) return {MomentClass::Undetermined, 0.0};
          double inside = table_inside(f, 0.0, kInf, true, true);
          const double kn = std::abs(f.k.back());
          if (kn == 0.0) return {MomentClass::Finite, atoms + inside};
          const double a = *f.tail_alpha;
          if (a <= 1.0) return infinite;
          const double base = 1.0 + f.t.back();
          const double c = kn * std::pow(base, 1.0 + a);
          inside += c * (std::pow(base, 1.0 - a) / (a - 1.0) - std::pow(base, -a) / a);
          return {MomentClass::Finite, atoms + inside};
        }
      },
      kappa.density());
}

bool is_nonnegative(const SignedMeasure& m) {
  return density_nonnegative(m.density()) &&
         std::all_of(m.atoms().begin(), m.atoms().end(), [](const Atom& a) { return a.weight >= 0.0; });
}

bool is_nonpositive(const SignedMeasure& m) {
  const bool atoms_ok =
      std::all_of(m.atoms().begin(), m.atoms().end(), [](const Atom& a) { return a.weight <= 0.0; });
  if (!atoms_ok) return false;
  if (std::holds_alternative<ZeroDensity>(m.density())) return true;
  if (const auto* tab = std::get_if<Tabulated>(&m.density()))
    return std::all_of(tab->k.begin(), tab->k.end(), [](double v) { return v <= 0.0; });
  return false;  // parametric families are strictly positive
}

SignedMeasure balancing_point_mass(const SignedMeasure& kappa, double tau) {
  return SignedMeasure(Support::delay(tau), {{0.0, total_mass(kappa)}}, ZeroDensity{});
}

}  // namespace lmbs
