#include "lmbs/autocov.hpp"

#include "lmbs/error.hpp"
#include "lmbs/numerics.hpp"

#include <cmath>
#include <limits>

namespace lmbs {

const char* to_string(MemoryClass c) noexcept {
  switch (c) {
    case MemoryClass::Short: return "short";
    case MemoryClass::Long: return "long";
    case MemoryClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::LongMemory: return "long-memory";
    case Regime::ShortMemory: return "short-memory";
    case Regime::Critical: return "critical";
  }
  return "long-memory";
}

namespace {

Stationarity require_stationary(const Model& m, const char* op) {
  const Stationarity s = stationarity_margin(m);
  if (!s.stationary)
    fail(ErrorKind::NumericalPrecondition, "autocov", op,
         std::string("stationarity-violated: ") + to_string(*s.reason));
  return s;
}

double slowly_varying(const TailInfo& t, double x) {
  if (t.log_exponent == 0.0) return t.scale;
  return t.scale * std::pow(std::log(x), -t.log_exponent);
}

}  // namespace

double c_factor(const Model& m) {
  const Stationarity s = require_stationary(m, "c_factor");
  return m.beta() * m.beta() * m.sigma() * m.sigma() / (1.0 - s.margin);
}

double gamma(const Model& m, double delta, const QuadratureOptions& q) {
  if (!(delta >= 0.0)) fail(ErrorKind::Config, "autocov", "gamma", "delta must be >= 0");
  const double c = c_factor(m);
  if (c == 0.0) return 0.0;
  return c * overlap(m.kernel(), delta, q);
}

double gamma(const Model& m, double delta) { return gamma(m, delta, m.quadrature()); }

AutocovCurve autocov_curve(const Model& m, const std::vector<double>& deltas) {
  AutocovCurve curve;
  curve.c_factor = c_factor(m);
  curve.memory_class = classify_memory(m);
  curve.deltas = Eigen::Map<const Eigen::VectorXd>(deltas.data(), static_cast<Eigen::Index>(deltas.size()));
  curve.values.resize(curve.deltas.size());
  for (Eigen::Index i = 0; i < curve.deltas.size(); ++i) curve.values[i] = gamma(m, curve.deltas[i]);
  return curve;
}

MemoryClass classify_memory(const Model& m) {
  require_stationary(m, "classify_memory");
  const FirstMoment fm = first_moment_class(m.kernel().kappa());
  switch (fm.kind) {
    case MomentClass::Finite: return MemoryClass::Short;
    case MomentClass::Undetermined: return MemoryClass::Undetermined;
    case MomentClass::Infinite: break;
  }
  const SignedMeasure& kappa = m.kernel().kappa();
  return is_nonnegative(kappa) || is_nonpositive(kappa) ? MemoryClass::Long : MemoryClass::Undetermined;
}

double long_memory_constant(double alpha) {
  return std::tgamma(2.0 * alpha - 1.0) * std::tgamma(1.0 - alpha) / (std::tgamma(alpha + 1.0) * alpha);
}

Asymptote asymptotic_gamma(const Model& m, double delta) {
  const TailInfo t = m.kernel().tail();
  if (t.kind != TailKind::RegularlyVarying)
    fail(ErrorKind::NumericalPrecondition, "autocov", "asymptotic_gamma",
         "kappa density carries no regular-variation metadata");
  if (!(delta > 1.0))
    fail(ErrorKind::Config, "autocov", "asymptotic_gamma", "the asymptote is evaluated at delta > 1");
  const double a = t.alpha;
  if (a < 0.5 || (a == 0.5 && 2.0 * t.log_exponent <= 1.0))
    fail(ErrorKind::NumericalPrecondition, "autocov", "asymptotic_gamma",
         "not-L2: K is not square integrable for this tail");
  if (a == 1.0)
    fail(ErrorKind::NumericalPrecondition, "autocov", "asymptotic_gamma",
         "unsupported-boundary: tail index 1 has no rate statement");
  const double c = c_factor(m);
  Asymptote out;
  if (a == 0.5) {
    const double p2 = 2.0 * t.log_exponent;
    out.regime = Regime::Critical;
    out.value = c / (a * a) * t.scale * t.scale * std::pow(std::log(delta), 1.0 - p2) / (p2 - 1.0);
  } else if (a < 1.0) {
    const double l = slowly_varying(t, delta);
    out.regime = Regime::LongMemory;
    out.value = c * long_memory_constant(a) * std::pow(delta, 1.0 - 2.0 * a) * l * l;
  } else {
    out.regime = Regime::ShortMemory;
    if (c == 0.0) return out;
    const IntegralResult k1 = integral(m.kernel(), m.quadrature());
    out.value = c * k1.value * slowly_varying(t, delta) * std::pow(delta, -a) / a;
  }
  return out;
}

RateReport verify_rate(const Model& m, const std::vector<double>& deltas, const QuadratureOptions& q) {
  RateReport report;
  for (double d : deltas) {
    RateRow row;
    row.delta = d;
    const Asymptote a = asymptotic_gamma(m, d);
    report.regime = a.regime;
    row.asymptote = a.value;
    row.gamma = gamma(m, d, q);
    if (row.asymptote == 0.0)
      row.ratio = row.gamma == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    else
      row.ratio = row.gamma / row.asymptote;
    report.rows.push_back(row);
  }
  const std::size_t n = report.rows.size();
  report.converging = n > 0;
  for (std::size_t i = n >= 3 ? n - 3 : 0; i + 1 < n; ++i)
    if (std::abs(report.rows[i + 1].ratio - 1.0) > std::abs(report.rows[i].ratio - 1.0))
      report.converging = false;
  return report;
}

RateReport verify_rate(const Model& m, const std::vector<double>& deltas) {
  return verify_rate(m, deltas, m.quadrature());
}

double gamma_partial_sum(const Model& m, long N) {
  double sum = 0.0;
  for (long n = 0; n <= N; ++n) sum += gamma(m, static_cast<double>(n));
  return sum;
}

double gamma_tail_integral(const Model& m, double from) {
  if (!(from > 1.0)) fail(ErrorKind::Config, "autocov", "gamma_tail_integral", "lower limit must exceed 1");
  const Asymptote probe = asymptotic_gamma(m, from);
  if (probe.regime != Regime::ShortMemory)
    fail(ErrorKind::NumericalPrecondition, "autocov", "gamma_tail_integral",
         "gamma is integrable only in the short-memory regime");
  const TailInfo t = m.kernel().tail();
  const double c = c_factor(m);
  if (c == 0.0) return 0.0;
  const double k1 = integral(m.kernel(), m.quadrature()).value;
  // in u = log(1 + delta): gamma e^u ~ A e^{-(a-1) u} u^{-p}
  const double amplitude = c * k1 * t.scale / t.alpha;
  auto f = [&](double u) { return gamma(m, std::expm1(u)) * std::exp(u); };
  return numerics::log_tail_integral(f, std::log1p(from), t.alpha - 1.0, t.log_exponent, amplitude);
}

}  // namespace lmbs
