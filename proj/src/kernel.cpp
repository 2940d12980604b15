#include "lmbs/kernel.hpp"

#include "lmbs/error.hpp"
#include "lmbs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lmbs {

double PowerLawClosedForm::operator()(double x) const {
  return scale / (alpha * std::pow(1.0 + x, alpha));
}

const char* to_string(IntegralVerdict v) noexcept {
  switch (v) {
    case IntegralVerdict::Finite: return "finite";
    case IntegralVerdict::Divergent: return "divergent";
    case IntegralVerdict::Undetermined: return "undetermined";
  }
  return "undetermined";
}

Kernel::Kernel(SignedMeasure lambda, SignedMeasure kappa)
    : Kernel(lambda, kappa, default_balance_tolerance(lambda, kappa)) {}

Kernel::Kernel(SignedMeasure lambda, SignedMeasure kappa, double balance_tol)
    : lambda_(std::move(lambda)), kappa_(std::move(kappa)) {
  const Balance b = validate_balance(lambda_, kappa_, balance_tol);
  if (!b.balanced)
    fail(ErrorKind::Config, "kernel", "Kernel",
         "measures are unbalanced: lambda - kappa mass = " + std::to_string(b.discrepancy));

  for (const Atom& a : lambda_.atoms())
    if (a.location > 0.0) breakpoints_.push_back(a.location);
  for (const Atom& a : kappa_.atoms())
    if (a.location > 0.0) breakpoints_.push_back(a.location);
  if (tau() > 0.0) breakpoints_.push_back(tau());
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());

  smooth_from_ = breakpoints_.empty() ? 0.0 : breakpoints_.back();
  smooth_from_ = std::max(smooth_from_, tau());
  if (const auto* tab = std::get_if<Tabulated>(&kappa_.density()))
    smooth_from_ = std::max(smooth_from_, tab->t.back());

  const auto* pl = std::get_if<PowerLaw>(&kappa_.density());
  const bool point_lambda = lambda_.atoms().size() == 1 && lambda_.atoms()[0].location == 0.0 &&
                            std::holds_alternative<ZeroDensity>(lambda_.density());
  if (pl && kappa_.atoms().empty() && point_lambda) closed_form_ = PowerLawClosedForm{pl->scale, pl->alpha};
}

double Kernel::operator()(double x) const {
  if (!(x > 0.0)) fail(ErrorKind::NumericalPrecondition, "kernel", "eval", "K is evaluated at x > 0 only");
  return eval(x, Side::AsWritten);
}

double Kernel::eval(double x, Side side) const {
  if (x < 0.0 || (x == 0.0 && side != Side::Right) || std::isnan(x))
    fail(ErrorKind::NumericalPrecondition, "kernel", "eval", "K is evaluated at x > 0 only");
  auto counts = [side, x](double loc) { return side == Side::Right ? loc > x : loc >= x; };
  double value = 0.0;
  const bool delay_branch = side == Side::Left ? x <= tau() : x < tau();
  if (delay_branch) {
    for (const Atom& a : lambda_.atoms())
      if (counts(a.location)) value -= a.weight;
    value -= density_mass(lambda_.density(), x, tau());
  }
  for (const Atom& a : kappa_.atoms())
    if (counts(a.location)) value += a.weight;
  return value + density_tail(kappa_.density(), x);
}

Eigen::ArrayXd eval(const Kernel& k, const Eigen::Ref<const Eigen::ArrayXd>& x) {
  Eigen::ArrayXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = k(x[i]);
  return out;
}

Eigen::VectorXd kernel_grid(const Kernel& k, double h, Eigen::Index n) {
  Eigen::VectorXd out(n);
  for (Eigen::Index m = 0; m < n; ++m) out[m] = k(static_cast<double>(m + 1) * h);
  return out;
}

QuadratureOptions default_quadrature(const Kernel& k) {
  double horizon = std::max(100.0, 50.0 * k.tau());
  double last_atom = 0.0;
  for (const Atom& a : k.kappa().atoms()) last_atom = std::max(last_atom, a.location);
  for (const Atom& a : k.lambda().atoms()) last_atom = std::max(last_atom, a.location);
  horizon = std::max(horizon, last_atom + 100.0);
  if (const auto* tab = std::get_if<Tabulated>(&k.kappa().density()))
    horizon = std::max(horizon, tab->t.back() + 100.0);
  return {horizon, 0.01};
}

IntegralVerdict integrability(const Kernel& k, int power) {
  const TailInfo t = k.tail();
  switch (t.kind) {
    case TailKind::None:
    case TailKind::Light:
      return IntegralVerdict::Finite;
    case TailKind::Unknown:
      return IntegralVerdict::Undetermined;
    case TailKind::RegularlyVarying: {
      // |K|^q ~ C x^(-q alpha) log(x)^(-q p)
      const double decay = power * t.alpha;
      if (decay > 1.0) return IntegralVerdict::Finite;
      if (decay == 1.0 && power * t.log_exponent > 1.0) return IntegralVerdict::Finite;
      return IntegralVerdict::Divergent;
    }
  }
  return IntegralVerdict::Undetermined;
}

namespace {

// Composite trapezoid over [cuts[i], cuts[i+1]] panels. Panel ends use
// one-sided limits so no panel straddles a jump.
template <class Interior, class AtStart, class AtEnd>
double piecewise_trapezoid(const std::vector<double>& cuts, double step, const Interior& f,
                           const AtStart& f_start, const AtEnd& f_end) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double len = b - a;
    const auto n = std::max<long>(1, static_cast<long>(std::ceil(len / step - 1e-9)));
    const double hs = len / static_cast<double>(n);
    double s = 0.5 * (f_start(a) + f_end(b));
    for (long j = 1; j < n; ++j) s += f(a + static_cast<double>(j) * hs);
    total += hs * s;
  }
  return total;
}

std::vector<double> make_cuts(const Kernel& k, double horizon, double delta) {
  std::vector<double> cuts{0.0, horizon};
  for (double b : k.breakpoints()) {
    if (b < horizon) cuts.push_back(b);
    if (delta > 0.0 && b - delta > 0.0 && b - delta < horizon) cuts.push_back(b - delta);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  for (double c : cuts)
    if (out.empty() || c - out.back() > 1e-12 * std::max(1.0, c)) out.push_back(c);
  out.back() = horizon;
  return out;
}

double effective_horizon(const Kernel& k, const QuadratureOptions& q) {
  if (!(q.step > 0.0) || !(q.horizon > 0.0))
    fail(ErrorKind::Config, "kernel", "quadrature", "step and horizon must be positive");
  return std::max(q.horizon, k.smooth_from());
}

// Contribution of [H, inf), where K equals T(x) = int_x^inf k:
//   power 2: int_H^inf T(s) T(s+delta) ds,   power 1: int_H^inf T (or |T|).
double tail_part(const Kernel& k, double horizon, double delta, int power, bool absolute) {
  const TailInfo info = k.tail();
  const DensityFamily& d = k.kappa().density();
  switch (info.kind) {
    case TailKind::None:
      return 0.0;
    case TailKind::Unknown:
      fail(ErrorKind::TailUndetermined, "kernel", "tail", "kappa density has no tail metadata");
    case TailKind::Light: {
      const auto& e = std::get<Exponential>(d);
      const double c = e.scale / e.rate;
      if (power == 2)
        return c * c * std::exp(-e.rate * delta) * std::exp(-2.0 * e.rate * horizon) / (2.0 * e.rate);
      return c / e.rate * std::exp(-e.rate * horizon);
    }
    case TailKind::RegularlyVarying:
      break;
  }
  // u = log(1+s): T(s) ~ (C/alpha) e^(-alpha u) u^(-p)
  const double lead = std::abs(info.scale) / info.alpha;
  const double u0 = std::log1p(horizon);
  if (power == 2) {
    auto f = [&](double u) {
      const double s = std::expm1(u);
      return k.tail_value(s) * k.tail_value(s + delta) * std::exp(u);
    };
    return numerics::log_tail_integral(f, u0, 2.0 * info.alpha - 1.0, 2.0 * info.log_exponent, lead * lead);
  }
  auto f = [&](double u) {
    const double v = k.tail_value(std::expm1(u)) * std::exp(u);
    return absolute ? std::abs(v) : v;
  };
  const double sign = (absolute || info.scale >= 0.0) ? 1.0 : -1.0;
  return numerics::log_tail_integral(f, u0, info.alpha - 1.0, info.log_exponent, sign * lead);
}

IntegralResult first_power(const Kernel& k, const QuadratureOptions& q, bool absolute) {
  const IntegralVerdict v = integrability(k, 1);
  if (v != IntegralVerdict::Finite) return {v, 0.0, 0.0};
  const double horizon = effective_horizon(k, q);
  const auto cuts = make_cuts(k, horizon, 0.0);
  auto mag = [absolute](double x) { return absolute ? std::abs(x) : x; };
  const double body = piecewise_trapezoid(
      cuts, q.step, [&](double x) { return mag(k.eval(x, Side::AsWritten)); },
      [&](double a) { return mag(k.eval(a, Side::Right)); },
      [&](double b) { return mag(k.eval(b, Side::Left)); });
  const double tail = tail_part(k, horizon, 0.0, 1, absolute);
  return {IntegralVerdict::Finite, body + tail, tail};
}

IntegralResult product_integral(const Kernel& k, double delta, const QuadratureOptions& q) {
  const IntegralVerdict v = integrability(k, 2);
  if (v != IntegralVerdict::Finite) return {v, 0.0, 0.0};
  const double horizon = effective_horizon(k, q);
  const auto cuts = make_cuts(k, horizon, delta);
  const double body = piecewise_trapezoid(
      cuts, q.step,
      [&](double x) { return k.eval(x, Side::AsWritten) * k.eval(x + delta, Side::AsWritten); },
      [&](double a) { return k.eval(a, Side::Right) * k.eval(a + delta, Side::Right); },
      [&](double b) { return k.eval(b, Side::Left) * k.eval(b + delta, Side::Left); });
  const double tail = tail_part(k, horizon, delta, 2, false);
  return {IntegralVerdict::Finite, body + tail, tail};
}

}  // namespace

IntegralResult l2_norm_sq(const Kernel& k, const QuadratureOptions& q) {
  return product_integral(k, 0.0, q);
}

IntegralResult l1_norm(const Kernel& k, const QuadratureOptions& q) {
  return first_power(k, q, true);
}

IntegralResult integral(const Kernel& k, const QuadratureOptions& q) {
  return first_power(k, q, false);
}

double tail_product(const Kernel& k, double from, double delta) {
  if (!(from >= k.smooth_from()) || !(delta >= 0.0))
    fail(ErrorKind::NumericalPrecondition, "kernel", "tail_product",
         "needs from >= smooth_from and delta >= 0");
  if (integrability(k, 2) != IntegralVerdict::Finite)
    fail(ErrorKind::NumericalPrecondition, "kernel", "tail_product",
         "stationarity-violated: K is not known to be square integrable");
  return tail_part(k, from, delta, 2, false);
}

double overlap(const Kernel& k, double delta, const QuadratureOptions& q) {
  if (!(delta >= 0.0)) fail(ErrorKind::Config, "kernel", "overlap", "delta must be >= 0");
  const IntegralResult r = product_integral(k, delta, q);
  if (r.verdict != IntegralVerdict::Finite)
    fail(ErrorKind::NumericalPrecondition, "kernel", "overlap",
         std::string("stationarity-violated: K is not known to be square integrable (") +
             to_string(r.verdict) + ")");
  return r.value;
}

}  // namespace lmbs
