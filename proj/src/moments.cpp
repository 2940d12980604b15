#include "lmbs/moments.hpp"

#include "lmbs/error.hpp"
#include "lmbs/numerics.hpp"

#include <cmath>
#include <sstream>

namespace lmbs {

namespace {

Kernel build_kernel(const ModelConfig& cfg) {
  if (!std::isfinite(cfg.sigma) || cfg.sigma == 0.0)
    fail(ErrorKind::Config, "moments", "Model", "sigma must be finite and nonzero");
  if (!std::isfinite(cfg.beta)) fail(ErrorKind::Config, "moments", "Model", "beta must be finite");
  if (!std::isfinite(cfg.mu)) fail(ErrorKind::Config, "moments", "Model", "mu must be finite");
  if (!cfg.lambda.is_delay())
    fail(ErrorKind::Config, "moments", "Model", "lambda must live on a delay interval [-tau, 0]");
  if (cfg.kappa.is_delay())
    fail(ErrorKind::Config, "moments", "Model", "kappa must live on [0, inf)");
  return cfg.balance_tol ? Kernel(cfg.lambda, cfg.kappa, *cfg.balance_tol) : Kernel(cfg.lambda, cfg.kappa);
}

bool on_breakpoint(const Kernel& k, double x) {
  for (double b : k.breakpoints())
    if (std::abs(b - x) <= 1e-12 * std::max(1.0, b)) return true;
  return false;
}

// P[m] = K(mh) K(mh + delta) for m >= 1 and K(h/2) K(h/2 + delta) for m = 0.
// Nodes sitting on a jump take the mean of the two one-sided products.
Eigen::VectorXd product_table(const Kernel& k, double h, Eigen::Index n, double delta) {
  Eigen::VectorXd p(n + 1);
  p[0] = k(0.5 * h) * k(0.5 * h + delta);
  for (Eigen::Index m = 1; m <= n; ++m) {
    const double x = static_cast<double>(m) * h;
    if (on_breakpoint(k, x) || (delta > 0.0 && on_breakpoint(k, x + delta))) {
      const double left = k.eval(x, Side::Left) * k.eval(x + delta, Side::Left);
      const double right = k.eval(x, Side::Right) * k.eval(x + delta, Side::Right);
      p[m] = 0.5 * (left + right);
    } else {
      p[m] = k(x) * k(x + delta);
    }
  }
  return p;
}

// Solves y_i = g_i + c h [ P_i y_0 / 2 + sum_{0<j<i} P_{i-j} y_j + P_0 y_i / 2 ], y_0 = g_0.
Eigen::VectorXd volterra_forward(const Eigen::VectorXd& table, const Eigen::VectorXd& forcing, double c,
                                 double h) {
  const Eigen::Index n = table.size() - 1;
  // reversed[n - m] = table[m], so the history sum is a contiguous dot product
  const Eigen::VectorXd reversed = table.reverse();
  Eigen::VectorXd y(n + 1);
  y[0] = forcing[0];
  const double diag = 1.0 - 0.5 * c * h * table[0];
  if (!(diag > 0.0))
    fail(ErrorKind::NumericalPrecondition, "moments", "volterra",
         "step too coarse: 1 - beta^2 h K^2(h/2) / 2 <= 0");
  for (Eigen::Index i = 1; i <= n; ++i) {
    double history = 0.5 * table[i] * y[0];
    if (i > 1)
      history += numerics::blocked_dot({y.data() + 1, static_cast<std::size_t>(i - 1)},
                                       {reversed.data() + (n - i + 1), static_cast<std::size_t>(i - 1)});
    y[i] = (forcing[i] + c * h * history) / diag;
  }
  return y;
}

Eigen::VectorXd time_grid(Eigen::Index n, double h) {
  Eigen::VectorXd t(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * h;
  return t;
}

}  // namespace

Model::Model(ModelConfig cfg)
    : cfg_(std::move(cfg)),
      kernel_(build_kernel(cfg_)),
      quad_(cfg_.quadrature.value_or(default_quadrature(kernel_))),
      l2_(l2_norm_sq(kernel_, quad_)) {}

const char* to_string(NonStationaryReason r) noexcept {
  switch (r) {
    case NonStationaryReason::KernelNotL2: return "KernelNotL2";
    case NonStationaryReason::MarginAtLeastOne: return "MarginAtLeastOne";
    case NonStationaryReason::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

Stationarity stationarity_margin(const Model& m, double eps) {
  Stationarity s;
  if (m.beta() == 0.0) {
    s.stationary = true;
    return s;
  }
  switch (m.l2().verdict) {
    case IntegralVerdict::Divergent:
      s.reason = NonStationaryReason::KernelNotL2;
      return s;
    case IntegralVerdict::Undetermined:
      s.reason = NonStationaryReason::Undetermined;
      return s;
    case IntegralVerdict::Finite:
      break;
  }
  s.margin = m.beta() * m.beta() * m.l2().value;
  s.near_critical = std::abs(s.margin - 1.0) <= kNearCriticalBand;
  s.stationary = s.margin < 1.0 - eps;
  if (!s.stationary) s.reason = NonStationaryReason::MarginAtLeastOne;
  return s;
}

double limit_second_moment(const Model& m) {
  const Stationarity s = stationarity_margin(m);
  if (!s.stationary)
    fail(ErrorKind::NumericalPrecondition, "moments", "limit_second_moment",
         std::string("stationarity-violated: ") + to_string(*s.reason));
  return m.sigma() * m.sigma() / (1.0 - s.margin);
}

Eigen::Index grid_steps(double T, double h, const char* module, const char* op) {
  if (!(T > 0.0) || !(h > 0.0) || !std::isfinite(T) || !std::isfinite(h))
    fail(ErrorKind::Config, module, op, "horizon and step must be positive");
  const double ratio = T / h;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << "step " << h << " does not divide horizon " << T;
    fail(ErrorKind::Config, module, op, msg.str());
  }
  return static_cast<Eigen::Index>(n);
}

MomentSolution solve_second_moment(const Model& m, double T, double h) {
  const Eigen::Index n = grid_steps(T, h, "moments", "solve_second_moment");
  MomentSolution sol;
  sol.h = h;
  sol.t = time_grid(n, h);
  sol.stationarity = stationarity_margin(m);
  if (sol.stationarity.stationary) sol.limit = limit_second_moment(m);
  const double s2 = m.sigma() * m.sigma();
  if (m.beta() == 0.0) {
    sol.values = Eigen::VectorXd::Constant(n + 1, s2);
    return sol;
  }
  const Eigen::VectorXd k2 = product_table(m.kernel(), h, n, 0.0);
  sol.values = volterra_forward(k2, Eigen::VectorXd::Constant(n + 1, s2), m.beta() * m.beta(), h);
  return sol;
}

GridFunction resolvent(const Model& m, double T, double h) {
  const Eigen::Index n = grid_steps(T, h, "moments", "resolvent");
  GridFunction r;
  r.h = h;
  r.t = time_grid(n, h);
  if (m.beta() == 0.0) {
    r.values = Eigen::VectorXd::Zero(n + 1);
    return r;
  }
  const double b2 = m.beta() * m.beta();
  const Eigen::VectorXd k2 = product_table(m.kernel(), h, n, 0.0);
  Eigen::VectorXd forcing = b2 * k2;
  r.values = volterra_forward(k2, forcing, b2, h);
  return r;
}

Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& values, double h) {
  Eigen::VectorXd out(values.size());
  if (values.size() == 0) return out;
  out[0] = 0.0;
  for (Eigen::Index i = 1; i < values.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
  return out;
}

double covariance_surface(const Model& m, const MomentSolution& sol, double t, double delta) {
  if (!(delta >= 0.0)) fail(ErrorKind::Config, "moments", "covariance_surface", "delta must be >= 0");
  if (t == 0.0) return 0.0;
  const Eigen::Index i = grid_steps(t, sol.h, "moments", "covariance_surface");
  if (i >= sol.values.size())
    fail(ErrorKind::Config, "moments", "covariance_surface", "moment solution does not reach t");
  if (m.beta() == 0.0) return 0.0;
  const Eigen::VectorXd p = product_table(m.kernel(), sol.h, i, delta);
  // trapezoid over s = j h, lag (i - j) h; the lag-0 end uses p[0]
  double acc = 0.5 * (p[i] * sol.values[0] + p[0] * sol.values[i]);
  for (Eigen::Index j = 1; j < i; ++j) acc += p[i - j] * sol.values[j];
  return m.beta() * m.beta() * sol.h * acc;
}

double covariance_surface(const Model& m, double t, double delta, double h) {
  if (t == 0.0) return 0.0;
  return covariance_surface(m, solve_second_moment(m, t, h), t, delta);
}

}  // namespace lmbs
