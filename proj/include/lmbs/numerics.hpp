#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <span>

namespace lmbs::numerics {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Golub-Welsch construction (eigen-decomposition of the Jacobi matrix).
GaussRule make_gauss_legendre(int order);

/// Cached 8-point rule used by all panel quadratures in the library.
const GaussRule& gauss_legendre8();

/// Integrate f over [a, b] with one application of `rule`.
template <class F>
double gauss_panel(const F& f, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

/// Dot product with a fixed, blocked accumulation order (eight interleaved
/// partial sums, combined pairwise). The result depends only on the inputs,
/// never on alignment or on which thread calls it.
double blocked_dot(std::span<const double> a, std::span<const double> b) noexcept;

/// Linear Volterra recursion shared by the continuous Euler scheme and the
/// discrete recursion:
///   v[i] = sigma + scale * sum_{j<i} weight(i-j) * v[j] * noise[j],
/// where weight(m) = reversed[reversed.size() - m]. `work` receives
/// v[j] * noise[j]; it must be as long as `v`. Needs reversed.size() >= v.size() - 1
/// and noise.size() >= v.size() - 1.
void volterra_path(double sigma, double scale, std::span<const double> reversed,
                   std::span<const double> noise, std::span<double> v, std::span<double> work);

/// Hurwitz zeta function sum_{k>=0} (q+k)^{-s} for s > 1, q > 0, by direct
/// summation followed by an Euler-Maclaurin tail.
double hurwitz_zeta(double s, double q);

/// Number of explicit terms hurwitz_zeta sums before switching to the
/// Euler-Maclaurin tail; reported alongside tail sums.
std::size_t hurwitz_zeta_terms(double q) noexcept;

/// Largest u = log(1+s) visited by the log-variable tail quadratures; keeps
/// s = expm1(u) finite in double precision.
inline constexpr double kLogTailLimit = 690.0;

/// Leading-order remainder int_U^inf A exp(-rate u) u^(-power) du used past
/// kLogTailLimit. rate must be >= 0; with rate == 0 the power must exceed 1.
double log_tail_remainder(double amplitude, double rate, double power, double upper);

/// int_{u0}^inf f(u) du for an integrand with asymptotics
/// f(u) ~ amplitude * exp(-rate u) * u^(-power). Composite Gauss-Legendre on
/// panels of width 1/2 up to kLogTailLimit, then the analytic remainder.
template <class F>
double log_tail_integral(const F& f, double u0, double rate, double power,
                         double amplitude) {
  const GaussRule& rule = gauss_legendre8();
  constexpr double width = 0.5;
  double sum = 0.0;
  double u = u0;
  int quiet_panels = 0;
  while (u < kLogTailLimit) {
    const double next = u + width < kLogTailLimit ? u + width : kLogTailLimit;
    const double panel = gauss_panel(f, u, next, rule);
    sum += panel;
    u = next;
    if (rate > 0.0 && u > u0 + 10.0) {
      quiet_panels = std::abs(panel) <= 1e-18 * std::abs(sum) ? quiet_panels + 1 : 0;
      if (quiet_panels >= 4) return sum;
    }
  }
  return sum + log_tail_remainder(amplitude, rate, power, kLogTailLimit);
}

}  // namespace lmbs::numerics
