#pragma once

#include "lmbs/measures.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace lmbs {

/// K(x) = c / (alpha (1+x)^alpha): lambda is a single atom at 0 balancing a
/// pure power-law kappa.
struct PowerLawClosedForm {
  double scale = 1.0;
  double alpha = 1.0;
  double operator()(double x) const;
};

/// Which value to take at a jump of K.
enum class Side {
  AsWritten,  // the defining formula literally (closed conditions)
  Left,       // lim_{y -> x-}
  Right,      // lim_{y -> x+}; the only side allowed at x = 0
};

/// Memory kernel
///   K(x) = -lambda([-tau, -(x ^ tau)]) + kappa([x, inf)),
/// i.e. for x < tau
///   -sum_{tau_j >= x} lambda_j - int_x^tau l + sum_{rho_j >= x} kappa_j + int_x^inf k
/// and for x >= tau only the kappa terms. Immutable; construction checks the
/// weight balance lambda[-tau, 0] = kappa[0, inf).
class Kernel {
 public:
  Kernel(SignedMeasure lambda, SignedMeasure kappa);
  Kernel(SignedMeasure lambda, SignedMeasure kappa, double balance_tol);

  /// K(x) for x > 0. Throws NumericalPrecondition for x <= 0.
  double operator()(double x) const;
  double eval(double x, Side side) const;

  double tau() const noexcept { return lambda_.support().tau; }
  const SignedMeasure& lambda() const noexcept { return lambda_; }
  const SignedMeasure& kappa() const noexcept { return kappa_; }

  /// Atom locations of both measures and tau, sorted, all > 0.
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  /// From this point on K coincides with int_x^inf k.
  double smooth_from() const noexcept { return smooth_from_; }

  const std::optional<PowerLawClosedForm>& closed_form() const noexcept { return closed_form_; }

  /// Tail metadata of the kappa density.
  TailInfo tail() const { return tail_info(kappa_.density()); }

  /// int_x^inf k for x >= smooth_from().
  double tail_value(double x) const { return density_tail(kappa_.density(), x); }

 private:
  SignedMeasure lambda_;
  SignedMeasure kappa_;
  std::vector<double> breakpoints_;
  double smooth_from_ = 0.0;
  std::optional<PowerLawClosedForm> closed_form_;
};

/// Elementwise K over an array of strictly positive points.
Eigen::ArrayXd eval(const Kernel& k, const Eigen::Ref<const Eigen::ArrayXd>& x);

/// K(m h), m = 1..n.
Eigen::VectorXd kernel_grid(const Kernel& k, double h, Eigen::Index n);

struct QuadratureOptions {
  double horizon = 100.0;
  double step = 0.01;
};

/// horizon = max(100, 50 tau, last atom + 100, table end + 100), step = 0.01.
QuadratureOptions default_quadrature(const Kernel& k);

enum class IntegralVerdict { Finite, Divergent, Undetermined };

const char* to_string(IntegralVerdict v) noexcept;

struct IntegralResult {
  IntegralVerdict verdict = IntegralVerdict::Undetermined;
  double value = 0.0;  // Finite only; includes the tail beyond the horizon
  double tail = 0.0;   // contribution beyond the horizon
};

/// Verdict on int_0^inf |K|^power from tail metadata alone.
IntegralVerdict integrability(const Kernel& k, int power);

/// int_0^inf K^2.
IntegralResult l2_norm_sq(const Kernel& k, const QuadratureOptions& q);
/// int_0^inf |K|.
IntegralResult l1_norm(const Kernel& k, const QuadratureOptions& q);
/// int_0^inf K (signed).
IntegralResult integral(const Kernel& k, const QuadratureOptions& q);

/// int_from^inf K(s) K(s + delta) ds for from >= smooth_from(), where K is
/// the bare density tail. Throws NumericalPrecondition otherwise or when K
/// is not known to be square integrable.
double tail_product(const Kernel& k, double from, double delta);

/// int_0^inf K(s) K(s + delta) ds. Throws NumericalPrecondition when K is
/// not (known to be) square integrable.
double overlap(const Kernel& k, double delta, const QuadratureOptions& q);

}  // namespace lmbs
