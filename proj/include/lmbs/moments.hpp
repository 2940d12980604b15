#pragma once

#include "lmbs/kernel.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>

namespace lmbs {

struct ModelConfig {
  double sigma = 1.0;
  double beta = 0.0;
  double mu = 0.0;
  SignedMeasure lambda = SignedMeasure::zero(Support::delay(0.0));
  SignedMeasure kappa = SignedMeasure::zero();
  std::optional<double> balance_tol;          // measures default when empty
  std::optional<QuadratureOptions> quadrature;  // default_quadrature when empty
};

/// Validated model: parameters, kernel and the kernel's squared norm.
class Model {
 public:
  explicit Model(ModelConfig cfg);

  const ModelConfig& config() const noexcept { return cfg_; }
  const Kernel& kernel() const noexcept { return kernel_; }
  double sigma() const noexcept { return cfg_.sigma; }
  double beta() const noexcept { return cfg_.beta; }
  double mu() const noexcept { return cfg_.mu; }
  double tau() const noexcept { return kernel_.tau(); }
  const QuadratureOptions& quadrature() const noexcept { return quad_; }
  const IntegralResult& l2() const noexcept { return l2_; }

 private:
  ModelConfig cfg_;
  Kernel kernel_;
  QuadratureOptions quad_;
  IntegralResult l2_;
};

enum class NonStationaryReason { KernelNotL2, MarginAtLeastOne, Undetermined };

const char* to_string(NonStationaryReason r) noexcept;

struct Stationarity {
  bool stationary = false;
  double margin = 0.0;  // beta^2 int K^2 whenever that integral is finite
  std::optional<NonStationaryReason> reason;
  bool near_critical = false;  // margin within 1e-6 of 1
};

inline constexpr double kMarginEpsilon = 1e-9;
inline constexpr double kNearCriticalBand = 1e-6;

Stationarity stationarity_margin(const Model& m, double eps = kMarginEpsilon);

/// sigma^2 / (1 - margin). Throws NumericalPrecondition when not stationary.
double limit_second_moment(const Model& m);

struct MomentSolution {
  double h = 0.0;
  Eigen::VectorXd t;
  Eigen::VectorXd values;  // E[V^2(t_i)]
  Stationarity stationarity;
  std::optional<double> limit;
};

/// Trapezoid discretisation of E[V^2(t)] = sigma^2 + beta^2 int_0^t K^2(t-s) E[V^2(s)] ds
/// on t_i = i h, i = 0..T/h, by forward substitution.
MomentSolution solve_second_moment(const Model& m, double T, double h);

struct GridFunction {
  double h = 0.0;
  Eigen::VectorXd t;
  Eigen::VectorXd values;
};

/// r = beta^2 K^2 + beta^2 K^2 * r on the same grid and with the same weights.
GridFunction resolvent(const Model& m, double T, double h);

/// Running trapezoid integral: out[i] = int_0^{t_i} f.
Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& values, double h);

/// Cov(V(t), V(t+delta)) = beta^2 int_0^t K(t-s) K(t-s+delta) E[V^2(s)] ds.
double covariance_surface(const Model& m, double t, double delta, double h);
/// Same, reusing a solution that reaches t.
double covariance_surface(const Model& m, const MomentSolution& sol, double t, double delta);

/// Number of grid steps n with n h = T; throws Config otherwise.
Eigen::Index grid_steps(double T, double h, const char* module, const char* op);

}  // namespace lmbs
