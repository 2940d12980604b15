#pragma once

#include "lmbs/moments.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace lmbs {

struct SimConfig {
  double T = 1.0;
  double h = 0.01;
  long paths = 1;
  std::uint64_t seed = 0;
  double s0 = 1.0;
  long record_every = 1;  // keep every k-th grid point; T/h must be a multiple
  int threads = 1;        // speed only; results never depend on it
};

/// Recorded paths on t_r = r * record_every * h. Rows are paths.
/// db(p, r) is the Brownian increment over [t_r, t_r + h] (the first
/// increment of each recorded interval); the last column is unused (zero).
struct PathEnsemble {
  double h = 0.0;
  long record_every = 1;
  double mu = 0.0;
  Eigen::VectorXd t;
  Eigen::MatrixXd v;
  Eigen::MatrixXd x;
  Eigen::MatrixXd s;
  Eigen::MatrixXd db;

  long paths() const noexcept { return static_cast<long>(v.rows()); }
  /// Column of time t; throws Config when t is not a recorded time.
  Eigen::Index column(double time, const char* op) const;
};

/// Euler scheme
///   V_i = sigma + beta sum_{j<i} K((i-j) h) V_j dB_j,
///   X_{i+1} = X_i + V_i dB_i,
///   S_{i+1} = S_i exp((mu - V_i^2 / 2) h + V_i dB_i),
/// with dB_j = sqrt(h) z_j and z_j the j-th normal of substream (seed, path).
PathEnsemble simulate(const Model& m, const SimConfig& sim);

struct MomentEstimate {
  double mean = 0.0;
  double var = 0.0;
  double se_mean = 0.0;
  double se_var = 0.0;
  bool se_defined = true;  // false for a single path
};

MomentEstimate empirical_moments(const PathEnsemble& e, double t);

struct CovEstimate {
  double cov = 0.0;
  double se = 0.0;
  bool se_defined = true;
};

CovEstimate empirical_autocov(const PathEnsemble& e, double t, double delta);

struct CorrEstimate {
  double corr = 0.0;
  double se = 0.0;
  bool degenerate = false;  // a return series is identically zero
};

/// Correlation of R(t+d) - R(t) and R(t+D+d) - R(t+D), R = X + mu t, D > d >= 0.
CorrEstimate returns_efficiency(const PathEnsemble& e, double delta, double Delta, double t);

/// Cross-path mean and standard error of any recorded column.
MomentEstimate column_moments(const Eigen::Ref<const Eigen::VectorXd>& column);

}  // namespace lmbs
