#pragma once

#include "lmbs/moments.hpp"

#include <Eigen/Core>

#include <vector>

namespace lmbs {

enum class MemoryClass { Short, Long, Undetermined };
const char* to_string(MemoryClass c) noexcept;

/// beta^2 sigma^2 / (1 - beta^2 int K^2). Requires a stationary model.
double c_factor(const Model& m);

/// gamma(delta) = c_factor * int_0^inf K(s) K(s + delta) ds.
double gamma(const Model& m, double delta);
double gamma(const Model& m, double delta, const QuadratureOptions& q);

struct AutocovCurve {
  Eigen::VectorXd deltas;
  Eigen::VectorXd values;
  double c_factor = 0.0;
  MemoryClass memory_class = MemoryClass::Undetermined;
};

AutocovCurve autocov_curve(const Model& m, const std::vector<double>& deltas);

/// Short iff kappa has a finite first moment; Long iff it is infinite and
/// kappa is sign-definite; Undetermined otherwise. Requires stationarity.
MemoryClass classify_memory(const Model& m);

enum class Regime { LongMemory, ShortMemory, Critical };
const char* to_string(Regime r) noexcept;

struct Asymptote {
  double value = 0.0;
  Regime regime = Regime::LongMemory;
};

/// Gamma(2a-1) Gamma(1-a) / (Gamma(a+1) a), the long-memory rate constant.
double long_memory_constant(double alpha);

/// Leading-order behaviour of gamma(delta) from the tail metadata of kappa:
///   1/2 < a < 1:  c_factor * C(a) * delta^(1-2a) * L(delta)^2
///   a > 1:        c_factor * (int K) * L(delta) * delta^(-a) / a
///   a = 1/2:      c_factor / a^2 * int_delta^inf L(s)^2 / s ds
/// with L(t) = scale * log(t)^(-p).
Asymptote asymptotic_gamma(const Model& m, double delta);

struct RateRow {
  double delta = 0.0;
  double gamma = 0.0;
  double asymptote = 0.0;
  double ratio = 0.0;
};

struct RateReport {
  std::vector<RateRow> rows;
  Regime regime = Regime::LongMemory;
  bool converging = false;  // |ratio - 1| shrinks monotonically over the last rows
};

RateReport verify_rate(const Model& m, const std::vector<double>& deltas);
RateReport verify_rate(const Model& m, const std::vector<double>& deltas, const QuadratureOptions& q);

/// sum_{n=0}^{N} gamma(n).
double gamma_partial_sum(const Model& m, long N);

/// int_from^inf gamma(delta) d delta (log-variable Gauss-Legendre with the
/// asymptote as remainder); finite only in the short-memory regime.
double gamma_tail_integral(const Model& m, double from);

}  // namespace lmbs
