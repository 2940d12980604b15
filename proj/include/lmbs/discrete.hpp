#pragma once

#include "lmbs/autocov.hpp"
#include "lmbs/moments.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace lmbs {

/// a_n = scale * (n+1)^(-1-alpha)
struct PowerLawSeq {
  double scale = 1.0;
  double alpha = 1.0;
};

/// a_0, ..., a_{N-1}; zero afterwards.
struct FiniteSeq {
  std::vector<double> a;
};

/// a_j = K(j h) - K((j+1) h), so K_n = K((n+1) h); the recursion weight is
/// beta * sqrt(h).
struct FromKernel {
  Kernel kernel;
  double h = 0.01;
};

using SequenceFamily = std::variant<PowerLawSeq, FiniteSeq, FromKernel>;

enum class Noise { StandardNormal, Rademacher };

struct DiscreteModel {
  double sigma = 1.0;
  double beta = 0.0;
  SequenceFamily a_seq = FiniteSeq{};
  Noise noise = Noise::StandardNormal;
};

/// Throws Config when a_n < 0 or a parameter is out of range.
void validate(const DiscreteModel& m);

/// Coefficient multiplying sum K_{n-j} V_j xi_j in the recursion.
double effective_beta(const DiscreteModel& m);

struct TailSum {
  double value = 0.0;
  std::size_t terms = 0;  // explicit terms before the asymptotic tail
};

/// K_n = sum_{j>n} a_j.
TailSum k_seq(const DiscreteModel& m, std::size_t n);

/// K_0 .. K_{count-1}.
Eigen::VectorXd k_table(const DiscreteModel& m, std::size_t count);

struct DiscreteEnsemble {
  Eigen::MatrixXd v;  // paths x steps, column n-1 holds V_n
  Eigen::MatrixXd u;  // paths x steps, column n-1 holds U_n = V_n xi_n
  Eigen::MatrixXd x;  // paths x (steps+1), column n holds X_n, X_0 = 0
};

/// V_1 = sigma, V_{n+1} = sigma + beta_eff sum_{j=1}^{n} K_{n-j} V_j xi_j, where
/// xi_n is draw n-1 of substream (seed, path).
DiscreteEnsemble simulate_discrete(const DiscreteModel& m, long steps, long paths, std::uint64_t seed,
                                   int threads = 1);

struct DiscreteStationarity {
  Stationarity verdict;
  std::size_t terms = 0;  // explicit terms of sum K_j^2
};

DiscreteStationarity discrete_stationarity(const DiscreteModel& m, double eps = kMarginEpsilon);

/// Long iff sum_j j a_j diverges.
MemoryClass discrete_memory(const DiscreteModel& m);

}  // namespace lmbs
