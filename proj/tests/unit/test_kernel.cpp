#include "lmbs/error.hpp"
#include "lmbs/kernel.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace lmbs;

namespace {

Kernel power_kernel(double alpha, double c = 1.0) {
  const SignedMeasure kappa(Support::half_line(), {}, PowerLaw{c, alpha});
  return Kernel(balancing_point_mass(kappa), kappa);
}

// K = 1 on (0, 2], 0 afterwards
Kernel step_kernel() {
  return Kernel(SignedMeasure(Support::delay(0.0), {{0.0, 1.0}}, ZeroDensity{}),
                SignedMeasure(Support::half_line(), {{2.0, 1.0}}, ZeroDensity{}));
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

}  // namespace

TEST(KernelEval, PaperExampleValue) {
  EXPECT_NEAR(power_kernel(0.75)(1.0), (1.0 / 0.75) * std::pow(2.0, -0.75), 1e-15);
  EXPECT_NEAR(power_kernel(0.75)(1.0), 0.792805, 5e-6);
}

TEST(KernelEval, StepKernel) {
  const Kernel k = step_kernel();
  EXPECT_DOUBLE_EQ(k(1.0), 1.0);
  EXPECT_DOUBLE_EQ(k(3.0), 0.0);
  EXPECT_DOUBLE_EQ(k(2.0), 1.0);  // closed condition rho >= x
  EXPECT_DOUBLE_EQ(k.eval(2.0, Side::Right), 0.0);
  EXPECT_DOUBLE_EQ(k.eval(2.0, Side::Left), 1.0);
  EXPECT_EQ(k.breakpoints(), std::vector<double>{2.0});
}

TEST(KernelEval, ZeroKernel) {
  const Kernel k(SignedMeasure::zero(Support::delay(0.0)), SignedMeasure(Support::half_line(), {{0.0, 0.0}}, ZeroDensity{}));
  for (double x : {1e-3, 1.0, 1e3}) EXPECT_EQ(k(x), 0.0);
}

TEST(KernelEval, RejectsNonPositiveArguments) {
  const Kernel k = power_kernel(0.75);
  try {
    (void)k(0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NumericalPrecondition);
    EXPECT_EQ(e.module(), "kernel");
  }
  EXPECT_THROW((void)k(-1.0), Error);
  EXPECT_NEAR(k.eval(0.0, Side::Right), 1.0 / 0.75, 1e-15);
}

TEST(KernelEval, UnbalancedRejected) {
  const SignedMeasure kappa(Support::half_line(), {}, PowerLaw{1.0, 0.75});
  EXPECT_THROW(Kernel(SignedMeasure(Support::delay(0.0), {{0.0, 1.0}}, ZeroDensity{}), kappa), Error);
}

TEST(KernelEval, DelayKernelWithDensity) {
  // lambda: uniform density 1 on [-1, 0]; kappa: exponential with mass 1
  const Kernel k(SignedMeasure(Support::delay(1.0), {}, Tabulated{{0.0, 1.0}, {1.0, 1.0}, std::nullopt}),
                 SignedMeasure(Support::half_line(), {}, Exponential{1.0, 1.0}));
  for (double x : {0.1, 0.5, 0.9}) EXPECT_NEAR(k(x), -(1.0 - x) + std::exp(-x), 1e-12);
  for (double x : {1.0, 2.0, 5.0}) EXPECT_NEAR(k(x), std::exp(-x), 1e-14);
}

TEST(KernelEval, ClosedFormConsistency) {
  const Kernel k = power_kernel(0.75);
  ASSERT_TRUE(k.closed_form().has_value());
  for (double x : log_grid(1e-3, 1e4, 200)) EXPECT_NEAR(k(x), (*k.closed_form())(x), 1e-10);
  for (double x : log_grid(1e-3, 1e4, 200)) EXPECT_NEAR(k(x), oracle::power_kernel(1.0, 0.75, x), 1e-10);
  EXPECT_FALSE(step_kernel().closed_form().has_value());
}

TEST(KernelEval, DecaysToZero) {
  for (double alpha : {0.6, 0.75, 1.5})
    EXPECT_LT(power_kernel(alpha)(1e6), 1e-2);
  const Kernel e(balancing_point_mass(SignedMeasure(Support::half_line(), {}, Exponential{1.0, 1.0})),
                 SignedMeasure(Support::half_line(), {}, Exponential{1.0, 1.0}));
  EXPECT_LT(e(1e6), 1e-2);
}

TEST(KernelEval, NonIncreasingForNonnegativeKappa) {
  const Kernel k(SignedMeasure(Support::delay(1.0), {{0.5, 2.0}}, ZeroDensity{}),
                 SignedMeasure(Support::half_line(), {{1.5, 1.0}, {3.0, 0.5}}, Exponential{0.5, 1.0}));
  std::vector<double> xs;
  for (double x = 1.0; x < 50.0; x += 0.137) xs.push_back(x);
  for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_LE(k(xs[i]), k(xs[i - 1]) + 1e-15);
}

TEST(KernelEval, KaramataLimit) {
  for (double alpha : {0.6, 0.75, 1.5}) {
    const Kernel k = power_kernel(alpha, 2.0);
    EXPECT_NEAR(k(1e4) * std::pow(1e4, alpha) * alpha / 2.0, 1.0, 0.01) << alpha;
  }
  const SignedMeasure pll(Support::half_line(), {}, PowerLogLaw{1.0, 0.75, 1.0});
  const Kernel k(balancing_point_mass(pll), pll);
  // K(x) ~ L(x) x^(-a) / a with L(x) = log(x)^(-1); the correction is O(1 / (a log x))
  const double x = 1e8;
  const double lead = k(x) * std::pow(x, 0.75) * 0.75 * std::log(x);
  EXPECT_NEAR(lead, 1.0 - 1.0 / (0.75 * std::log(x)), 0.02);
}

TEST(KernelIntegrals, L2PowerLaw) {
  const Kernel k = power_kernel(0.75);
  const IntegralResult r = l2_norm_sq(k, default_quadrature(k));
  ASSERT_EQ(r.verdict, IntegralVerdict::Finite);
  EXPECT_NEAR(r.value, 32.0 / 9.0, 1e-4);
  EXPECT_NEAR(l2_norm_sq(k, {100.0, 1e-3}).value, 32.0 / 9.0, 1e-6);
  EXPECT_EQ(l2_norm_sq(power_kernel(0.4), default_quadrature(power_kernel(0.4))).verdict, IntegralVerdict::Divergent);
  EXPECT_NEAR(l2_norm_sq(step_kernel(), default_quadrature(step_kernel())).value, 2.0, 1e-12);
}

TEST(KernelIntegrals, L1) {
  const Kernel k = power_kernel(1.5);
  const IntegralResult r = l1_norm(k, {100.0, 1e-3});
  ASSERT_EQ(r.verdict, IntegralVerdict::Finite);
  EXPECT_NEAR(r.value, 4.0 / 3.0, 1e-6);
  EXPECT_EQ(l1_norm(power_kernel(0.75), {100.0, 0.01}).verdict, IntegralVerdict::Divergent);
  const Kernel zero(SignedMeasure::zero(Support::delay(0.0)), SignedMeasure::zero());
  EXPECT_EQ(l1_norm(zero, {100.0, 0.01}).value, 0.0);
  EXPECT_NEAR(integral(step_kernel(), {100.0, 0.01}).value, 2.0, 1e-12);
}

TEST(KernelIntegrals, UndeterminedForUnknownTail) {
  const SignedMeasure tab(Support::half_line(), {}, Tabulated{{0.0, 1.0, 2.0}, {1.0, 0.5, 0.0}, std::nullopt});
  const Kernel k(balancing_point_mass(tab), tab, 1e-6);
  EXPECT_EQ(l2_norm_sq(k, default_quadrature(k)).verdict, IntegralVerdict::Undetermined);
  EXPECT_EQ(l1_norm(k, default_quadrature(k)).verdict, IntegralVerdict::Undetermined);
  try {
    (void)overlap(k, 1.0, default_quadrature(k));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NumericalPrecondition);
  }
}

TEST(KernelIntegrals, CriticalPowerLogLaw) {
  auto make = [](double p) {
    const SignedMeasure k(Support::half_line(), {}, PowerLogLaw{1.0, 0.5, p});
    return Kernel(balancing_point_mass(k), k);
  };
  EXPECT_EQ(integrability(make(1.0), 2), IntegralVerdict::Finite);
  EXPECT_EQ(integrability(make(0.5), 2), IntegralVerdict::Divergent);
  EXPECT_EQ(integrability(make(0.25), 2), IntegralVerdict::Divergent);
}

TEST(Overlap, StepKernel) {
  const Kernel k = step_kernel();
  const QuadratureOptions q = default_quadrature(k);
  EXPECT_NEAR(overlap(k, 1.0, q), 1.0, 1e-12);
  EXPECT_NEAR(overlap(k, 0.0, q), l2_norm_sq(k, q).value, 1e-15);
  EXPECT_NEAR(overlap(k, 0.5, q), 1.5, 1e-12);
  EXPECT_NEAR(overlap(k, 2.5, q), 0.0, 1e-12);
}

TEST(Overlap, PowerLawAgainstOracle) {
  const Kernel k = power_kernel(0.75);
  for (double d : {1.0, 10.0, 1e3, 1e4}) {
    const double ref = oracle::power_overlap(1.0, 0.75, d);
    EXPECT_NEAR(overlap(k, d, default_quadrature(k)) / ref, 1.0, 1e-3) << d;
  }
  EXPECT_NEAR(overlap(k, 10.0, {100.0, 1e-3}) / oracle::power_overlap(1.0, 0.75, 10.0), 1.0, 1e-6);
}

TEST(Overlap, CauchySchwarz) {
  for (const Kernel& k : {power_kernel(0.75), power_kernel(1.5), step_kernel()}) {
    const QuadratureOptions q = default_quadrature(k);
    const double l2 = l2_norm_sq(k, q).value;
    for (double d : {0.0, 0.3, 1.0, 2.0, 7.5, 100.0}) EXPECT_LE(overlap(k, d, q), l2 * (1.0 + 1e-12));
  }
}

TEST(Overlap, AtomsOffGridStayAccurate) {
  // K = 1 on (0, 0.333], 0.5 on (0.333, 1.777], 0 afterwards
  const Kernel k(SignedMeasure(Support::delay(0.0), {{0.0, 1.0}}, ZeroDensity{}),
                 SignedMeasure(Support::half_line(), {{0.333, 0.5}, {1.777, 0.5}}, ZeroDensity{}));
  const QuadratureOptions q = default_quadrature(k);
  EXPECT_NEAR(l2_norm_sq(k, q).value, 0.333 + 0.25 * (1.777 - 0.333), 1e-12);
  // overlap at delta = 0.2: s in (0, 0.133]: 1*1; (0.133, 0.333]: 1*0.5; (0.333, 1.577]: 0.25
  EXPECT_NEAR(overlap(k, 0.2, q), 0.133 + 0.5 * 0.2 + 0.25 * (1.577 - 0.333), 1e-12);
}

TEST(Quadrature, Defaults) {
  const QuadratureOptions q = default_quadrature(step_kernel());
  EXPECT_EQ(q.step, 0.01);
  EXPECT_EQ(q.horizon, 102.0);
  const Kernel d(SignedMeasure(Support::delay(5.0), {{5.0, 1.0}}, ZeroDensity{}),
                 SignedMeasure(Support::half_line(), {}, Exponential{1.0, 1.0}));
  EXPECT_EQ(default_quadrature(d).horizon, 250.0);
}

TEST(KernelGrid, MatchesPointwise) {
  const Kernel k = power_kernel(0.75);
  const Eigen::VectorXd g = kernel_grid(k, 0.01, 100);
  for (Eigen::Index m = 0; m < 100; ++m) EXPECT_EQ(g[m], k(static_cast<double>(m + 1) * 0.01));
}
