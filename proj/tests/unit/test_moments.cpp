#include "lmbs/error.hpp"
#include "lmbs/moments.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lmbs;

namespace {

ModelConfig power_config(double alpha, double beta, double sigma = 1.0) {
  ModelConfig c;
  c.sigma = sigma;
  c.beta = beta;
  c.kappa = SignedMeasure(Support::half_line(), {}, PowerLaw{1.0, alpha});
  c.lambda = balancing_point_mass(c.kappa);
  return c;
}

double power_l2(double alpha) { return 1.0 / (alpha * alpha * (2.0 * alpha - 1.0)); }

}  // namespace

TEST(Model, RejectsBadParameters) {
  ModelConfig c = power_config(0.75, 0.3);
  c.sigma = 0.0;
  EXPECT_THROW(Model{c}, Error);
  c = power_config(0.75, std::nan(""));
  EXPECT_THROW(Model{c}, Error);
  c = power_config(0.75, 0.3);
  c.lambda = SignedMeasure(Support::half_line(), {{0.0, 1.0 / 0.75}}, ZeroDensity{});
  try {
    Model m(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_EQ(e.module(), "moments");
  }
}

TEST(Stationarity, PaperMargin) {
  const Stationarity s = stationarity_margin(Model(power_config(0.75, 0.3)));
  EXPECT_TRUE(s.stationary);
  EXPECT_NEAR(s.margin, 0.32, 1e-5);
  EXPECT_FALSE(s.reason.has_value());
  EXPECT_FALSE(s.near_critical);
}

TEST(Stationarity, NotSquareIntegrable) {
  const Stationarity s = stationarity_margin(Model(power_config(0.4, 0.3)));
  EXPECT_FALSE(s.stationary);
  ASSERT_TRUE(s.reason.has_value());
  EXPECT_EQ(*s.reason, NonStationaryReason::KernelNotL2);
  EXPECT_THROW((void)limit_second_moment(Model(power_config(0.4, 0.3))), Error);
}

TEST(Stationarity, ZeroBetaIsTriviallyStationary) {
  for (double alpha : {0.4, 0.75}) {
    const Stationarity s = stationarity_margin(Model(power_config(alpha, 0.0)));
    EXPECT_TRUE(s.stationary);
    EXPECT_EQ(s.margin, 0.0);
  }
  EXPECT_EQ(limit_second_moment(Model(power_config(0.75, 0.0, 2.0))), 4.0);
}

TEST(Stationarity, MarginAtLeastOne) {
  const double beta = std::sqrt(1.2 / power_l2(0.75));
  const Stationarity s = stationarity_margin(Model(power_config(0.75, beta)));
  EXPECT_FALSE(s.stationary);
  EXPECT_EQ(*s.reason, NonStationaryReason::MarginAtLeastOne);
  try {
    (void)limit_second_moment(Model(power_config(0.75, beta)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NumericalPrecondition);
    EXPECT_NE(std::string(e.what()).find("stationarity-violated"), std::string::npos);
  }
}

// Stationarity of the power-law family flips where beta^2 crosses alpha^2 (2 alpha - 1).
TEST(Stationarity, ClosedFormThreshold) {
  for (double alpha : {0.6, 0.75, 0.9, 1.5, 3.0}) {
    const double crit = alpha * std::sqrt(2.0 * alpha - 1.0);
    EXPECT_TRUE(stationarity_margin(Model(power_config(alpha, 0.98 * crit))).stationary) << alpha;
    EXPECT_FALSE(stationarity_margin(Model(power_config(alpha, 1.02 * crit))).stationary) << alpha;
    EXPECT_NEAR(stationarity_margin(Model(power_config(alpha, crit))).margin, 1.0, 1e-3) << alpha;
  }
}

TEST(Stationarity, MarginScalesWithBetaSquared) {
  const double m1 = stationarity_margin(Model(power_config(0.75, 0.1))).margin;
  const double m3 = stationarity_margin(Model(power_config(0.75, 0.3))).margin;
  EXPECT_NEAR(m3 / m1, 9.0, 1e-12);
  EXPECT_NEAR(stationarity_margin(Model(power_config(0.75, -0.3))).margin, m3, 0.0);
}

TEST(Limit, PaperValues) {
  EXPECT_NEAR(limit_second_moment(Model(power_config(0.75, 0.3))), 1.470588, 1e-4);
  const double beta = std::sqrt(0.83 / power_l2(0.75));
  EXPECT_NEAR(limit_second_moment(Model(power_config(0.75, beta))), 5.882353, 2e-3);
  EXPECT_NEAR(limit_second_moment(Model(power_config(0.75, 0.3, 2.0))) / 4.0, 1.470588, 1e-4);
}

TEST(Solver, MatchesProductIntegrationOracle) {
  const double h = 0.01;
  const Model m(power_config(0.75, 0.3));
  const MomentSolution sol = solve_second_moment(m, 20.0, h);
  const auto ref = oracle::power_volterra(1.0, 0.09, 1.0, 0.75, h, 2000);
  ASSERT_EQ(sol.values.size(), 2001);
  for (std::size_t i : {1u, 10u, 100u, 1000u, 2000u})
    EXPECT_NEAR(sol.values[static_cast<Eigen::Index>(i)] / ref[i], 1.0, 1e-3) << i;
}

TEST(Solver, ConvergesUnderRefinement) {
  const Model m(power_config(0.75, 0.3));
  const auto ref = oracle::power_volterra(1.0, 0.09, 1.0, 0.75, 0.0025, 4000);
  const double coarse = solve_second_moment(m, 10.0, 0.02).values.tail<1>()[0];
  const double fine = solve_second_moment(m, 10.0, 0.005).values.tail<1>()[0];
  EXPECT_LT(std::abs(fine - ref.back()), std::abs(coarse - ref.back()));
}

TEST(Solver, Invariants) {
  const Model m(power_config(0.75, 0.3));
  const MomentSolution sol = solve_second_moment(m, 100.0, 0.05);
  EXPECT_EQ(sol.values[0], 1.0);
  for (Eigen::Index i = 1; i < sol.values.size(); ++i) {
    EXPECT_GE(sol.values[i], 1.0);
    EXPECT_GE(sol.values[i], sol.values[i - 1]);
    EXPECT_LT(sol.values[i], *sol.limit);
  }
  EXPECT_TRUE(sol.stationarity.stationary);
  EXPECT_DOUBLE_EQ(sol.t[2000], 100.0);
}

TEST(Solver, ZeroBetaConstant) {
  const MomentSolution sol = solve_second_moment(Model(power_config(0.75, 0.0, 1.5)), 5.0, 0.1);
  for (Eigen::Index i = 0; i < sol.values.size(); ++i) EXPECT_EQ(sol.values[i], 2.25);
}

TEST(Solver, StepKernelHasExactSolutionOnFirstWindow) {
  // K = 1 on (0, 2]: f' = b2 f on [0, 2], so f(t) = s2 exp(b2 t) there
  ModelConfig c;
  c.beta = 0.5;
  c.lambda = SignedMeasure(Support::delay(0.0), {{0.0, 1.0}}, ZeroDensity{});
  c.kappa = SignedMeasure(Support::half_line(), {{2.0, 1.0}}, ZeroDensity{});
  const MomentSolution sol = solve_second_moment(Model(c), 2.0, 0.001);
  EXPECT_NEAR(sol.values[1000], std::exp(0.25 * 1.0), 1e-6);
  EXPECT_NEAR(sol.values[1900], std::exp(0.25 * 1.9), 1e-6);
  // at t = 2 the oldest node sits on the jump and takes the mean of both sides
  EXPECT_NEAR(sol.values[2000], std::exp(0.25 * 2.0), 0.25 * 0.001);
}

TEST(Solver, RejectsNonDividingStep) {
  try {
    (void)solve_second_moment(Model(power_config(0.75, 0.3)), 1.0, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_EQ(e.operation(), "solve_second_moment");
  }
}

TEST(Solver, DivergentKernelGrowsAtLeastLikeForcing) {
  const double alpha = 0.4;
  const Model m(power_config(alpha, 0.3));
  const MomentSolution sol = solve_second_moment(m, 200.0, 0.05);
  EXPECT_FALSE(sol.limit.has_value());
  for (double t : {10.0, 50.0, 100.0, 200.0}) {
    const double k2 = (std::pow(1.0 + t, 1.0 - 2.0 * alpha) - 1.0) / ((1.0 - 2.0 * alpha) * alpha * alpha);
    EXPECT_GE(sol.values[static_cast<Eigen::Index>(t / 0.05 + 0.5)], 1.0 + 0.09 * k2) << t;
  }
  for (Eigen::Index i = 1; i < sol.values.size(); ++i) EXPECT_GT(sol.values[i], sol.values[i - 1]);
}

TEST(Resolvent, NonnegativeAndReproducesSolution) {
  const Model m(power_config(0.75, 0.3));
  const double h = 0.01;
  const GridFunction r = resolvent(m, 50.0, h);
  const MomentSolution sol = solve_second_moment(m, 50.0, h);
  for (Eigen::Index i = 0; i < r.values.size(); ++i) EXPECT_GE(r.values[i], 0.0);
  const Eigen::VectorXd integ = cumulative_trapezoid(r.values, h);
  for (Eigen::Index i : {100, 1000, 5000})
    EXPECT_NEAR(sol.values[i] / (1.0 + integ[i]), 1.0, 5e-3) << i;
}

TEST(Resolvent, ZeroBeta) {
  const GridFunction r = resolvent(Model(power_config(0.75, 0.0)), 1.0, 0.1);
  EXPECT_EQ(r.values.norm(), 0.0);
}

TEST(CumulativeTrapezoid, Linear) {
  Eigen::VectorXd v(5);
  v << 0, 1, 2, 3, 4;
  const Eigen::VectorXd c = cumulative_trapezoid(v, 0.5);
  EXPECT_DOUBLE_EQ(c[4], 0.5 * 0.5 * 16.0);
  EXPECT_EQ(c[0], 0.0);
}

TEST(CovarianceSurface, BoundaryCases) {
  const Model m(power_config(0.75, 0.3));
  EXPECT_EQ(covariance_surface(m, 0.0, 1.0, 0.05), 0.0);
  EXPECT_EQ(covariance_surface(Model(power_config(0.75, 0.0)), 5.0, 1.0, 0.05), 0.0);
  EXPECT_THROW((void)covariance_surface(m, 5.0, -1.0, 0.05), Error);
}

TEST(CovarianceSurface, DiagonalIsExcessSecondMoment) {
  const Model m(power_config(0.75, 0.3));
  const MomentSolution sol = solve_second_moment(m, 30.0, 0.05);
  for (double t : {1.0, 10.0, 30.0}) {
    const auto i = static_cast<Eigen::Index>(t / 0.05 + 0.5);
    EXPECT_NEAR(covariance_surface(m, sol, t, 0.0), sol.values[i] - 1.0, 1e-12) << t;
  }
}

TEST(CovarianceSurface, DecreasesInLagAndBoundedByDiagonal) {
  const Model m(power_config(0.75, 0.3));
  const MomentSolution sol = solve_second_moment(m, 40.0, 0.05);
  double prev = covariance_surface(m, sol, 40.0, 0.0);
  for (double d : {0.5, 1.0, 5.0, 20.0, 100.0}) {
    const double c = covariance_surface(m, sol, 40.0, d);
    EXPECT_GT(c, 0.0);
    EXPECT_LT(c, prev);
    prev = c;
  }
}

TEST(GridSteps, Validation) {
  EXPECT_EQ(grid_steps(50.0, 0.01, "m", "o"), 5000);
  EXPECT_THROW((void)grid_steps(1.0, 0.0, "m", "o"), Error);
  EXPECT_THROW((void)grid_steps(-1.0, 0.1, "m", "o"), Error);
  EXPECT_THROW((void)grid_steps(0.01, 0.1, "m", "o"), Error);
}

// For a non-square-integrable kernel the solution grows like exp(c t), where
// c solves beta^2 int_0^inf K^2(s) exp(-c s) ds = 1.
TEST(Solver, DivergentGrowthRateMatchesCharacteristicRoot) {
  const double alpha = 0.4, b2 = 0.09;
  auto laplace = [&](double c) {
    // Simpson in u = log(1+s) on [0, log(1+400)]
    const int n = 200000;
    const double U = std::log1p(400.0), du = U / n;
    auto f = [&](double u) {
      const double s = std::expm1(u);
      return std::pow(1.0 + s, -2.0 * alpha) / (alpha * alpha) * std::exp(-c * s) * (1.0 + s);
    };
    double acc = f(0.0) + f(U);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * du);
    return b2 * acc * du / 3.0;
  };
  double lo = 0.01, hi = 5.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (laplace(mid) > 1.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  const MomentSolution sol = solve_second_moment(Model(power_config(alpha, 0.3)), 200.0, 0.025);
  const double rate = (std::log(sol.values[8000]) - std::log(sol.values[6000])) / 50.0;
  EXPECT_NEAR(rate / root, 1.0, 1e-3);
}
