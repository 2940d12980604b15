#include "lmbs/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace lmbs::rng;

TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Uniform, OpenInterval) {
  EXPECT_EQ(uniform_from_bits(0), 0x1.0p-53);
  EXPECT_EQ(uniform_from_bits(~std::uint64_t{0}), 1.0 - 0x1.0p-53);
  EXPECT_EQ(uniform_from_bits(std::uint64_t{1} << 63), 0.5 + 0x1.0p-53);
  EXPECT_NO_THROW((void)inverse_normal_cdf(uniform_from_bits(~std::uint64_t{0})));
}

TEST(InverseNormal, AgreesWithErfc) {
  for (double u : {1e-300, 1e-12, 1e-6, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575, 0.999, 1.0 - 1e-12}) {
    const double x = inverse_normal_cdf(u);
    const double back = 0.5 * std::erfc(-x / std::numbers::sqrt2);
    EXPECT_NEAR(back / u, 1.0, 1e-12) << u;
  }
  EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
  EXPECT_NEAR(inverse_normal_cdf(0.975), 1.959963984540054, 1e-13);
  EXPECT_THROW((void)inverse_normal_cdf(0.0), std::domain_error);
  EXPECT_THROW((void)inverse_normal_cdf(1.0), std::domain_error);
}

TEST(InverseNormal, Symmetric) {
  // 1 - u is exact for these
  for (double u : {0x1.0p-27, 0.015625, 0.25, 0.4375})
    EXPECT_NEAR(inverse_normal_cdf(u), -inverse_normal_cdf(1.0 - u), 1e-13);
}

TEST(Substream, PureFunctionOfAddress) {
  const Substream a(42, 7);
  const Substream b(42, 7);
  for (std::uint64_t i : {0u, 1u, 2u, 1000u}) {
    EXPECT_EQ(a.uniform(i), b.uniform(i));
    EXPECT_EQ(a.normal(i), b.normal(i));
  }
  EXPECT_NE(Substream(42, 7).uniform(0), Substream(42, 8).uniform(0));
  EXPECT_NE(Substream(42, 7).uniform(0), Substream(43, 7).uniform(0));
  EXPECT_NE(a.uniform(0), a.uniform(1));
}

TEST(Substream, FillMatchesPointwise) {
  const Substream s(3, 11);
  std::vector<double> z(9), r(9);
  s.fill_normal(z);
  s.fill_rademacher(r);
  for (std::size_t i = 0; i < z.size(); ++i) {
    EXPECT_EQ(z[i], s.normal(i));
    EXPECT_EQ(r[i], s.rademacher(i));
    EXPECT_EQ(std::abs(r[i]), 1.0);
  }
}

TEST(Substream, SampleMoments) {
  const Substream s(2024, 0);
  const int n = 200000;
  double m1 = 0, m2 = 0, r1 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal(static_cast<std::uint64_t>(i));
    m1 += z;
    m2 += z * z;
    r1 += s.rademacher(static_cast<std::uint64_t>(i));
  }
  // 5 standard errors
  EXPECT_NEAR(m1 / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(m2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(r1 / n, 0.0, 5.0 / std::sqrt(n));
}
