#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace lmbs::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
Counter philox4x32_10(Counter ctr, Key key) noexcept;

/// Maps 64 random bits to the open interval (0, 1) with 52-bit resolution;
/// the extreme outputs are 2^-53 and 1 - 2^-53.
double uniform_from_bits(std::uint64_t bits) noexcept;

/// Standard normal quantile: rational approximation refined by one Halley step.
double inverse_normal_cdf(double u);

/// Substream of uniforms/normals addressed by (seed, stream, index). Draw
/// `index` is a pure function of the triple, so any partition of work over
/// threads sees the same numbers.
class Substream {
 public:
  Substream(std::uint64_t seed, std::uint64_t stream) noexcept;

  double uniform(std::uint64_t index) const noexcept;
  double normal(std::uint64_t index) const;
  /// +1 or -1 with equal probability.
  double rademacher(std::uint64_t index) const noexcept;

  /// out[i] = normal(i).
  void fill_normal(std::span<double> out) const;
  /// out[i] = rademacher(i).
  void fill_rademacher(std::span<double> out) const noexcept;

 private:
  std::array<std::uint64_t, 2> block(std::uint64_t b) const noexcept;

  Key key_;
  std::uint64_t stream_;
};

}  // namespace lmbs::rng
