// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random streams for reproducible, parallel Monte Carlo.
#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace mimosep {

/// Philox4x64-10 block function (Salmon, Moraes, Dror, Shaw; SC'11).
///
/// Round multipliers 0xD2E7470EE14C6C93 / 0xCA5A826395121157 and Weyl key
/// increments 0x9E3779B97F4A7C15 / 0xBB67AE8584CAA73B, as in Random123.
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

PhiloxCounter philox4x64_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// One independent stream: key = (seed, stream_id), counter = block index.
///
/// Identical (seed, stream_id) pairs produce identical draws on every
/// platform. Distinct stream ids select distinct Philox keys, which the
/// generator's authors document as statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t seed() const noexcept { return key_[0]; }
  std::uint64_t stream_id() const noexcept { return key_[1]; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Unbiased integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard normal via the Marsaglia polar method.
  double normal() noexcept;

  /// Circularly-symmetric complex normal, E|z|^2 = 1 (each part variance 1/2).
  std::complex<double> complex_normal() noexcept;

 private:
  PhiloxKey key_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  unsigned used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mimosep
