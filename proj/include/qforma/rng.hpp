#pragma once

#include <array>
#include <cstdint>

namespace qforma {

/// xoshiro256** seeded through splitmix64.
///
/// The draw helpers are fixed so that other ports can reproduce a run bit for bit:
///   uniform01()      = (next() >> 11) * 2^-53
///   uniform_index(n) = high 64 bits of the 128-bit product next() * n
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  double uniform01();
  /// Value in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  const std::array<std::uint64_t, 4>& state() const { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace qforma
