// Portable 64-bit pseudo-random generator used for every sample in the library.
//
// Engine: xoshiro256++ (Blackman & Vigna), state seeded by four SplitMix64 outputs.
// Normal variates come from the Box-Muller transform on 53-bit uniforms, so a seed
// yields the same stream on every platform and in every implementation that follows
// this recipe. Independent streams are obtained by distinct seeds, never by sharing state.
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace lcl {

inline constexpr std::string_view kRngAlgorithm = "xoshiro256++/splitmix64-seeded/box-muller";

std::uint64_t splitmix64(std::uint64_t& state);

class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }
  /// Standard normal; pairs are produced by Box-Muller and the second value is cached.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// Mixes a base seed with a stream label (e.g. a row index for resampling).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t label);

}  // namespace lcl
