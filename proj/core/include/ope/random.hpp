#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ope {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of the stream at `index` under `master`. Streams are a pure function of
// (master, index), so datasets do not depend on generation order or thread count.
//   derive_seed(m, i) = mix64(m ^ mix64(i + 0x9E3779B97F4A7C15))
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Rest... rest) {
  return derive_seed(derive_seed(master, index), static_cast<std::uint64_t>(rest)...);
}

// FNV-1a over bytes; used to fold names into seeds and to hash configs.
std::uint64_t fnv1a64(std::span<const char> bytes);

// A seeded random stream owned by one sampling call. Only the engine output is
// consumed (never std:: distributions), so draws are identical across standard
// library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Index drawn from the cumulative distribution `cdf` (last entry ~1).
  std::size_t from_cdf(std::span<const double> cdf);

  // Index drawn from unnormalized nonnegative weights.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ope
