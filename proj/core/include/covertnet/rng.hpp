#pragma once

#include <cstdint>
#include <random>

namespace covertnet {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based seed split: the stream for a key path depends only on the
/// master seed and the keys, never on how many other streams were drawn.
template <class... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t master, Keys... keys) {
  std::uint64_t h = mix64(master);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(keys)))), ...);
  return h;
}

/// Purpose tags that keep the sub-streams of one run disjoint.
enum class StreamTag : std::uint64_t {
  kNodes = 0x6e6f646573ULL,
  kWardens = 0x7761726473ULL,
  kRoles = 0x726f6c6573ULL,
  kFlows = 0x666c6f7773ULL,
  kPilot = 0x70696c6f74ULL,
  kTrial = 0x747269616cULL,
};

/// Portable random stream. The engine output sequence is fixed by the
/// standard; the conversions below avoid implementation-defined
/// distributions so results are identical across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace covertnet
