#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace csikit::rng {

// Reproducibility contract shared with other implementations:
//
//   mix(x)        = SplitMix64 finalizer of (x + 0x9E3779B97F4A7C15)
//   stream(m, t…) = h ← mix(m); for each tag t: h ← mix(h XOR t)
//   engine        = std::mt19937_64 seeded with the single value h
//   below(n)      = rejection sampling: draw x until x < 2^64 − (2^64 mod n),
//                   return x mod n
//   unit()        = (x >> 11) · 2^-53, in [0, 1)
//   normal()      = Box–Muller cosine branch, u1 = 1 − unit(), u2 = unit()
//
// String tags are folded to integers with 64-bit FNV-1a.

std::uint64_t mix(std::uint64_t x) noexcept;

constexpr std::uint64_t tag(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept;

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}
  Stream(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
      : engine_(stream_seed(master, tags)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  double unit();
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace csikit::rng
