#include "csikit/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace csikit::rng {

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix(master);
  for (std::uint64_t t : tags) h = mix(h ^ t);
  return h;
}

std::uint64_t Stream::below(std::uint64_t n) {
  // 2^64 mod n, computed without overflow.
  const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;  // inclusive
  std::uint64_t x = engine_();
  while (rem != 0 && x > limit) x = engine_();
  return x % n;
}

double Stream::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Stream::normal() {
  const double u1 = 1.0 - unit();
  const double u2 = unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace csikit::rng
