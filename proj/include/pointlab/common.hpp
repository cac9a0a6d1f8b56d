#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pointlab {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

// Every precondition or input-format violation in the library surfaces as this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wraps an angle in degrees to (-180, 180].
double wrap_degrees(double deg);

// splitmix64 finaliser; the building block of every sub-stream seed.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-stream seed for (seed, a, b, c). Order of the extra keys matters.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
  return mix64(mix64(mix64(mix64(seed) ^ a) ^ b) ^ c);
}

}  // namespace pointlab
