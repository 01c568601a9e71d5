#pragma once

#include <cstdint>

namespace bipsim {

// splitmix64 step: full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t word) noexcept {
  return mix64(h ^ word);
}

// Maps a 64-bit hash onto (0,1]. The +1 shift keeps 0 out of the range so
// quotients by the result stay finite.
constexpr double unit_interval(std::uint64_t h) noexcept {
  return (static_cast<double>(h) + 1.0) * 0x1p-64;
}

}  // namespace bipsim
