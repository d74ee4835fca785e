#pragma once
// Counter-based keyed pseudorandom primitives.
//
// Every random quantity in this project is a pure function of a 64-bit key
// and a handful of integer coordinates, obtained by hashing.  That gives
// O(1) random access into conceptually infinite random fields (no stream
// state to fast-forward), makes concurrent evaluation order irrelevant,
// and makes replays bit-exact.

#include <cstdint>

namespace cookiewalk::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Steele/Lea/Flood mixing constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Sponge-style absorption of one word into a running hash state.
constexpr std::uint64_t absorb(std::uint64_t h, std::uint64_t w) {
  return mix64(h + kGolden + w);
}

constexpr std::uint64_t hash1(std::uint64_t seed, std::uint64_t a) {
  return absorb(mix64(seed + kGolden), a);
}

constexpr std::uint64_t hash2(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b) {
  return absorb(hash1(seed, a), b);
}

constexpr std::uint64_t hash3(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b, std::uint64_t c) {
  return absorb(hash2(seed, a, b), c);
}

constexpr std::uint64_t hash4(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
  return absorb(hash3(seed, a, b, c), d);
}

// Injective map of signed coordinates into hash words (0,-1,1,-2,2 -> 0,1,2,3,4).
constexpr std::uint64_t zigzag(std::int64_t x) {
  return (static_cast<std::uint64_t>(x) << 1) ^
         static_cast<std::uint64_t>(x >> 63);
}

// Top 53 bits -> double in [0, 1).
constexpr double unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform variate attached to coordinate (x, n) under a given key.
constexpr double uniform_at(std::uint64_t key, std::int64_t x,
                            std::int64_t n) {
  return unit(hash2(key, zigzag(x), static_cast<std::uint64_t>(n)));
}

}  // namespace cookiewalk::rng
