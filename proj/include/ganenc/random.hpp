#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace ganenc {

// Every random draw in the library goes through this engine. Its output
// sequence is fixed by the standard, so seeded runs are reproducible across
// platforms (the distributions below avoid std:: distributions for that
// reason).
using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the independent substream used for item `index` of a batch.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform integer in [0, bound). bound must be nonzero.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if ((bound & (bound - 1)) == 0) return rng() & (bound - 1);
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

inline std::vector<std::uint8_t> random_bytes(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; i += 8) {
    std::uint64_t word = rng();
    for (std::size_t j = i; j < n && j < i + 8; ++j, word >>= 8) {
      out[j] = static_cast<std::uint8_t>(word);
    }
  }
  return out;
}

// Engine seeded from std::random_device, for runs without --seed.
inline Rng entropy_rng() {
  std::random_device rd;
  std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
  return Rng(seq);
}

}  // namespace ganenc
