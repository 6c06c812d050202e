#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ganenc/random.hpp"

namespace ganenc {

inline constexpr int kMaxWidth = 64;

// Fixed-width binary key of 1..64 bits. Bit 0 is the least significant bit;
// it carries weight 2^0 in decimal_value().
class BitVector {
 public:
  // Width N from `width`, bits from the low N bits of `value` (higher bits
  // must be zero). Throws std::invalid_argument otherwise.
  BitVector(int width, std::uint64_t value);

  // Bits listed least-significant first, each 0 or 1.
  static BitVector from_bits(std::initializer_list<int> lsb_first);

  // Parses the MSB-first '0'/'1' rendering produced by to_string().
  static BitVector parse(std::string_view msb_first);

  int width() const { return width_; }
  bool bit(int index) const;
  std::uint64_t word() const { return word_; }

  BitVector with_bit(int index, bool value) const;
  BitVector flipped(int index) const;

  // MSB-first text rendering used in key files.
  std::string to_string() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::uint64_t word_;
  int width_;
};

// Mask with the low `width` bits set.
constexpr std::uint64_t width_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

BitVector operator^(const BitVector& a, const BitVector& b);

struct DecimalPair {
  std::uint64_t re = 0;  // keystream value
  std::uint64_t im = 0;  // reference-side value, exposed but unused by the cipher
  friend bool operator==(const DecimalPair&, const DecimalPair&) = default;
};

// Generator-side (private) key and reference-side (public) key of one position.
struct KeyPair {
  BitVector generator_key;
  BitVector reference_key;
  int width() const { return generator_key.width(); }
};

BitVector random_bitvector(int width, Rng& rng);

// Sum over bits of bit_j * 2^j with j counted from 0.
std::uint64_t decimal_value(const BitVector& v);

DecimalPair complex_pair(const BitVector& g, const BitVector& r);

int hamming_deviation(const BitVector& a, const BitVector& b);

}  // namespace ganenc
