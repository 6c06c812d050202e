#include "ganenc/bitkey.hpp"

#include <bit>
#include <stdexcept>

namespace ganenc {

namespace {

void check_width(int width) {
  if (width < 1 || width > kMaxWidth) {
    throw std::invalid_argument("key width must be in 1..64, got " + std::to_string(width));
  }
}

void check_same_width(const BitVector& a, const BitVector& b) {
  if (a.width() != b.width()) {
    throw std::invalid_argument("key width mismatch: " + std::to_string(a.width()) + " vs " +
                                std::to_string(b.width()));
  }
}

}  // namespace

BitVector::BitVector(int width, std::uint64_t value) : word_(value), width_(width) {
  check_width(width);
  if ((value & ~width_mask(width)) != 0) {
    throw std::invalid_argument("value does not fit in " + std::to_string(width) + " bits");
  }
}

BitVector BitVector::from_bits(std::initializer_list<int> lsb_first) {
  check_width(static_cast<int>(lsb_first.size()));
  std::uint64_t word = 0;
  int i = 0;
  for (int b : lsb_first) {
    if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
    word |= static_cast<std::uint64_t>(b) << i++;
  }
  return BitVector(i, word);
}

BitVector BitVector::parse(std::string_view msb_first) {
  check_width(static_cast<int>(msb_first.size()));
  std::uint64_t word = 0;
  for (char c : msb_first) {
    if (c != '0' && c != '1') throw std::invalid_argument("key text must contain only 0 and 1");
    word = (word << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return BitVector(static_cast<int>(msb_first.size()), word);
}

bool BitVector::bit(int index) const {
  if (index < 0 || index >= width_) throw std::out_of_range("bit index out of range");
  return (word_ >> index) & 1;
}

BitVector BitVector::with_bit(int index, bool value) const {
  if (index < 0 || index >= width_) throw std::out_of_range("bit index out of range");
  const std::uint64_t m = std::uint64_t{1} << index;
  return BitVector(width_, value ? (word_ | m) : (word_ & ~m));
}

BitVector BitVector::flipped(int index) const { return with_bit(index, !bit(index)); }

std::string BitVector::to_string() const {
  std::string out(static_cast<std::size_t>(width_), '0');
  for (int i = 0; i < width_; ++i) {
    if ((word_ >> i) & 1) out[static_cast<std::size_t>(width_ - 1 - i)] = '1';
  }
  return out;
}

BitVector operator^(const BitVector& a, const BitVector& b) {
  check_same_width(a, b);
  return BitVector(a.width(), a.word() ^ b.word());
}

BitVector random_bitvector(int width, Rng& rng) {
  check_width(width);
  return BitVector(width, rng() & width_mask(width));
}

std::uint64_t decimal_value(const BitVector& v) { return v.word(); }

DecimalPair complex_pair(const BitVector& g, const BitVector& r) {
  check_same_width(g, r);
  return {decimal_value(g), decimal_value(r)};
}

int hamming_deviation(const BitVector& a, const BitVector& b) {
  check_same_width(a, b);
  return std::popcount(a.word() ^ b.word());
}

}  // namespace ganenc
