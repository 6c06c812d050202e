#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ganenc/bitkey.hpp"
#include "ganenc/cipher.hpp"
#include "ganenc/error.hpp"

namespace ganenc {

// Binary message envelope, all integers big-endian:
//
//   "GANENC-MSG1"                 11 bytes
//   version                       u8 (= 1)
//   width N                       u8
//   length M                      u32
//   alphabet_id                   32 bytes
//   reference keys                M * ceil(N/8) bytes, bit i of a key in
//                                 byte i/8 at position i%8 (LSB first)
//   cipher indices                M * u16
//   passthrough count             u16
//   passthrough entries           count * (u32 position, u32 scalar value)
struct MessageEnvelope {
  static constexpr std::uint8_t kVersion = 1;

  std::uint8_t version = kVersion;
  int width = 0;
  Digest alphabet_id{};
  std::vector<std::uint16_t> cipher_indices;
  std::vector<BitVector> reference_keys;
  std::vector<Passthrough> passthrough;

  std::size_t length() const { return cipher_indices.size(); }

  static MessageEnvelope from(const Encryption& enc);
  EncryptedMessage message() const;

  friend bool operator==(const MessageEnvelope&, const MessageEnvelope&) = default;
};

enum class EnvelopeErrorKind { kBadMagic, kVersionMismatch, kTruncated, kCountMismatch, kMalformed };

class EnvelopeError : public FormatError {
 public:
  EnvelopeError(EnvelopeErrorKind kind, const std::string& what);
  EnvelopeErrorKind kind() const { return kind_; }

 private:
  EnvelopeErrorKind kind_;
};

inline constexpr std::string_view kEnvelopeMagic = "GANENC-MSG1";

// Throws std::invalid_argument if the envelope violates its invariants.
std::vector<std::uint8_t> write_envelope(const MessageEnvelope& e);
MessageEnvelope read_envelope(std::span<const std::uint8_t> bytes);

// Size in bytes of the reference-key block of a serialized envelope.
std::size_t reference_key_payload_bytes(int width, std::size_t length);

}  // namespace ganenc
