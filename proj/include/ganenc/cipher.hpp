#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ganenc/bitkey.hpp"
#include "ganenc/circuit.hpp"
#include "ganenc/error.hpp"
#include "ganenc/gan.hpp"
#include "ganenc/random.hpp"
#include "ganenc/sha256.hpp"

namespace ganenc {

// Ordered character set. f(symbol i) = i; K = size().
class Alphabet {
 public:
  // Throws std::invalid_argument on duplicates, K < 2 or K > 65535.
  explicit Alphabet(std::u32string symbols);

  static Alphabet lower26();      // a..z
  static Alphabet printable95();  // ASCII 32..126
  // "lower26", "printable95"; nullopt for anything else.
  static std::optional<Alphabet> builtin(std::string_view name);

  // Alphabet file: "GANENC-ALPHABET v1" then one symbol per line, with "\n"
  // and "\\" escapes.
  std::string serialize() const;
  static Alphabet parse(std::string_view text);

  std::size_t size() const { return symbols_.size(); }
  const std::u32string& symbols() const { return symbols_; }
  std::optional<std::uint32_t> index_of(char32_t ch) const;
  bool contains(char32_t ch) const { return index_of(ch).has_value(); }
  // SHA-256 of serialize().
  const Digest& id() const { return id_; }

 private:
  std::u32string symbols_;
  std::unordered_map<char32_t, std::uint32_t> index_;
  Digest id_;
};

class OutOfAlphabetError : public Error {
 public:
  OutOfAlphabetError(char32_t ch, std::size_t position);
  char32_t character() const { return ch_; }
  std::size_t position() const { return position_; }

 private:
  char32_t ch_;
  std::size_t position_;
};

class AlphabetMismatchError : public Error {
 public:
  AlphabetMismatchError() : Error("ciphertext was produced under a different alphabet") {}
};

std::uint32_t encode_char(const Alphabet& a, char32_t ch, std::size_t position = 0);
char32_t decode_index(const Alphabet& a, std::uint32_t index);

// A character copied through unencrypted, at its position in the full text.
struct Passthrough {
  std::uint32_t position = 0;
  char32_t character = 0;
  friend bool operator==(const Passthrough&, const Passthrough&) = default;
};

struct EncryptedMessage {
  std::vector<std::uint16_t> cipher_indices;  // B_k, one per encrypted character
  Digest alphabet_id{};
  int width = 0;
  std::vector<Passthrough> passthrough;  // sorted by position

  std::size_t text_length() const { return cipher_indices.size() + passthrough.size(); }
  friend bool operator==(const EncryptedMessage&, const EncryptedMessage&) = default;
};

// Aggregated search statistics over the key derivations of one message.
struct KeyStats {
  std::uint64_t derivations = 0;
  std::uint64_t iterations = 0;
  std::uint64_t converged = 0;
};

struct EncryptOptions {
  // Copy out-of-alphabet characters unencrypted instead of failing.
  bool passthrough = false;
};

struct Encryption {
  EncryptedMessage message;
  std::vector<BitVector> reference_keys;  // one per cipher index, same order
  KeyStats stats;
};

// B_k = (f(A_k) + v_k) mod K with v_k the decimal value of a fresh dynamic
// key for position k. Position k draws from substream_seed(rng(), k), so the
// output depends only on the incoming rng state.
Encryption encrypt_text(std::u32string_view text, const CircuitConfig& c, const Alphabet& a,
                        const SearchStrategy& s, Rng& rng, EncryptOptions options = {});

// A_k = f^-1((B_k - v_k) mod K), v_k recovered from the reference key. Throws
// AlphabetMismatchError before emitting anything if the message was produced
// under another alphabet; std::invalid_argument on count or width mismatch.
// `seed` feeds the search strategies (unused by DirectInversion).
std::u32string decrypt_text(const EncryptedMessage& msg, const std::vector<BitVector>& refs,
                            const CircuitConfig& c, const Alphabet& a, const SearchStrategy& s,
                            std::uint64_t seed = 0, KeyStats* stats = nullptr);

// Irreversible deletion: encrypts with directly sampled dynamic keys, emits
// their circuit images, and forgets the keys. Refuses reversible circuits
// (std::invalid_argument), which would leave the text recoverable.
Encryption shred_text(std::u32string_view text, const CircuitConfig& c, const Alphabet& a,
                      Rng& rng, EncryptOptions options = {});

}  // namespace ganenc
