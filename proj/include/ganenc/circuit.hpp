#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ganenc/bitkey.hpp"
#include "ganenc/random.hpp"
#include "ganenc/sha256.hpp"

namespace ganenc {

enum class GateKind : std::uint8_t { kNot, kAnd, kOr, kNor, kXor };

inline constexpr GateKind kAllGateKinds[] = {GateKind::kNot, GateKind::kAnd, GateKind::kOr,
                                             GateKind::kNor, GateKind::kXor};

std::string_view gate_name(GateKind kind);
// Accepts the upper-case names used in circuit files. Throws std::invalid_argument.
GateKind parse_gate_kind(std::string_view name);

// Two-input truth table of a binary kind. NOT is unary; see not_output().
bool gate_output(GateKind kind, bool a, bool b);
constexpr bool not_output(bool a) { return !a; }

// NOT flips wire `a`. Binary kinds read (a, b) and write their output to
// `target`; all other wires are untouched. An XOR gate must write to a wire
// other than its inputs (XOR written back onto an input would be bijective).
struct Gate {
  GateKind kind = GateKind::kNot;
  int a = 0;
  int b = 0;
  int target = 0;

  static Gate make_not(int wire) { return {GateKind::kNot, wire, wire, wire}; }
  static Gate make_binary(GateKind kind, int a, int b, int target);
  static Gate make_binary(GateKind kind, int a, int b) { return make_binary(kind, a, b, a); }

  bool is_binary() const { return kind != GateKind::kNot; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

// Ordered gate list over N wires; the secret encryptor shared by sender and
// receiver. Immutable once constructed.
class CircuitConfig {
 public:
  // Throws std::invalid_argument if width is outside 1..64 or a gate is
  // invalid at this width.
  CircuitConfig(int width, std::vector<Gate> gates);

  int width() const { return width_; }
  const std::vector<Gate>& gates() const { return gates_; }
  // SHA-256 of serialize(), hex encoded.
  const std::string& config_id() const { return config_id_; }

  // Canonical circuit file text.
  std::string serialize() const;
  // Throws FormatError on malformed text.
  static CircuitConfig parse(std::string_view text);

  friend bool operator==(const CircuitConfig& x, const CircuitConfig& y) {
    return x.width_ == y.width_ && x.gates_ == y.gates_;
  }

 private:
  int width_;
  std::vector<Gate> gates_;
  std::string config_id_;
};

// Draws `gate_count` gates uniformly over `kinds` and over valid wirings.
// Binary AND/OR/NOR write to their first input; XOR writes to a third wire.
CircuitConfig random_circuit(int width, int gate_count, const std::vector<GateKind>& kinds,
                             Rng& rng);

BitVector apply_circuit(const CircuitConfig& c, const BitVector& g);
// Word-level form of apply_circuit for hot loops; `g` must fit the width.
std::uint64_t apply_circuit_word(const CircuitConfig& c, std::uint64_t g);

// True iff the circuit consists only of NOT gates (which is exactly when it
// is a bijection on N-bit keys).
bool is_reversible(const CircuitConfig& c);

// For a reversible circuit, bit j = parity of NOT gates on wire j, so that
// apply_circuit(c, g) == g ^ net_mask(c). Throws std::logic_error otherwise.
BitVector net_mask(const CircuitConfig& c);

// The unique preimage of `r`. Throws std::logic_error on irreversible circuits.
BitVector invert_image(const CircuitConfig& c, const BitVector& r);

// Passphrase-scrambled circuit file. Obfuscation grade only: the keystream is
// SHA-256 in counter mode with the passphrase as key material, no KDF
// stretching.
struct LockedCircuit {
  std::array<std::uint8_t, 16> salt{};
  std::vector<std::uint8_t> payload;
  Digest tag{};

  std::string serialize() const;
  static LockedCircuit parse(std::string_view text);

  friend bool operator==(const LockedCircuit&, const LockedCircuit&) = default;
};

LockedCircuit lock_circuit(const CircuitConfig& c, std::string_view passphrase, Rng& rng);
// Throws TagMismatchError for a wrong passphrase or corrupted payload.
CircuitConfig unlock_circuit(const LockedCircuit& lc, std::string_view passphrase);

bool is_locked_circuit_text(std::string_view text);

}  // namespace ganenc
