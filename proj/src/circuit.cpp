#include "ganenc/circuit.hpp"

#include <openssl/crypto.h>

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "ganenc/error.hpp"

namespace ganenc {

namespace {

constexpr std::string_view kCircuitMagic = "GANENC-CIRCUIT v1";
constexpr std::string_view kLockedMagic = "GANENC-LOCKED v1";

std::string wire_error(const Gate& g, int width, std::string_view why) {
  return std::string(gate_name(g.kind)) + " gate " + std::string(why) + " (width " +
         std::to_string(width) + ")";
}

void validate_gate(const Gate& g, int width) {
  auto in_range = [width](int w) { return w >= 0 && w < width; };
  if (!in_range(g.a)) throw std::invalid_argument(wire_error(g, width, "wire out of range"));
  if (!g.is_binary()) return;
  if (!in_range(g.b) || !in_range(g.target)) {
    throw std::invalid_argument(wire_error(g, width, "wire out of range"));
  }
  if (g.a == g.b) throw std::invalid_argument(wire_error(g, width, "inputs must differ"));
  if (g.kind == GateKind::kXor && (g.target == g.a || g.target == g.b)) {
    throw std::invalid_argument(wire_error(g, width, "must not write onto one of its inputs"));
  }
}

// Splits text into lines on LF; a single trailing LF does not create an
// empty final line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

long long parse_int(std::string_view s, std::string_view what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw FormatError("circuit file: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::string_view expect_field(std::string_view line, std::string_view key) {
  auto words = split_words(line);
  if (words.size() != 2 || words[0] != key) {
    throw FormatError("expected '" + std::string(key) + " <value>', got '" + std::string(line) + "'");
  }
  return words[1];
}

void put_u64_be(std::uint8_t* out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i, v >>= 8) out[i] = static_cast<std::uint8_t>(v);
}

// SHA-256(passphrase || salt || counter) blocks XORed over `data`.
void apply_keystream(std::vector<std::uint8_t>& data, std::string_view passphrase,
                     std::span<const std::uint8_t> salt) {
  std::uint8_t counter[8];
  for (std::size_t offset = 0, block = 0; offset < data.size(); offset += 32, ++block) {
    put_u64_be(counter, block);
    const Digest ks = Sha256().update(passphrase).update(salt).update(counter).finish();
    for (std::size_t j = 0; j < 32 && offset + j < data.size(); ++j) data[offset + j] ^= ks[j];
  }
}

Digest lock_tag(std::string_view passphrase, std::span<const std::uint8_t> salt,
                std::string_view serialized) {
  return Sha256().update(passphrase).update(salt).update(serialized).finish();
}

}  // namespace

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kNot: return "NOT";
    case GateKind::kAnd: return "AND";
    case GateKind::kOr: return "OR";
    case GateKind::kNor: return "NOR";
    case GateKind::kXor: return "XOR";
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view name) {
  for (GateKind k : kAllGateKinds) {
    if (gate_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

bool gate_output(GateKind kind, bool a, bool b) {
  switch (kind) {
    case GateKind::kAnd: return a && b;
    case GateKind::kOr: return a || b;
    case GateKind::kNor: return !(a || b);
    case GateKind::kXor: return a != b;
    case GateKind::kNot: break;
  }
  throw std::invalid_argument("NOT is not a two-input gate");
}

Gate Gate::make_binary(GateKind kind, int a, int b, int target) {
  if (kind == GateKind::kNot) throw std::invalid_argument("NOT is not a two-input gate");
  return {kind, a, b, target};
}

CircuitConfig::CircuitConfig(int width, std::vector<Gate> gates)
    : width_(width), gates_(std::move(gates)) {
  if (width < 1 || width > kMaxWidth) {
    throw std::invalid_argument("circuit width must be in 1..64, got " + std::to_string(width));
  }
  for (Gate& g : gates_) {
    if (!g.is_binary()) g = Gate::make_not(g.a);
    validate_gate(g, width_);
  }
  const Digest id = sha256(serialize());
  config_id_ = to_hex(id);
}

std::string CircuitConfig::serialize() const {
  std::string out;
  out.append(kCircuitMagic).append("\n");
  out.append("bits ").append(std::to_string(width_)).append("\n");
  out.append("gates ").append(std::to_string(gates_.size())).append("\n");
  for (const Gate& g : gates_) {
    out.append(gate_name(g.kind)).append(" ").append(std::to_string(g.a));
    if (g.is_binary()) {
      out.append(" ").append(std::to_string(g.b)).append(" -> ").append(std::to_string(g.target));
    }
    out.append("\n");
  }
  return out;
}

CircuitConfig CircuitConfig::parse(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kCircuitMagic) throw FormatError("not a circuit file");
  if (lines.size() < 3) throw FormatError("circuit file: truncated header");
  const long long width = parse_int(expect_field(lines[1], "bits"), "width");
  const long long count = parse_int(expect_field(lines[2], "gates"), "gate count");
  if (count < 0 || static_cast<std::size_t>(count) != lines.size() - 3) {
    throw FormatError("circuit file: gate count does not match gate lines");
  }
  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(count));
  auto wire = [](std::string_view s) {
    const long long v = parse_int(s, "wire");
    if (v < 0 || v >= kMaxWidth) throw FormatError("circuit file: wire out of range");
    return static_cast<int>(v);
  };
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const auto w = split_words(lines[i]);
    if (w.empty()) throw FormatError("circuit file: empty gate line");
    GateKind kind;
    try {
      kind = parse_gate_kind(w[0]);
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("circuit file: ") + e.what());
    }
    if (kind == GateKind::kNot) {
      if (w.size() != 2) throw FormatError("circuit file: expected 'NOT <w>'");
      gates.push_back(Gate::make_not(wire(w[1])));
    } else {
      if (w.size() != 5 || w[3] != "->") {
        throw FormatError("circuit file: expected '<KIND> <a> <b> -> <t>'");
      }
      gates.push_back(Gate::make_binary(kind, wire(w[1]), wire(w[2]), wire(w[4])));
    }
  }
  if (width < 1 || width > kMaxWidth) throw FormatError("circuit file: width out of range");
  try {
    return CircuitConfig(static_cast<int>(width), std::move(gates));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("circuit file: ") + e.what());
  }
}

CircuitConfig random_circuit(int width, int gate_count, const std::vector<GateKind>& kinds,
                             Rng& rng) {
  if (width < 1 || width > kMaxWidth) {
    throw std::invalid_argument("circuit width must be in 1..64");
  }
  if (gate_count < 1) throw std::invalid_argument("gate count must be at least 1");
  std::vector<GateKind> pool;
  for (GateKind k : kAllGateKinds) {
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) pool.push_back(k);
  }
  if (pool.empty()) throw std::invalid_argument("gate kind set is empty");
  for (GateKind k : pool) {
    const int needed = k == GateKind::kNot ? 1 : k == GateKind::kXor ? 3 : 2;
    if (width < needed) {
      throw std::invalid_argument(std::string(gate_name(k)) + " gates need at least " +
                                  std::to_string(needed) + " wires");
    }
  }

  const auto n = static_cast<std::uint64_t>(width);
  // Uniform wire not in `skip`, with `skip` sorted ascending.
  auto draw_other = [&](std::uint64_t count, std::initializer_list<int> skip) {
    int w = static_cast<int>(uniform_below(rng, count));
    for (int s : skip) w += (w >= s);
    return w;
  };

  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(gate_count));
  for (int i = 0; i < gate_count; ++i) {
    const GateKind kind = pool[uniform_below(rng, pool.size())];
    const int a = static_cast<int>(uniform_below(rng, n));
    if (kind == GateKind::kNot) {
      gates.push_back(Gate::make_not(a));
      continue;
    }
    const int b = draw_other(n - 1, {a});
    if (kind == GateKind::kXor) {
      const int t = draw_other(n - 2, {std::min(a, b), std::max(a, b)});
      gates.push_back(Gate::make_binary(kind, a, b, t));
    } else {
      gates.push_back(Gate::make_binary(kind, a, b));
    }
  }
  return CircuitConfig(width, std::move(gates));
}

std::uint64_t apply_circuit_word(const CircuitConfig& c, std::uint64_t g) {
  for (const Gate& gate : c.gates()) {
    if (!gate.is_binary()) {
      g ^= std::uint64_t{1} << gate.a;
      continue;
    }
    const bool out = gate_output(gate.kind, (g >> gate.a) & 1, (g >> gate.b) & 1);
    const std::uint64_t m = std::uint64_t{1} << gate.target;
    g = out ? (g | m) : (g & ~m);
  }
  return g;
}

BitVector apply_circuit(const CircuitConfig& c, const BitVector& g) {
  if (g.width() != c.width()) {
    throw std::invalid_argument("key width " + std::to_string(g.width()) +
                                " does not match circuit width " + std::to_string(c.width()));
  }
  return BitVector(c.width(), apply_circuit_word(c, g.word()));
}

bool is_reversible(const CircuitConfig& c) {
  return std::none_of(c.gates().begin(), c.gates().end(),
                      [](const Gate& g) { return g.is_binary(); });
}

BitVector net_mask(const CircuitConfig& c) {
  if (!is_reversible(c)) throw std::logic_error("net_mask requires a NOT-only circuit");
  std::uint64_t mask = 0;
  for (const Gate& g : c.gates()) mask ^= std::uint64_t{1} << g.a;
  return BitVector(c.width(), mask);
}

BitVector invert_image(const CircuitConfig& c, const BitVector& r) {
  if (!is_reversible(c)) throw std::logic_error("cannot invert an irreversible circuit");
  return r ^ net_mask(c);
}

std::string LockedCircuit::serialize() const {
  std::string out;
  out.append(kLockedMagic).append("\n");
  out.append("salt ").append(to_hex(salt)).append("\n");
  out.append("tag ").append(to_hex(tag)).append("\n");
  out.append("payload ").append(to_hex(payload)).append("\n");
  return out;
}

LockedCircuit LockedCircuit::parse(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kLockedMagic) throw FormatError("not a locked circuit file");
  if (lines.size() != 4) throw FormatError("locked circuit file: expected 4 lines");
  LockedCircuit lc;
  const auto salt = from_hex(expect_field(lines[1], "salt"));
  const auto tag = from_hex(expect_field(lines[2], "tag"));
  if (salt.size() != lc.salt.size() || tag.size() != lc.tag.size()) {
    throw FormatError("locked circuit file: bad salt or tag length");
  }
  std::copy(salt.begin(), salt.end(), lc.salt.begin());
  std::copy(tag.begin(), tag.end(), lc.tag.begin());
  lc.payload = from_hex(expect_field(lines[3], "payload"));
  return lc;
}

bool is_locked_circuit_text(std::string_view text) { return text.starts_with(kLockedMagic); }

LockedCircuit lock_circuit(const CircuitConfig& c, std::string_view passphrase, Rng& rng) {
  if (passphrase.empty()) throw std::invalid_argument("passphrase must not be empty");
  LockedCircuit lc;
  const auto salt = random_bytes(rng, lc.salt.size());
  std::copy(salt.begin(), salt.end(), lc.salt.begin());
  const std::string text = c.serialize();
  lc.tag = lock_tag(passphrase, lc.salt, text);
  lc.payload.assign(text.begin(), text.end());
  apply_keystream(lc.payload, passphrase, lc.salt);
  return lc;
}

CircuitConfig unlock_circuit(const LockedCircuit& lc, std::string_view passphrase) {
  if (passphrase.empty()) throw std::invalid_argument("passphrase must not be empty");
  std::vector<std::uint8_t> plain = lc.payload;
  apply_keystream(plain, passphrase, lc.salt);
  const std::string_view text(reinterpret_cast<const char*>(plain.data()), plain.size());
  const Digest expected = lock_tag(passphrase, lc.salt, text);
  if (CRYPTO_memcmp(expected.data(), lc.tag.data(), expected.size()) != 0) {
    throw TagMismatchError();
  }
  return CircuitConfig::parse(text);
}

}  // namespace ganenc
