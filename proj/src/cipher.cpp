#include "ganenc/cipher.hpp"

#include <stdexcept>

#include "ganenc/utf8.hpp"

namespace ganenc {

namespace {

constexpr std::string_view kAlphabetMagic = "GANENC-ALPHABET v1";

std::string describe(char32_t ch) {
  std::string out = "'";
  if (ch >= 0x20 && ch != 0x7f) {
    utf8::append(out, ch);
  } else {
    out += "\\x" + std::to_string(static_cast<unsigned>(ch));
  }
  return out + "'";
}

std::uint16_t add_mod(std::uint32_t f, std::uint64_t v, std::uint64_t k) {
  return static_cast<std::uint16_t>((f + v % k) % k);
}

std::uint32_t sub_mod(std::uint32_t b, std::uint64_t v, std::uint64_t k) {
  return static_cast<std::uint32_t>((b + k - v % k) % k);
}

// Walks `text`, yielding each in-alphabet character with its running index
// among encrypted characters, and collecting passthrough characters.
template <typename Fn>
std::vector<Passthrough> for_each_encryptable(std::u32string_view text, const Alphabet& a,
                                              bool passthrough, Fn&& fn) {
  if (text.size() > 0xffffffffu) throw std::invalid_argument("text too long");
  std::vector<Passthrough> skipped;
  std::size_t j = 0;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const auto f = a.index_of(text[pos]);
    if (!f) {
      if (!passthrough) throw OutOfAlphabetError(text[pos], pos);
      skipped.push_back({static_cast<std::uint32_t>(pos), text[pos]});
      continue;
    }
    fn(j++, *f);
  }
  return skipped;
}

}  // namespace

Alphabet::Alphabet(std::u32string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) throw std::invalid_argument("alphabet needs at least 2 symbols");
  if (symbols_.size() > 0xffff) throw std::invalid_argument("alphabet exceeds 65535 symbols");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const char32_t ch = symbols_[i];
    if (ch > 0x10ffff || (ch >= 0xd800 && ch <= 0xdfff)) {
      throw std::invalid_argument("alphabet symbol is not a Unicode scalar value");
    }
    if (!index_.emplace(ch, static_cast<std::uint32_t>(i)).second) {
      throw std::invalid_argument("duplicate alphabet symbol " + describe(ch));
    }
  }
  id_ = sha256(serialize());
}

Alphabet Alphabet::lower26() {
  std::u32string s;
  for (char32_t c = U'a'; c <= U'z'; ++c) s.push_back(c);
  return Alphabet(std::move(s));
}

Alphabet Alphabet::printable95() {
  std::u32string s;
  for (char32_t c = 32; c <= 126; ++c) s.push_back(c);
  return Alphabet(std::move(s));
}

std::optional<Alphabet> Alphabet::builtin(std::string_view name) {
  if (name == "lower26") return lower26();
  if (name == "printable95") return printable95();
  return std::nullopt;
}

std::string Alphabet::serialize() const {
  std::string out(kAlphabetMagic);
  out.push_back('\n');
  for (char32_t ch : symbols_) {
    if (ch == U'\n') {
      out += "\\n";
    } else if (ch == U'\\') {
      out += "\\\\";
    } else {
      utf8::append(out, ch);
    }
    out.push_back('\n');
  }
  return out;
}

Alphabet Alphabet::parse(std::string_view text) {
  if (!text.starts_with(kAlphabetMagic) || text.size() == kAlphabetMagic.size() ||
      text[kAlphabetMagic.size()] != '\n') {
    throw FormatError("not an alphabet file");
  }
  std::string_view rest = text.substr(kAlphabetMagic.size() + 1);
  std::u32string symbols;
  std::size_t line_no = 2;
  while (!rest.empty()) {
    const std::size_t end = rest.find('\n');
    const std::string_view line = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end + 1);
    std::u32string sym;
    if (line == "\\n") {
      sym = U"\n";
    } else if (line == "\\\\") {
      sym = U"\\";
    } else {
      sym = utf8::decode(line);
    }
    if (sym.size() != 1 || (line.size() == 1 && line[0] == '\\')) {
      throw FormatError("alphabet file line " + std::to_string(line_no) +
                        ": expected exactly one symbol");
    }
    symbols.push_back(sym[0]);
    ++line_no;
  }
  try {
    return Alphabet(std::move(symbols));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("alphabet file: ") + e.what());
  }
}

std::optional<std::uint32_t> Alphabet::index_of(char32_t ch) const {
  const auto it = index_.find(ch);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

OutOfAlphabetError::OutOfAlphabetError(char32_t ch, std::size_t position)
    : Error("character " + describe(ch) + " at position " + std::to_string(position) +
            " is not in the alphabet"),
      ch_(ch),
      position_(position) {}

std::uint32_t encode_char(const Alphabet& a, char32_t ch, std::size_t position) {
  const auto f = a.index_of(ch);
  if (!f) throw OutOfAlphabetError(ch, position);
  return *f;
}

char32_t decode_index(const Alphabet& a, std::uint32_t index) {
  if (index >= a.size()) {
    throw std::invalid_argument("index " + std::to_string(index) + " outside alphabet of size " +
                                std::to_string(a.size()));
  }
  return a.symbols()[index];
}

Encryption encrypt_text(std::u32string_view text, const CircuitConfig& c, const Alphabet& a,
                        const SearchStrategy& s, Rng& rng, EncryptOptions options) {
  if (!is_reversible(c)) {
    throw std::invalid_argument("encryption needs a reversible (NOT-only) circuit; use shred");
  }
  const std::uint64_t master = rng();
  const std::uint64_t k = a.size();
  Encryption out;
  out.message.alphabet_id = a.id();
  out.message.width = c.width();
  out.message.passthrough =
      for_each_encryptable(text, a, options.passthrough, [&](std::size_t j, std::uint32_t f) {
        Rng sub(substream_seed(master, j));
        const auto [pair, report] = generate_key_pair(c, s, sub);
        out.message.cipher_indices.push_back(add_mod(f, decimal_value(pair.generator_key), k));
        out.reference_keys.push_back(pair.reference_key);
        ++out.stats.derivations;
        ++out.stats.converged;
        out.stats.iterations += report.iterations;
      });
  return out;
}

std::u32string decrypt_text(const EncryptedMessage& msg, const std::vector<BitVector>& refs,
                            const CircuitConfig& c, const Alphabet& a, const SearchStrategy& s,
                            std::uint64_t seed, KeyStats* stats) {
  if (msg.alphabet_id != a.id()) throw AlphabetMismatchError();
  if (refs.size() != msg.cipher_indices.size()) {
    throw std::invalid_argument("reference key count " + std::to_string(refs.size()) +
                                " does not match message length " +
                                std::to_string(msg.cipher_indices.size()));
  }
  if (msg.width != c.width()) {
    throw std::invalid_argument("message key width " + std::to_string(msg.width) +
                                " does not match circuit width " + std::to_string(c.width()));
  }
  const std::size_t total = msg.text_length();
  for (std::size_t i = 0; i < msg.passthrough.size(); ++i) {
    const auto pos = msg.passthrough[i].position;
    if (pos >= total || (i > 0 && pos <= msg.passthrough[i - 1].position)) {
      throw std::invalid_argument("passthrough positions must be increasing and inside the text");
    }
  }

  const std::uint64_t k = a.size();
  std::u32string text;
  text.reserve(total);
  std::size_t j = 0;
  std::size_t p = 0;
  KeyStats local;
  for (std::size_t pos = 0; pos < total; ++pos) {
    if (p < msg.passthrough.size() && msg.passthrough[p].position == pos) {
      text.push_back(msg.passthrough[p++].character);
      continue;
    }
    Rng sub(substream_seed(seed, j));
    const auto [g, report] = derive_dynamic_key(c, refs[j], s, sub);
    ++local.derivations;
    ++local.converged;
    local.iterations += report.iterations;
    const std::uint32_t b = msg.cipher_indices[j++];
    if (b >= k) throw std::invalid_argument("cipher index outside the alphabet");
    text.push_back(decode_index(a, sub_mod(b, decimal_value(g), k)));
  }
  if (stats != nullptr) *stats = local;
  return text;
}

Encryption shred_text(std::u32string_view text, const CircuitConfig& c, const Alphabet& a,
                      Rng& rng, EncryptOptions options) {
  if (is_reversible(c)) {
    throw std::invalid_argument("shred needs an irreversible circuit (at least one binary gate)");
  }
  const std::uint64_t master = rng();
  const std::uint64_t k = a.size();
  Encryption out;
  out.message.alphabet_id = a.id();
  out.message.width = c.width();
  out.message.passthrough =
      for_each_encryptable(text, a, options.passthrough, [&](std::size_t j, std::uint32_t f) {
        Rng sub(substream_seed(master, j));
        const BitVector g = random_bitvector(c.width(), sub);
        out.message.cipher_indices.push_back(add_mod(f, decimal_value(g), k));
        out.reference_keys.push_back(apply_circuit(c, g));
        ++out.stats.derivations;
        ++out.stats.converged;
        ++out.stats.iterations;
      });
  return out;
}

}  // namespace ganenc
