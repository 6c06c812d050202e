#include "ganenc/envelope.hpp"

#include <algorithm>
#include <stdexcept>

namespace ganenc {

namespace {

std::size_t key_bytes(int width) { return static_cast<std::size_t>(width + 7) / 8; }

class Writer {
 public:
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void text(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { be(v, 2); }
  void u32(std::uint32_t v) { be(v, 4); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void be(std::uint64_t v, int n) {
    for (int i = n - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> take(std::size_t n, std::string_view what) {
    if (in_.size() - pos_ < n) {
      throw EnvelopeError(EnvelopeErrorKind::kTruncated,
                          "envelope truncated while reading " + std::string(what));
    }
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8(std::string_view what) { return take(1, what)[0]; }
  std::uint16_t u16(std::string_view what) { return static_cast<std::uint16_t>(be(2, what)); }
  std::uint32_t u32(std::string_view what) { return static_cast<std::uint32_t>(be(4, what)); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::uint64_t be(std::size_t n, std::string_view what) {
    std::uint64_t v = 0;
    for (std::uint8_t b : take(n, what)) v = (v << 8) | b;
    return v;
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

bool valid_scalar(std::uint32_t cp) { return cp <= 0x10ffff && (cp < 0xd800 || cp > 0xdfff); }

}  // namespace

EnvelopeError::EnvelopeError(EnvelopeErrorKind kind, const std::string& what)
    : FormatError(what), kind_(kind) {}

MessageEnvelope MessageEnvelope::from(const Encryption& enc) {
  MessageEnvelope e;
  e.width = enc.message.width;
  e.alphabet_id = enc.message.alphabet_id;
  e.cipher_indices = enc.message.cipher_indices;
  e.reference_keys = enc.reference_keys;
  e.passthrough = enc.message.passthrough;
  return e;
}

EncryptedMessage MessageEnvelope::message() const {
  return EncryptedMessage{cipher_indices, alphabet_id, width, passthrough};
}

std::size_t reference_key_payload_bytes(int width, std::size_t length) {
  return length * key_bytes(width);
}

std::vector<std::uint8_t> write_envelope(const MessageEnvelope& e) {
  if (e.width < 1 || e.width > kMaxWidth) throw std::invalid_argument("envelope width out of range");
  if (e.reference_keys.size() != e.cipher_indices.size()) {
    throw std::invalid_argument("envelope key count does not match cipher length");
  }
  if (e.cipher_indices.size() > 0xffffffffu) throw std::invalid_argument("envelope too long");
  if (e.passthrough.size() > 0xffff) throw std::invalid_argument("too many passthrough entries");

  Writer w;
  w.text(kEnvelopeMagic);
  w.u8(e.version);
  w.u8(static_cast<std::uint8_t>(e.width));
  w.u32(static_cast<std::uint32_t>(e.cipher_indices.size()));
  w.bytes(e.alphabet_id);
  for (const BitVector& key : e.reference_keys) {
    if (key.width() != e.width) throw std::invalid_argument("reference key width mismatch");
    std::uint64_t word = key.word();
    for (std::size_t i = 0; i < key_bytes(e.width); ++i, word >>= 8) {
      w.u8(static_cast<std::uint8_t>(word));
    }
  }
  for (std::uint16_t b : e.cipher_indices) w.u16(b);
  w.u16(static_cast<std::uint16_t>(e.passthrough.size()));
  for (const Passthrough& p : e.passthrough) {
    w.u32(p.position);
    w.u32(static_cast<std::uint32_t>(p.character));
  }
  return w.take();
}

MessageEnvelope read_envelope(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.take(kEnvelopeMagic.size(), "magic");
  if (!std::equal(magic.begin(), magic.end(), kEnvelopeMagic.begin())) {
    throw EnvelopeError(EnvelopeErrorKind::kBadMagic, "not a message envelope (bad magic)");
  }
  MessageEnvelope e;
  e.version = r.u8("version");
  if (e.version != MessageEnvelope::kVersion) {
    throw EnvelopeError(EnvelopeErrorKind::kVersionMismatch,
                        "unsupported envelope version " + std::to_string(e.version));
  }
  e.width = r.u8("width");
  if (e.width < 1 || e.width > kMaxWidth) {
    throw EnvelopeError(EnvelopeErrorKind::kMalformed,
                        "envelope key width " + std::to_string(e.width) + " out of range");
  }
  const std::uint32_t length = r.u32("length");
  const auto id = r.take(e.alphabet_id.size(), "alphabet id");
  std::copy(id.begin(), id.end(), e.alphabet_id.begin());

  const std::size_t kb = key_bytes(e.width);
  if (r.remaining() / kb < length) {
    throw EnvelopeError(EnvelopeErrorKind::kTruncated, "envelope truncated in reference keys");
  }
  e.reference_keys.reserve(length);
  for (std::uint32_t k = 0; k < length; ++k) {
    std::uint64_t word = 0;
    const auto packed = r.take(kb, "reference key");
    for (std::size_t i = 0; i < kb; ++i) word |= static_cast<std::uint64_t>(packed[i]) << (8 * i);
    if ((word & ~width_mask(e.width)) != 0) {
      throw EnvelopeError(EnvelopeErrorKind::kMalformed, "reference key has bits beyond its width");
    }
    e.reference_keys.emplace_back(e.width, word);
  }
  e.cipher_indices.reserve(length);
  for (std::uint32_t k = 0; k < length; ++k) e.cipher_indices.push_back(r.u16("cipher index"));

  const std::uint16_t count = r.u16("passthrough count");
  const std::uint64_t total = std::uint64_t{length} + count;
  for (std::uint16_t i = 0; i < count; ++i) {
    Passthrough p;
    p.position = r.u32("passthrough position");
    const std::uint32_t cp = r.u32("passthrough character");
    if (!valid_scalar(cp) || p.position >= total ||
        (!e.passthrough.empty() && p.position <= e.passthrough.back().position)) {
      throw EnvelopeError(EnvelopeErrorKind::kMalformed, "invalid passthrough entry");
    }
    p.character = static_cast<char32_t>(cp);
    e.passthrough.push_back(p);
  }
  if (r.remaining() != 0) {
    throw EnvelopeError(EnvelopeErrorKind::kCountMismatch,
                        std::to_string(r.remaining()) + " bytes beyond the declared counts");
  }
  return e;
}

}  // namespace ganenc
