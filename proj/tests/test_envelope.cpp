#include <thread>

#include "doctest.h"
#include "ganenc/envelope.hpp"
#include "ganenc/transport.hpp"

using namespace ganenc;

namespace {

MessageEnvelope random_envelope(Rng& rng) {
  MessageEnvelope e;
  e.width = 1 + static_cast<int>(uniform_below(rng, 64));
  const auto id = random_bytes(rng, 32);
  std::copy(id.begin(), id.end(), e.alphabet_id.begin());
  const std::size_t m = uniform_below(rng, 40);
  for (std::size_t i = 0; i < m; ++i) {
    e.reference_keys.push_back(random_bitvector(e.width, rng));
    e.cipher_indices.push_back(static_cast<std::uint16_t>(rng()));
  }
  const std::size_t total = m + uniform_below(rng, 4);
  for (std::uint32_t pos = 0, left = static_cast<std::uint32_t>(total - m); left > 0; ++pos) {
    // spread passthrough entries over the tail
    if (pos >= m || uniform_below(rng, 3) == 0) {
      e.passthrough.push_back({pos, static_cast<char32_t>(uniform_below(rng, 0xd800))});
      --left;
    }
  }
  return e;
}

EnvelopeErrorKind read_error_kind(const std::vector<std::uint8_t>& bytes) {
  try {
    read_envelope(bytes);
  } catch (const EnvelopeError& e) {
    return e.kind();
  }
  FAIL("expected EnvelopeError");
  return EnvelopeErrorKind::kMalformed;
}

MessageEnvelope three_char_envelope() {
  MessageEnvelope e;
  e.width = 8;
  e.alphabet_id = Alphabet::printable95().id();
  e.reference_keys = {BitVector(8, 0x01), BitVector(8, 0x80), BitVector(8, 0xa5)};
  e.cipher_indices = {3, 94, 0};
  return e;
}

}  // namespace

TEST_CASE("three-character envelope round trip and layout") {
  const MessageEnvelope e = three_char_envelope();
  const auto bytes = write_envelope(e);
  // 11 magic + 1 version + 1 width + 4 length + 32 id + 3 keys + 6 indices + 2 count
  CHECK(bytes.size() == 60);
  CHECK(std::string(bytes.begin(), bytes.begin() + 11) == "GANENC-MSG1");
  CHECK(bytes[11] == 1);
  CHECK(bytes[12] == 8);
  CHECK(bytes[13] == 0);
  CHECK(bytes[16] == 3);
  CHECK(bytes[49] == 0x01);
  CHECK(bytes[50] == 0x80);
  CHECK(bytes[51] == 0xa5);
  CHECK(bytes[52] == 0x00);
  CHECK(bytes[53] == 0x03);
  CHECK(bytes[54] == 0x00);
  CHECK(bytes[55] == 94);
  CHECK(read_envelope(bytes) == e);
}

TEST_CASE("keys pack least significant bit first") {
  MessageEnvelope e;
  e.width = 12;
  e.reference_keys = {BitVector(12, 0xabc)};
  e.cipher_indices = {7};
  const auto bytes = write_envelope(e);
  CHECK(bytes[49] == 0xbc);
  CHECK(bytes[50] == 0x0a);
}

TEST_CASE("envelope error kinds") {
  const auto good = write_envelope(three_char_envelope());

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(read_error_kind(bad_magic) == EnvelopeErrorKind::kBadMagic);

  auto bad_version = good;
  bad_version[11] = 2;
  CHECK(read_error_kind(bad_version) == EnvelopeErrorKind::kVersionMismatch);

  for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{20}, std::size_t{50},
                          good.size() - 1}) {
    CHECK(read_error_kind({good.begin(), good.begin() + static_cast<long>(cut)}) ==
          EnvelopeErrorKind::kTruncated);
  }

  auto trailing = good;
  trailing.push_back(0);
  CHECK(read_error_kind(trailing) == EnvelopeErrorKind::kCountMismatch);

  auto long_count = good;
  long_count[16] = 4;  // claims 4 characters, carries 3
  CHECK(read_error_kind(long_count) == EnvelopeErrorKind::kTruncated);

  auto bad_width = good;
  bad_width[12] = 0;
  CHECK(read_error_kind(bad_width) == EnvelopeErrorKind::kMalformed);

  MessageEnvelope narrow;
  narrow.width = 4;
  narrow.reference_keys = {BitVector(4, 0xf)};
  narrow.cipher_indices = {0};
  auto padding = write_envelope(narrow);
  padding[49] = 0x1f;
  CHECK(read_error_kind(padding) == EnvelopeErrorKind::kMalformed);
}

TEST_CASE("write_envelope rejects inconsistent envelopes") {
  MessageEnvelope e = three_char_envelope();
  e.cipher_indices.pop_back();
  CHECK_THROWS_AS(write_envelope(e), std::invalid_argument);
  e = three_char_envelope();
  e.reference_keys[1] = BitVector(9, 0);
  CHECK_THROWS_AS(write_envelope(e), std::invalid_argument);
}

TEST_CASE("3000 characters at N = 8 carry 24000 key bits") {
  MessageEnvelope e;
  e.width = 8;
  Rng rng(3);
  for (int i = 0; i < 3000; ++i) {
    e.reference_keys.push_back(random_bitvector(8, rng));
    e.cipher_indices.push_back(static_cast<std::uint16_t>(uniform_below(rng, 95)));
  }
  const auto bytes = write_envelope(e);
  const std::size_t header = 11 + 1 + 1 + 4 + 32;
  const std::size_t key_block = bytes.size() - header - 2 * 3000 - 2;
  CHECK(key_block * 8 == 24000);
  CHECK(reference_key_payload_bytes(8, 3000) * 8 == 24000);
}

TEST_CASE("random envelopes re-serialize byte for byte") {
  Rng rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const MessageEnvelope e = random_envelope(rng);
    const auto bytes = write_envelope(e);
    const MessageEnvelope back = read_envelope(bytes);
    CHECK(back == e);
    CHECK(write_envelope(back) == bytes);
  }
}

TEST_CASE("frame encoding") {
  const std::vector<std::uint8_t> payload = {1, 2, 3};
  const auto frame = encode_frame(payload);
  CHECK(std::string(frame.begin(), frame.begin() + 8) == "GANENCV1");
  CHECK(frame.size() == 15);
  CHECK(frame[11] == 3);
  CHECK(Endpoint::parse("127.0.0.1:9000").port == 9000);
  CHECK(Endpoint::parse("localhost:1").host == "localhost");
  CHECK_THROWS_AS(Endpoint::parse("localhost"), std::invalid_argument);
  CHECK_THROWS_AS(Endpoint::parse("localhost:70000"), std::invalid_argument);
}

TEST_CASE("loopback transfer") {
  Listener listener(0);
  const Endpoint to{"127.0.0.1", listener.port()};
  Rng rng(6);
  const MessageEnvelope first = random_envelope(rng);
  const MessageEnvelope second = random_envelope(rng);

  SUBCASE("single envelope per connection") {
    std::thread sender([&] { send_envelope(first, to); });
    const MessageEnvelope got = receive_envelope(listener);
    sender.join();
    CHECK(got == first);
  }
  SUBCASE("two envelopes on one connection arrive in order") {
    std::thread sender([&] {
      Connection conn = Connection::connect(to);
      conn.send(first);
      conn.send(second);
    });
    Connection conn = listener.accept();
    const MessageEnvelope a = conn.receive();
    const MessageEnvelope b = conn.receive();
    sender.join();
    CHECK(a == first);
    CHECK(b == second);
  }
  SUBCASE("garbage magic is a protocol error") {
    std::thread sender([&] {
      Connection conn = Connection::connect(to);
      const std::string junk("NOTMAGIC\0\0\0\1x", 13);
      conn.send_bytes({reinterpret_cast<const std::uint8_t*>(junk.data()), junk.size()});
    });
    Connection conn = listener.accept();
    CHECK_THROWS_AS(conn.receive(), ProtocolError);
    sender.join();
  }
  SUBCASE("oversize frame is refused before reading the payload") {
    std::thread sender([&] {
      Connection conn = Connection::connect(to);
      std::vector<std::uint8_t> header(kFrameMagic.begin(), kFrameMagic.end());
      for (std::uint8_t b : {0x04, 0x00, 0x00, 0x01}) header.push_back(b);
      conn.send_bytes(header);
    });
    Connection conn = listener.accept();
    CHECK_THROWS_AS(conn.receive(), ProtocolError);
    sender.join();
  }
  SUBCASE("early close mid-frame") {
    std::thread sender([&] {
      Connection conn = Connection::connect(to);
      auto frame = encode_frame(write_envelope(first));
      frame.resize(frame.size() / 2);
      conn.send_bytes(frame);
    });
    Connection conn = listener.accept();
    sender.join();
    CHECK_THROWS_AS(conn.receive(), ProtocolError);
  }
}

TEST_CASE("connection failure") {
  std::uint16_t port;
  {
    Listener l(0);
    port = l.port();
  }
  CHECK_THROWS_AS(Connection::connect({"127.0.0.1", port}), ProtocolError);
}

TEST_CASE("encrypt, transfer and decrypt end to end") {
  Rng rng(77);
  const Alphabet a = Alphabet::printable95();
  const auto c = random_circuit(18, 18, {GateKind::kNot}, rng);
  const std::u32string text = U"Meet me at the north gate at 9pm. Bring the blue folder!";
  const Encryption enc = encrypt_text(text, c, a, SearchStrategy::memory(), rng);

  Listener listener(0);
  std::thread sender([&] { send_envelope(MessageEnvelope::from(enc), {"127.0.0.1", listener.port()}); });
  const MessageEnvelope received = receive_envelope(listener);
  sender.join();

  CHECK(decrypt_text(received.message(), received.reference_keys, c, a,
                     SearchStrategy::direct()) == text);
}
