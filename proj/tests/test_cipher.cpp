#include "doctest.h"
#include "ganenc/cipher.hpp"
#include "ganenc/utf8.hpp"
#include "oracles.hpp"

using namespace ganenc;

namespace {

std::u32string random_text(const Alphabet& a, std::size_t length, Rng& rng) {
  std::u32string out;
  for (std::size_t i = 0; i < length; ++i) out.push_back(a.symbols()[uniform_below(rng, a.size())]);
  return out;
}

}  // namespace

TEST_CASE("encode_char and decode_index") {
  const Alphabet az = Alphabet::lower26();
  CHECK(az.size() == 26);
  CHECK(encode_char(az, U'a') == 0);
  CHECK(decode_index(az, encode_char(az, U'q')) == U'q');
  CHECK_THROWS_AS(decode_index(az, 26), std::invalid_argument);

  const Alphabet ascii = Alphabet::printable95();
  CHECK(ascii.size() == 95);
  try {
    encode_char(ascii, U'€', 7);
    FAIL("expected OutOfAlphabetError");
  } catch (const OutOfAlphabetError& e) {
    CHECK(e.character() == U'€');
    CHECK(e.position() == 7);
  }
  for (std::uint32_t i = 0; i < ascii.size(); ++i) CHECK(encode_char(ascii, decode_index(ascii, i)) == i);
}

TEST_CASE("alphabet validation and file format") {
  CHECK_THROWS_AS(Alphabet(U"a"), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet(U"abca"), std::invalid_argument);

  const Alphabet custom(U"ab\n\\éΩ ");
  const std::string file = custom.serialize();
  CHECK(file == "GANENC-ALPHABET v1\na\nb\n\\n\n\\\\\né\nΩ\n \n");
  const Alphabet back = Alphabet::parse(file);
  CHECK(back.symbols() == custom.symbols());
  CHECK(back.id() == custom.id());
  CHECK(Alphabet::lower26().id() != Alphabet::printable95().id());
  CHECK(Alphabet::builtin("lower26")->id() == Alphabet::lower26().id());
  CHECK_FALSE(Alphabet::builtin("nope").has_value());

  CHECK_THROWS_AS(Alphabet::parse("GANENC-ALPHABET v1\nab\ncd\n"), FormatError);
  CHECK_THROWS_AS(Alphabet::parse("GANENC-ALPHABET v1\na\n\nb\n"), FormatError);
  CHECK_THROWS_AS(Alphabet::parse("ALPHABET\na\nb\n"), FormatError);
  CHECK_THROWS_AS(Alphabet::parse("GANENC-ALPHABET v1\na\na\n"), FormatError);
}

TEST_CASE("modular arithmetic on a forced keystream value") {
  const Alphabet az = Alphabet::lower26();
  const CircuitConfig identity(5, {});
  // v = 27 = 0b11011; 'b' (f = 1) encrypts to (1 + 27) mod 26 = 2 -> 'c'
  EncryptedMessage msg{{2}, az.id(), 5, {}};
  CHECK(decrypt_text(msg, {BitVector(5, 27)}, identity, az, SearchStrategy::direct()) == U"b");
  CHECK(decode_index(az, 2) == U'c');

  // v = 0 everywhere: ciphertext equals plaintext
  const std::u32string plain = U"hello";
  EncryptedMessage zero{{}, az.id(), 5, {}};
  for (char32_t ch : plain) zero.cipher_indices.push_back(static_cast<std::uint16_t>(encode_char(az, ch)));
  CHECK(decrypt_text(zero, std::vector<BitVector>(5, BitVector(5, 0)), identity, az,
                     SearchStrategy::direct()) == plain);
}

TEST_CASE("encryption relation B = (f(A) + v) mod K") {
  Rng rng(100);
  const Alphabet az = Alphabet::lower26();
  const auto c = random_circuit(12, 12, {GateKind::kNot}, rng);
  const std::u32string text = U"thequickbrownfox";
  const Encryption enc = encrypt_text(text, c, az, SearchStrategy::direct(), rng);
  REQUIRE(enc.message.cipher_indices.size() == text.size());
  REQUIRE(enc.reference_keys.size() == text.size());
  for (std::size_t k = 0; k < text.size(); ++k) {
    const std::uint64_t v = oracle::decimal_by_bit_loop(enc.reference_keys[k] ^ net_mask(c));
    CHECK(enc.message.cipher_indices[k] == (encode_char(az, text[k]) + v) % 26);
  }
}

TEST_CASE("round trip over random texts, circuits and seeds") {
  Rng rng(2718);
  const Alphabet alphabets[] = {Alphabet::lower26(), Alphabet::printable95(),
                                Alphabet(U"αβγδε AaBb")};
  for (int i = 0; i < 1000; ++i) {
    const Alphabet& a = alphabets[i % 3];
    const int n = 1 + static_cast<int>(uniform_below(rng, 32));
    const auto c = random_circuit(n, 1 + static_cast<int>(uniform_below(rng, 2 * n)), {GateKind::kNot}, rng);
    const std::u32string text = random_text(a, uniform_below(rng, 60), rng);
    const auto s = i % 4 == 0 ? SearchStrategy::memory() : SearchStrategy::direct();
    const Encryption enc = encrypt_text(text, c, a, s, rng);
    CHECK(enc.message.text_length() == text.size());
    CHECK(decrypt_text(enc.message, enc.reference_keys, c, a, s, rng()) == text);
  }
}

TEST_CASE("case-sensitive alphabet keeps a and A apart") {
  Rng rng(6);
  const Alphabet a = Alphabet::printable95();
  const auto c = random_circuit(18, 18, {GateKind::kNot}, rng);
  const std::u32string text = U"aAaAbBzZ";
  const Encryption enc = encrypt_text(text, c, a, SearchStrategy::direct(), rng);
  CHECK(decrypt_text(enc.message, enc.reference_keys, c, a, SearchStrategy::direct()) == text);
}

TEST_CASE("empty message") {
  Rng rng(1);
  const Alphabet a = Alphabet::printable95();
  const CircuitConfig c(8, {Gate::make_not(3)});
  const Encryption enc = encrypt_text(U"", c, a, SearchStrategy::direct(), rng);
  CHECK(enc.message.cipher_indices.empty());
  CHECK(decrypt_text(enc.message, enc.reference_keys, c, a, SearchStrategy::direct()).empty());
}

TEST_CASE("encrypt is deterministic for a seed") {
  const Alphabet a = Alphabet::printable95();
  Rng setup(3);
  const auto c = random_circuit(18, 18, {GateKind::kNot}, setup);
  Rng x(44), y(44);
  const Encryption ex = encrypt_text(U"same input", c, a, SearchStrategy::memory(), x);
  const Encryption ey = encrypt_text(U"same input", c, a, SearchStrategy::memory(), y);
  CHECK(ex.message == ey.message);
  CHECK(ex.reference_keys == ey.reference_keys);
}

TEST_CASE("decrypt error paths") {
  Rng rng(8);
  const Alphabet a = Alphabet::printable95();
  const auto c = random_circuit(8, 8, {GateKind::kNot}, rng);
  const Encryption enc = encrypt_text(U"abc", c, a, SearchStrategy::direct(), rng);

  CHECK_THROWS_AS(decrypt_text(enc.message, enc.reference_keys, c, Alphabet::lower26(),
                               SearchStrategy::direct()),
                  AlphabetMismatchError);
  auto fewer = enc.reference_keys;
  fewer.pop_back();
  CHECK_THROWS_AS(decrypt_text(enc.message, fewer, c, a, SearchStrategy::direct()),
                  std::invalid_argument);
  CHECK_THROWS_AS(decrypt_text(enc.message, enc.reference_keys, CircuitConfig(9, {}), a,
                               SearchStrategy::direct()),
                  std::invalid_argument);
  CHECK_THROWS_AS(encrypt_text(U"ab€", c, a, SearchStrategy::direct(), rng), OutOfAlphabetError);
  CHECK_THROWS_AS(encrypt_text(U"ab", CircuitConfig(3, {Gate::make_binary(GateKind::kAnd, 0, 1)}),
                               a, SearchStrategy::memory(), rng),
                  std::invalid_argument);
}

TEST_CASE("passthrough keeps out-of-alphabet characters in place") {
  Rng rng(13);
  const Alphabet a = Alphabet::printable95();
  const auto c = random_circuit(16, 16, {GateKind::kNot}, rng);
  const std::u32string text = U"line one\nline two €5\n";
  const Encryption enc = encrypt_text(text, c, a, SearchStrategy::direct(), rng, {.passthrough = true});
  REQUIRE(enc.message.passthrough.size() == 3);
  CHECK(enc.message.passthrough[0] == Passthrough{8, U'\n'});
  CHECK(enc.message.passthrough[1] == Passthrough{18, U'€'});
  CHECK(enc.message.passthrough[2] == Passthrough{20, U'\n'});
  CHECK(enc.message.cipher_indices.size() == text.size() - 3);
  CHECK(decrypt_text(enc.message, enc.reference_keys, c, a, SearchStrategy::direct()) == text);
}

TEST_CASE("cipher index distribution is near uniform at N = 16") {
  // A constant plaintext leaves all variation to the keystream. Chi-square
  // with 25 degrees of freedom, critical value 52.62 at p = 0.001.
  Rng rng(4242);
  const Alphabet az = Alphabet::lower26();
  const auto c = random_circuit(16, 16, {GateKind::kNot}, rng);
  const std::u32string text(26000, U'e');
  const Encryption enc = encrypt_text(text, c, az, SearchStrategy::direct(), rng);
  std::vector<int> counts(26);
  for (auto b : enc.message.cipher_indices) ++counts[b];
  double chi2 = 0;
  for (int n : counts) chi2 += (n - 1000.0) * (n - 1000.0) / 1000.0;
  CHECK(chi2 < 52.62);
  for (const BitVector& r : enc.reference_keys) CHECK(decimal_value(r) < (1u << 16));
}

TEST_CASE("shred refuses reversible circuits") {
  Rng rng(1);
  CHECK_THROWS_AS(shred_text(U"x", random_circuit(8, 8, {GateKind::kNot}, rng),
                             Alphabet::printable95(), rng),
                  std::invalid_argument);
}

TEST_CASE("shred with one AND leaves ambiguous reference keys") {
  Rng rng(17);
  const Alphabet a = Alphabet::printable95();
  const CircuitConfig c(4, {Gate::make_not(2), Gate::make_binary(GateKind::kAnd, 1, 3)});
  const auto counts = oracle::preimage_counts(c);
  const Encryption enc = shred_text(U"delete me now", c, a, rng);
  CHECK(enc.reference_keys.size() == 13);
  int ambiguous = 0;
  for (const BitVector& r : enc.reference_keys) {
    CHECK(counts.at(r.word()) >= 1);
    ambiguous += counts.at(r.word()) >= 2;
  }
  CHECK(ambiguous >= 1);
}

TEST_CASE("recovery after shred fails on some position") {
  Rng rng(23);
  const Alphabet a = Alphabet::printable95();
  const std::u32string text = U"attack at dawn";
  int wrong_trials = 0;
  for (int t = 0; t < 50; ++t) {
    const auto c = random_circuit(8, 8, {GateKind::kAnd, GateKind::kNot}, rng);
    if (is_reversible(c)) continue;
    const Encryption enc = shred_text(text, c, a, rng);
    try {
      if (decrypt_text(enc.message, enc.reference_keys, c, a, SearchStrategy::uniform(), rng()) != text) {
        ++wrong_trials;
      }
    } catch (const ConvergenceError&) {
      ++wrong_trials;
    }
  }
  CHECK(wrong_trials > 0);
}

TEST_CASE("utf8 helpers") {
  CHECK(utf8::decode("a\xc3\xa9\xe2\x82\xac\xf0\x9f\x98\x80") == U"aé€\U0001F600");
  CHECK(utf8::encode(U"aé€\U0001F600") == "a\xc3\xa9\xe2\x82\xac\xf0\x9f\x98\x80");
  CHECK_THROWS_AS(utf8::decode("\xc3"), FormatError);
  CHECK_THROWS_AS(utf8::decode("\xc0\xaf"), FormatError);
  CHECK_THROWS_AS(utf8::decode("\xed\xa0\x80"), FormatError);
  CHECK_THROWS_AS(utf8::decode("\xff"), FormatError);
}
