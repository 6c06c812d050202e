#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ganenc/envelope.hpp"

namespace ganenc {

// Length-prefixed framing over TCP: 8-byte magic "GANENCV1", u32 big-endian
// payload length, then the write_envelope() bytes.
inline constexpr std::string_view kFrameMagic = "GANENCV1";
inline constexpr std::uint32_t kMaxFrameBytes = 64u << 20;

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload);

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  // "host:port"; throws std::invalid_argument.
  static Endpoint parse(std::string_view text);
};

// Connected stream socket. Move-only; closes on destruction.
class Connection {
 public:
  explicit Connection(int fd) : fd_(fd) {}
  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;
  ~Connection();

  // Throws ProtocolError on connection failure.
  static Connection connect(const Endpoint& endpoint);

  void send_bytes(std::span<const std::uint8_t> bytes);
  void send(const MessageEnvelope& e);
  // Reads one frame. Throws ProtocolError on magic mismatch, oversize frame
  // or early close; EnvelopeError if the payload does not parse.
  MessageEnvelope receive();

  int fd() const { return fd_; }

 private:
  void read_exact(std::span<std::uint8_t> out);
  int fd_;
};

class Listener {
 public:
  // Binds 0.0.0.0:port; port 0 picks an ephemeral port.
  explicit Listener(std::uint16_t port);
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;
  ~Listener();

  std::uint16_t port() const { return port_; }
  Connection accept();

 private:
  int fd_;
  std::uint16_t port_;
};

// One envelope per connection.
void send_envelope(const MessageEnvelope& e, const Endpoint& to);
MessageEnvelope receive_envelope(Listener& listener);

}  // namespace ganenc
