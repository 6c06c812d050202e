#include "ganenc/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <stdexcept>

namespace ganenc {

namespace {

std::string errno_text(std::string_view what) {
  return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload) {
  if (payload.size() > kMaxFrameBytes) throw ProtocolError("frame exceeds 64 MiB");
  std::vector<std::uint8_t> frame(kFrameMagic.begin(), kFrameMagic.end());
  const auto n = static_cast<std::uint32_t>(payload.size());
  for (int i = 3; i >= 0; --i) frame.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

Endpoint Endpoint::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument("endpoint must be host:port, got '" + std::string(text) + "'");
  }
  const std::string_view port_text = text.substr(colon + 1);
  unsigned port = 0;
  auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || p != port_text.data() + port_text.size() || port == 0 || port > 65535) {
    throw std::invalid_argument("invalid port in '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

Connection::Connection(Connection&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

Connection::~Connection() {
  if (fd_ >= 0) ::close(fd_);
}

Connection Connection::connect(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(endpoint.port);
  if (const int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw ProtocolError("cannot resolve " + endpoint.host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_error = errno_text("socket");
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      return Connection(fd);
    }
    last_error = errno_text("connect");
    ::close(fd);
  }
  ::freeaddrinfo(res);
  throw ProtocolError("cannot connect to " + endpoint.host + ":" + port + " (" + last_error + ")");
}

void Connection::send_bytes(std::span<const std::uint8_t> bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(errno_text("send"));
    }
    bytes = bytes.subspan(static_cast<std::size_t>(n));
  }
}

void Connection::send(const MessageEnvelope& e) { send_bytes(encode_frame(write_envelope(e))); }

void Connection::read_exact(std::span<std::uint8_t> out) {
  while (!out.empty()) {
    const ssize_t n = ::recv(fd_, out.data(), out.size(), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(errno_text("recv"));
    }
    if (n == 0) throw ProtocolError("connection closed mid-frame");
    out = out.subspan(static_cast<std::size_t>(n));
  }
}

MessageEnvelope Connection::receive() {
  std::uint8_t header[12];
  read_exact(header);
  if (!std::equal(kFrameMagic.begin(), kFrameMagic.end(), header)) {
    throw ProtocolError("frame magic mismatch");
  }
  std::uint32_t length = 0;
  for (int i = 8; i < 12; ++i) length = (length << 8) | header[i];
  if (length > kMaxFrameBytes) {
    throw ProtocolError("frame of " + std::to_string(length) + " bytes exceeds 64 MiB");
  }
  std::vector<std::uint8_t> payload(length);
  read_exact(payload);
  return read_envelope(payload);
}

Listener::Listener(std::uint16_t port) : fd_(::socket(AF_INET, SOCK_STREAM, 0)), port_(port) {
  if (fd_ < 0) throw ProtocolError(errno_text("socket"));
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(fd_, 16) != 0) {
    const std::string msg = errno_text("bind/listen on port " + std::to_string(port));
    ::close(fd_);
    throw ProtocolError(msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Listener::~Listener() { ::close(fd_); }

Connection Listener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return Connection(fd);
    if (errno != EINTR) throw ProtocolError(errno_text("accept"));
  }
}

void send_envelope(const MessageEnvelope& e, const Endpoint& to) {
  Connection::connect(to).send(e);
}

MessageEnvelope receive_envelope(Listener& listener) { return listener.accept().receive(); }

}  // namespace ganenc
