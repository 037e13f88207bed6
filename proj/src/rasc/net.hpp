#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "rasc/frame.hpp"

namespace rasc {

// Thin RAII wrappers over IPv4 stream sockets.
class TcpStream {
public:
  TcpStream() = default;
  explicit TcpStream(int fd) : fd_(fd) {}
  TcpStream(TcpStream&& other) noexcept;
  TcpStream& operator=(TcpStream&& other) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;
  ~TcpStream();

  static TcpStream connect(const std::string& host, uint16_t port);

  bool valid() const { return fd_ >= 0; }
  // Returns bytes read; 0 means the peer closed.
  size_t read_some(std::span<uint8_t> out);
  void write_all(std::span<const uint8_t> bytes);
  void close();

private:
  int fd_ = -1;
};

class TcpListener {
public:
  // port 0 binds an ephemeral port; see port() for the actual one.
  TcpListener(const std::string& host, uint16_t port);
  TcpListener(TcpListener&&) = delete;
  ~TcpListener();

  uint16_t port() const { return port_; }
  TcpStream accept();

private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

class SocketSource : public ByteSource {
public:
  explicit SocketSource(TcpStream& stream) : stream_(stream) {}
  size_t read(std::span<uint8_t> out) override { return stream_.read_some(out); }

private:
  TcpStream& stream_;
};

}  // namespace rasc
