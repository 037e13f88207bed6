#include "rasc/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace rasc {

namespace {

[[noreturn]] void fail_errno(const std::string& what) {
  fail(Status::net_error, what + ": " + std::strerror(errno));
}

sockaddr_in make_addr(const std::string& host, uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  require(inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1, Status::net_error,
          "bad IPv4 address: " + host);
  return addr;
}

void set_nodelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

}  // namespace

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

TcpStream::~TcpStream() { close(); }

void TcpStream::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpStream TcpStream::connect(const std::string& host, uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) fail_errno("socket");
  sockaddr_in addr = make_addr(host, port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int err = errno;
    ::close(fd);
    errno = err;
    fail_errno("connect to " + host + ":" + std::to_string(port));
  }
  set_nodelay(fd);
  return TcpStream(fd);
}

size_t TcpStream::read_some(std::span<uint8_t> out) {
  require(valid(), Status::net_error, "read on closed socket");
  for (;;) {
    ssize_t n = ::recv(fd_, out.data(), out.size(), 0);
    if (n >= 0) return size_t(n);
    if (errno == EINTR) continue;
    fail_errno("recv");
  }
}

void TcpStream::write_all(std::span<const uint8_t> bytes) {
  require(valid(), Status::net_error, "write on closed socket");
  size_t sent = 0;
  while (sent < bytes.size()) {
    ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail_errno("send");
    }
    sent += size_t(n);
  }
}

TcpListener::TcpListener(const std::string& host, uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) fail_errno("socket");
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr = make_addr(host, port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int err = errno;
    ::close(fd_);
    fd_ = -1;
    errno = err;
    fail_errno("bind " + host + ":" + std::to_string(port));
  }
  if (::listen(fd_, 4) != 0) {
    int err = errno;
    ::close(fd_);
    fd_ = -1;
    errno = err;
    fail_errno("listen");
  }
  sockaddr_in actual{};
  socklen_t len = sizeof actual;
  getsockname(fd_, reinterpret_cast<sockaddr*>(&actual), &len);
  port_ = ntohs(actual.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

TcpStream TcpListener::accept() {
  require(fd_ >= 0, Status::net_error, "accept on closed listener");
  for (;;) {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) {
      set_nodelay(fd);
      return TcpStream(fd);
    }
    if (errno == EINTR) continue;
    fail_errno("accept");
  }
}

}  // namespace rasc
