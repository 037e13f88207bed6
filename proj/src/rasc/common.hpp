#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rasc {

inline constexpr const char* kVersionString = "0.1.0";

enum class Status {
  ok = 0,
  invalid_argument,
  io_error,
  bad_format,
  mismatch,
  net_error,
  internal,
};

// Single exception type carrying a coarse status code; the C API maps the
// code to its error enum and keeps the message.
class Error : public std::runtime_error {
public:
  Error(Status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  Status status() const { return status_; }

private:
  Status status_;
};

[[noreturn]] inline void fail(Status s, const std::string& msg) { throw Error(s, msg); }

// const char* overloads keep success paths allocation-free; the message is
// only materialized when the check fails (these run per symbol in codecs)
[[noreturn]] inline void fail(Status s, const char* msg) { throw Error(s, msg); }

inline void require(bool cond, Status s, const char* msg) {
  if (!cond) [[unlikely]]
    fail(s, msg);
}

inline void require(bool cond, Status s, const std::string& msg) {
  if (!cond) fail(s, msg);
}

// Little-endian byte packing. Hosts are LE in practice but the wire formats
// are defined byte-wise, so encode explicitly.
inline void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(uint8_t(v));
  out.push_back(uint8_t(v >> 8));
}

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

inline void put_i32(std::vector<uint8_t>& out, int32_t v) { put_u32(out, uint32_t(v)); }

inline void put_f32(std::vector<uint8_t>& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

// Bounds-checked reader over a byte span. Every wire parser goes through
// this so malformed input turns into Error, never UB.
class ByteReader {
public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  uint16_t u16() {
    need(2);
    uint16_t v = uint16_t(data_[pos_]) | uint16_t(data_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  int32_t i32() { return int32_t(u32()); }

  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  std::span<const uint8_t> bytes(size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

private:
  void need(size_t n) const {
    if (data_.size() - pos_ < n) fail(Status::bad_format, "truncated data");
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace rasc
