#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rasc/common.hpp"

namespace rasc {

enum class SensorType : uint8_t {
  camera = 0,
  lidar = 1,
};

// Fixed 52-byte wire header, all integers little-endian.
struct FrameHeader {
  static constexpr char kMagic[4] = {'R', 'A', 'S', 'C'};
  static constexpr uint8_t kVersion = 1;
  static constexpr size_t kBytes = 52;

  uint8_t version = kVersion;
  SensorType sensor_type = SensorType::camera;
  uint8_t codec_id = 0;
  uint8_t flags = 0;
  uint64_t frame_id = 0;
  uint64_t t_capture_ns = 0;
  uint64_t t_encode_start_ns = 0;
  uint64_t t_encode_end_ns = 0;
  uint16_t width = 0;
  uint16_t height = 0;
  uint8_t channels = 3;
  uint32_t payload_len = 0;

  void validate() const;
};

struct Frame {
  FrameHeader header;
  std::vector<uint8_t> payload;
};

// Pull-based byte stream; read returns 0 only at end of stream.
class ByteSource {
public:
  virtual ~ByteSource() = default;
  virtual size_t read(std::span<uint8_t> out) = 0;
};

class MemorySource : public ByteSource {
public:
  explicit MemorySource(std::vector<uint8_t> bytes) : bytes_(std::move(bytes)) {}
  size_t read(std::span<uint8_t> out) override;

private:
  std::vector<uint8_t> bytes_;
  size_t pos_ = 0;
};

std::vector<uint8_t> serialize_frame(const FrameHeader& header, std::span<const uint8_t> payload);

// Reads exactly one frame. Returns nullopt on a clean end-of-stream at a
// frame boundary; throws on bad magic/version or a mid-frame truncation.
std::optional<Frame> deserialize_frame(ByteSource& source);

// Framing loop with resynchronization: on a corrupt header it scans forward
// for the next magic and counts the event. Never throws on malformed input;
// input that never yields another frame ends the stream.
class FrameReader {
public:
  explicit FrameReader(ByteSource& source) : source_(source) {}

  std::optional<Frame> next();
  size_t malformed_count() const { return malformed_; }
  uint64_t bytes_consumed() const { return consumed_; }

private:
  bool fill_header();

  ByteSource& source_;
  std::vector<uint8_t> header_buf_;
  size_t malformed_ = 0;
  uint64_t consumed_ = 0;
};

}  // namespace rasc
