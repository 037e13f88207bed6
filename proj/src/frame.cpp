#include "rasc/frame.hpp"

#include <algorithm>
#include <cstring>

namespace rasc {

namespace {
// Frames larger than this are treated as corrupt rather than allocated.
constexpr uint32_t kMaxPayload = 1u << 28;
}

void FrameHeader::validate() const {
  require(version == kVersion, Status::invalid_argument, "unsupported frame version");
  require(channels == 3, Status::invalid_argument, "unsupported channel count");
  require(t_capture_ns <= t_encode_start_ns && t_encode_start_ns <= t_encode_end_ns,
          Status::invalid_argument, "timestamps must be ordered");
  require(payload_len <= kMaxPayload, Status::invalid_argument, "payload too large");
}

size_t MemorySource::read(std::span<uint8_t> out) {
  size_t n = std::min(out.size(), bytes_.size() - pos_);
  if (n == 0) return 0;
  std::memcpy(out.data(), bytes_.data() + pos_, n);
  pos_ += n;
  return n;
}

std::vector<uint8_t> serialize_frame(const FrameHeader& header, std::span<const uint8_t> payload) {
  header.validate();
  require(header.payload_len == payload.size(), Status::invalid_argument,
          "payload_len does not match payload");
  std::vector<uint8_t> out;
  out.reserve(FrameHeader::kBytes + payload.size());
  out.insert(out.end(), FrameHeader::kMagic, FrameHeader::kMagic + 4);
  out.push_back(header.version);
  out.push_back(uint8_t(header.sensor_type));
  out.push_back(header.codec_id);
  out.push_back(header.flags);
  put_u64(out, header.frame_id);
  put_u64(out, header.t_capture_ns);
  put_u64(out, header.t_encode_start_ns);
  put_u64(out, header.t_encode_end_ns);
  put_u16(out, header.width);
  put_u16(out, header.height);
  out.push_back(header.channels);
  out.insert(out.end(), {0, 0, 0});  // reserved
  put_u32(out, header.payload_len);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

namespace {

size_t read_fully(ByteSource& source, std::span<uint8_t> out) {
  size_t got = 0;
  while (got < out.size()) {
    size_t n = source.read(out.subspan(got));
    if (n == 0) break;
    got += n;
  }
  return got;
}

// Parses the 52 header bytes; header_bytes must hold kBytes.
FrameHeader parse_header(std::span<const uint8_t> header_bytes, uint64_t stream_offset) {
  ByteReader r(header_bytes);
  auto magic = r.bytes(4);
  require(std::memcmp(magic.data(), FrameHeader::kMagic, 4) == 0, Status::bad_format,
          "bad frame magic at stream offset " + std::to_string(stream_offset));
  FrameHeader h;
  h.version = r.u8();
  require(h.version == FrameHeader::kVersion, Status::bad_format,
          "unsupported frame version " + std::to_string(h.version) + " at stream offset " +
              std::to_string(stream_offset));
  uint8_t sensor = r.u8();
  require(sensor <= 1, Status::bad_format, "unknown sensor type");
  h.sensor_type = SensorType(sensor);
  h.codec_id = r.u8();
  h.flags = r.u8();
  h.frame_id = r.u64();
  h.t_capture_ns = r.u64();
  h.t_encode_start_ns = r.u64();
  h.t_encode_end_ns = r.u64();
  h.width = r.u16();
  h.height = r.u16();
  h.channels = r.u8();
  r.bytes(3);  // reserved
  h.payload_len = r.u32();
  require(h.channels == 3, Status::bad_format, "unsupported channel count");
  require(h.t_capture_ns <= h.t_encode_start_ns && h.t_encode_start_ns <= h.t_encode_end_ns,
          Status::bad_format, "frame timestamps out of order");
  require(h.payload_len <= kMaxPayload, Status::bad_format, "frame payload too large");
  return h;
}

// Payload read in bounded chunks so a lying header cannot force one giant
// allocation before the stream runs dry.
bool read_payload(ByteSource& source, uint32_t payload_len, std::vector<uint8_t>& out) {
  constexpr size_t kChunk = 1u << 16;
  out.clear();
  out.reserve(std::min<size_t>(payload_len, 1u << 20));
  while (out.size() < payload_len) {
    size_t want = std::min(kChunk, size_t(payload_len) - out.size());
    size_t at = out.size();
    out.resize(at + want);
    size_t got = read_fully(source, std::span<uint8_t>(out.data() + at, want));
    out.resize(at + got);
    if (got < want) return false;
  }
  return true;
}

}  // namespace

std::optional<Frame> deserialize_frame(ByteSource& source) {
  uint8_t header_bytes[FrameHeader::kBytes];
  size_t got = read_fully(source, header_bytes);
  if (got == 0) return std::nullopt;  // clean close at a frame boundary
  require(got == FrameHeader::kBytes, Status::bad_format,
          "stream truncated inside a frame header");
  Frame frame;
  frame.header = parse_header(std::span<const uint8_t>(header_bytes, FrameHeader::kBytes), 0);
  require(read_payload(source, frame.header.payload_len, frame.payload), Status::bad_format,
          "stream truncated inside a frame payload");
  return frame;
}

bool FrameReader::fill_header() {
  while (header_buf_.size() < FrameHeader::kBytes) {
    size_t at = header_buf_.size();
    header_buf_.resize(FrameHeader::kBytes);
    size_t got = read_fully(source_, std::span<uint8_t>(header_buf_.data() + at,
                                                        FrameHeader::kBytes - at));
    header_buf_.resize(at + got);
    if (got == 0) return false;
  }
  return true;
}

std::optional<Frame> FrameReader::next() {
  bool resyncing = false;
  for (;;) {
    if (!fill_header()) return std::nullopt;
    if (std::memcmp(header_buf_.data(), FrameHeader::kMagic, 4) != 0) {
      if (!resyncing) {
        resyncing = true;
        ++malformed_;
      }
      // slide one byte and keep hunting for the magic
      auto it = std::find(header_buf_.begin() + 1, header_buf_.end(), uint8_t('R'));
      size_t shift = size_t(it - header_buf_.begin());
      header_buf_.erase(header_buf_.begin(), header_buf_.begin() + shift);
      consumed_ += shift;
      continue;
    }
    Frame frame;
    try {
      frame.header = parse_header(header_buf_, consumed_);
    } catch (const Error&) {
      if (!resyncing) {
        resyncing = true;
        ++malformed_;
      }
      header_buf_.erase(header_buf_.begin());
      consumed_ += 1;
      continue;
    }
    header_buf_.clear();
    consumed_ += FrameHeader::kBytes;
    if (!read_payload(source_, frame.header.payload_len, frame.payload)) {
      ++malformed_;
      return std::nullopt;  // truncated payload ends the stream
    }
    consumed_ += frame.payload.size();
    return frame;
  }
}

}  // namespace rasc
