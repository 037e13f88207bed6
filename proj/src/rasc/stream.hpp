#pragma once

#include <memory>
#include <optional>

#include "rasc/ae.hpp"
#include "rasc/dct_codec.hpp"
#include "rasc/frame.hpp"
#include "rasc/net.hpp"

namespace rasc {

uint64_t now_ns();

// Per-frame latency decomposition, milliseconds. Negative values mean the
// stage was not observed on this side (e.g. t_network without a shared clock).
struct TimingRecord {
  uint64_t frame_id = 0;
  SensorType sensor = SensorType::camera;
  uint64_t t_capture_ns = 0;
  double t_preprocess_ms = 0;
  double t_encode_ms = -1;
  double t_serialize_ms = -1;
  double t_network_ms = -1;
  double t_decode_ms = -1;
  double wall_ms = -1;  // capture -> decode done, shared clock only
  uint64_t payload_bytes = 0;
  double bpp = 0;
};

struct StageStats {
  double mean = 0, median = 0, p99 = 0;
  size_t count = 0;
};

struct BenchReport {
  StageStats preprocess, encode, serialize, network, decode;
  double end_to_end_mean_ms = 0;  // mean per-frame sum of available stages
  double wall_mean_ms = -1;       // measured capture->decode mean, if available
  double fps = 0;
  double window_seconds = 300;
  size_t frames = 0;
  size_t dropped_frames = 0;
  size_t malformed_frames = 0;
  size_t decode_failures = 0;
  size_t skipped_source_files = 0;
};

BenchReport aggregate_timings(const std::vector<TimingRecord>& records,
                              double window_seconds = 300.0);

// Codec choice for the pipeline; model required for the learned codec.
struct StreamCodec {
  CodecId codec = CodecId::block_dct;
  int quality = 75;
  double q_scale = 1.0;
  std::shared_ptr<const AeModel> model;
};

struct RawFrame {
  SensorType sensor = SensorType::camera;
  Image8 image;      // camera
  PointCloud cloud;  // lidar
};

class FrameSource {
public:
  virtual ~FrameSource() = default;
  virtual std::optional<RawFrame> next() = 0;
  virtual size_t skipped() const { return 0; }
};

// Replay: .ppm files are camera frames, .bin files lidar scans, in
// lexicographic order. Unreadable files are skipped and counted.
std::unique_ptr<FrameSource> make_replay_source(const std::string& directory, bool loop = false);
std::unique_ptr<FrameSource> make_synthetic_camera_source(uint32_t width, uint32_t height,
                                                          uint64_t seed);
std::unique_ptr<FrameSource> make_synthetic_lidar_source(uint32_t rings, uint32_t azimuth_steps,
                                                         uint64_t seed);

struct SenderConfig {
  StreamCodec codec;
  GridConfig grid;
  double pace_fps = 0;    // 0: unpaced
  double duration_s = 0;  // 0: until the source ends
  uint64_t max_frames = 0;
};

struct SenderResult {
  std::vector<TimingRecord> records;  // preprocess/encode/serialize stages
  size_t dropped_frames = 0;
  size_t skipped_source_files = 0;
  bool connection_lost = false;
};

// Pipelined: source -> preprocess -> encode+serialize -> send, bounded
// queues of capacity 4 with drop-oldest. frame_id increases from 0.
SenderResult run_sender(FrameSource& source, const SenderConfig& cfg, const std::string& host,
                        uint16_t port);

struct ReceiverConfig {
  std::string sink_dir;  // empty: decode but write nothing
  std::shared_ptr<const AeModel> model;
  GridConfig grid;
  bool shared_clock = false;
  uint64_t max_frames = 0;  // 0: until the stream ends
};

struct ReceiverResult {
  std::vector<TimingRecord> records;  // network/decode stages
  size_t malformed_frames = 0;
  size_t decode_failures = 0;
};

ReceiverResult run_receiver_on(ByteSource& source, const ReceiverConfig& cfg);
ReceiverResult run_receiver(TcpListener& listener, const ReceiverConfig& cfg);

struct BenchOutput {
  BenchReport report;
  std::vector<TimingRecord> records;  // merged sender+receiver rows
};

// Loopback bench: in-process receiver thread plus sender over 127.0.0.1.
BenchOutput bench_loopback(FrameSource& source, const SenderConfig& sender_cfg,
                           const ReceiverConfig& receiver_cfg, double window_seconds = 300.0);

}  // namespace rasc
