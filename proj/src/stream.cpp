#include "rasc/stream.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>

#include "rasc/io.hpp"
#include "rasc/synthetic.hpp"

namespace rasc {

uint64_t now_ns() {
  return uint64_t(std::chrono::duration_cast<std::chrono::nanoseconds>(
                      std::chrono::steady_clock::now().time_since_epoch())
                      .count());
}

namespace {

double ms_between(uint64_t start_ns, uint64_t end_ns) {
  return double(int64_t(end_ns - start_ns)) / 1e6;
}

// Bounded single-producer/single-consumer queue. Compute stages block when
// full; the queue feeding the link drops the oldest frame instead, trading
// completeness for freshness when the encoder outpaces the network.
template <typename T>
class BoundedQueue {
public:
  enum class Overflow { block, drop_oldest };

  explicit BoundedQueue(size_t capacity, Overflow policy = Overflow::block)
      : capacity_(capacity), policy_(policy) {}

  void push(T item) {
    std::unique_lock lock(mu_);
    if (policy_ == Overflow::block) {
      cv_space_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
      if (closed_) return;
    } else if (items_.size() >= capacity_) {
      items_.pop_front();
      ++dropped_;
    }
    items_.push_back(std::move(item));
    cv_.notify_one();
  }

  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    cv_space_.notify_one();
    return item;
  }

  void close() {
    std::unique_lock lock(mu_);
    closed_ = true;
    cv_.notify_all();
    cv_space_.notify_all();
  }

  size_t dropped() const {
    std::unique_lock lock(mu_);
    return dropped_;
  }

private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable cv_space_;
  std::deque<T> items_;
  size_t capacity_;
  Overflow policy_;
  size_t dropped_ = 0;
  bool closed_ = false;
};

class ReplaySource : public FrameSource {
public:
  ReplaySource(const std::string& directory, bool loop) : loop_(loop) {
    namespace fs = std::filesystem;
    require(fs::is_directory(directory), Status::io_error, directory + " is not a directory");
    for (const auto& entry : fs::directory_iterator(directory)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      if (ext == ".ppm" || ext == ".bin") paths_.push_back(entry.path().string());
    }
    std::sort(paths_.begin(), paths_.end());
    require(!paths_.empty(), Status::invalid_argument, directory + " holds no .ppm or .bin files");
  }

  std::optional<RawFrame> next() override {
    while (idx_ < paths_.size() || loop_) {
      if (idx_ >= paths_.size()) idx_ = 0;
      const std::string& path = paths_[idx_++];
      try {
        RawFrame frame;
        if (path.ends_with(".ppm")) {
          frame.sensor = SensorType::camera;
          frame.image = load_image(path);
        } else {
          frame.sensor = SensorType::lidar;
          frame.cloud = load_pointcloud(path);
        }
        return frame;
      } catch (const Error&) {
        ++skipped_;  // unreadable source file: skip and count
      }
    }
    return std::nullopt;
  }

  size_t skipped() const override { return skipped_; }

private:
  std::vector<std::string> paths_;
  size_t idx_ = 0;
  size_t skipped_ = 0;
  bool loop_;
};

// Endless camera: one synthetic base image, rolled by a few rows per frame
// so content changes cheaply.
class SyntheticCameraSource : public FrameSource {
public:
  SyntheticCameraSource(uint32_t w, uint32_t h, uint64_t seed)
      : base_(make_natural_image(w, h, seed)) {}

  std::optional<RawFrame> next() override {
    RawFrame frame;
    frame.sensor = SensorType::camera;
    frame.image = base_;
    uint32_t shift = (3 * counter_++) % base_.height;
    size_t row_bytes = size_t(base_.width) * Image8::kChannels;
    for (uint32_t y = 0; y < base_.height; ++y) {
      uint32_t src = (y + shift) % base_.height;
      std::copy_n(base_.data.begin() + size_t(src) * row_bytes, row_bytes,
                  frame.image.data.begin() + size_t(y) * row_bytes);
    }
    return frame;
  }

private:
  Image8 base_;
  uint32_t counter_ = 0;
};

class SyntheticLidarSource : public FrameSource {
public:
  SyntheticLidarSource(uint32_t rings, uint32_t azimuth_steps, uint64_t seed) : seed_(seed) {
    spec_.rings = rings;
    spec_.azimuth_steps = azimuth_steps;
  }

  std::optional<RawFrame> next() override {
    RawFrame frame;
    frame.sensor = SensorType::lidar;
    frame.cloud = make_scan(spec_, seed_ + counter_++);
    return frame;
  }

private:
  ScanSpec spec_;
  uint64_t seed_;
  uint64_t counter_ = 0;
};

struct CapturedFrame {
  uint64_t frame_id = 0;
  uint64_t t_capture_ns = 0;
  RawFrame raw;
};

struct PreprocessedFrame {
  uint64_t frame_id = 0;
  uint64_t t_capture_ns = 0;
  SensorType sensor = SensorType::camera;
  double t_preprocess_ms = 0;
  Image8 image;
  NormalizedGrid grid;
};

struct WireFrame {
  TimingRecord record;
  std::vector<uint8_t> bytes;
};

EncodedPayload encode_stage(const PreprocessedFrame& f, const StreamCodec& codec) {
  if (codec.codec == CodecId::block_dct) {
    return f.sensor == SensorType::camera ? dct_encode_image(f.image, codec.quality)
                                          : dct_encode_grid(f.grid, codec.quality);
  }
  require(codec.model != nullptr, Status::invalid_argument,
          "learned codec selected without a model checkpoint");
  return f.sensor == SensorType::camera
             ? ae_encode_image(f.image, *codec.model, codec.q_scale)
             : ae_encode_grid(f.grid, *codec.model, codec.q_scale);
}

}  // namespace

std::unique_ptr<FrameSource> make_replay_source(const std::string& directory, bool loop) {
  return std::make_unique<ReplaySource>(directory, loop);
}

std::unique_ptr<FrameSource> make_synthetic_camera_source(uint32_t width, uint32_t height,
                                                          uint64_t seed) {
  return std::make_unique<SyntheticCameraSource>(width, height, seed);
}

std::unique_ptr<FrameSource> make_synthetic_lidar_source(uint32_t rings, uint32_t azimuth_steps,
                                                         uint64_t seed) {
  return std::make_unique<SyntheticLidarSource>(rings, azimuth_steps, seed);
}

SenderResult run_sender(FrameSource& source, const SenderConfig& cfg, const std::string& host,
                        uint16_t port) {
  TcpStream stream = TcpStream::connect(host, port);
  SenderResult result;

  BoundedQueue<CapturedFrame> q_captured(4);
  BoundedQueue<PreprocessedFrame> q_preprocessed(4);
  BoundedQueue<WireFrame> q_wire(4, BoundedQueue<WireFrame>::Overflow::drop_oldest);
  std::atomic<bool> abort{false};

  std::thread capture_thread([&] {
    uint64_t frame_id = 0;
    uint64_t t_start = now_ns();
    uint64_t pace_ns = cfg.pace_fps > 0 ? uint64_t(1e9 / cfg.pace_fps) : 0;
    uint64_t next_tick = t_start;
    while (!abort.load(std::memory_order_relaxed)) {
      if (cfg.max_frames && frame_id >= cfg.max_frames) break;
      if (cfg.duration_s > 0 && ms_between(t_start, now_ns()) >= cfg.duration_s * 1e3) break;
      if (pace_ns) {
        uint64_t now = now_ns();
        if (now < next_tick)
          std::this_thread::sleep_for(std::chrono::nanoseconds(next_tick - now));
        next_tick += pace_ns;
      }
      std::optional<RawFrame> raw = source.next();
      if (!raw) break;
      CapturedFrame c;
      c.frame_id = frame_id++;
      c.t_capture_ns = now_ns();
      c.raw = std::move(*raw);
      q_captured.push(std::move(c));
    }
    q_captured.close();
  });

  std::thread preprocess_thread([&] {
    while (auto c = q_captured.pop()) {
      PreprocessedFrame p;
      p.frame_id = c->frame_id;
      p.t_capture_ns = c->t_capture_ns;
      p.sensor = c->raw.sensor;
      if (p.sensor == SensorType::lidar) {
        uint64_t t0 = now_ns();
        p.grid = normalize_grid(pointcloud_to_grid(c->raw.cloud, cfg.grid));
        p.t_preprocess_ms = ms_between(t0, now_ns());
      } else {
        p.image = std::move(c->raw.image);
        p.t_preprocess_ms = 0;
      }
      q_preprocessed.push(std::move(p));
    }
    q_preprocessed.close();
  });

  std::thread encode_thread([&] {
    while (auto p = q_preprocessed.pop()) {
      WireFrame wf;
      wf.record.frame_id = p->frame_id;
      wf.record.sensor = p->sensor;
      wf.record.t_capture_ns = p->t_capture_ns;
      wf.record.t_preprocess_ms = p->t_preprocess_ms;

      uint64_t enc_start = now_ns();
      EncodedPayload payload;
      try {
        payload = encode_stage(*p, cfg.codec);
      } catch (const Error&) {
        abort.store(true);
        q_wire.close();
        return;
      }
      uint64_t enc_end = now_ns();
      wf.record.t_encode_ms = ms_between(enc_start, enc_end);

      uint64_t ser_start = now_ns();
      std::vector<uint8_t> body = payload.serialize();
      FrameHeader header;
      header.sensor_type = p->sensor;
      header.codec_id = uint8_t(cfg.codec.codec);
      header.frame_id = p->frame_id;
      header.t_capture_ns = p->t_capture_ns;
      header.t_encode_start_ns = enc_start;
      header.t_encode_end_ns = enc_end;
      header.width = payload.width;
      header.height = payload.height;
      header.payload_len = uint32_t(body.size());
      wf.bytes = serialize_frame(header, body);
      wf.record.t_serialize_ms = ms_between(ser_start, now_ns());
      wf.record.payload_bytes = body.size();
      wf.record.bpp = payload.bpp();
      q_wire.push(std::move(wf));
    }
    q_wire.close();
  });

  while (auto wf = q_wire.pop()) {
    try {
      stream.write_all(wf->bytes);
    } catch (const Error&) {
      result.connection_lost = true;  // graceful stop with a partial report
      abort.store(true);
      break;
    }
    result.records.push_back(wf->record);
  }

  abort.store(true);
  q_captured.close();
  q_preprocessed.close();
  q_wire.close();
  capture_thread.join();
  preprocess_thread.join();
  encode_thread.join();

  result.dropped_frames = q_captured.dropped() + q_preprocessed.dropped() + q_wire.dropped();
  result.skipped_source_files = source.skipped();
  return result;
}

namespace {

void write_artifact(const Frame& frame, const EncodedPayload& payload, const ReceiverConfig& cfg,
                    const AeModel* model) {
  namespace fs = std::filesystem;
  char name[64];
  if (frame.header.sensor_type == SensorType::camera) {
    Image8 img = payload.codec == CodecId::block_dct ? dct_decode_image(payload)
                                                     : ae_decode_image(payload, *model);
    std::snprintf(name, sizeof name, "recon_%06llu.ppm",
                  static_cast<unsigned long long>(frame.header.frame_id));
    save_image(img, (fs::path(cfg.sink_dir) / name).string());
  } else {
    NormalizedGrid ngrid = payload.codec == CodecId::block_dct
                               ? dct_decode_grid(payload, cfg.grid)
                               : ae_decode_grid(payload, *model, cfg.grid);
    PointCloud cloud = grid_to_pointcloud(denormalize_grid(ngrid));
    std::snprintf(name, sizeof name, "recon_%06llu.bin",
                  static_cast<unsigned long long>(frame.header.frame_id));
    save_pointcloud(cloud, (fs::path(cfg.sink_dir) / name).string());
  }
}

}  // namespace

ReceiverResult run_receiver_on(ByteSource& source, const ReceiverConfig& cfg) {
  ReceiverResult result;
  FrameReader reader(source);
  for (;;) {
    if (cfg.max_frames && result.records.size() >= cfg.max_frames) break;
    std::optional<Frame> frame;
    frame = reader.next();
    if (!frame) break;
    uint64_t receive_ns = now_ns();

    TimingRecord rec;
    rec.frame_id = frame->header.frame_id;
    rec.sensor = frame->header.sensor_type;
    rec.t_capture_ns = frame->header.t_capture_ns;
    rec.payload_bytes = frame->payload.size();
    if (cfg.shared_clock) rec.t_network_ms = ms_between(frame->header.t_encode_end_ns, receive_ns);

    uint64_t dec_start = now_ns();
    try {
      EncodedPayload payload = EncodedPayload::parse(frame->payload);
      rec.bpp = payload.bpp();
      const AeModel* model = cfg.model.get();
      if (payload.codec == CodecId::learned_ae)
        require(model != nullptr, Status::invalid_argument,
                "received a learned-codec frame without a model checkpoint");
      if (!cfg.sink_dir.empty()) {
        write_artifact(*frame, payload, cfg, model);
      } else {
        // decode and discard so t_decode is still meaningful
        if (frame->header.sensor_type == SensorType::camera) {
          Image8 img = payload.codec == CodecId::block_dct ? dct_decode_image(payload)
                                                           : ae_decode_image(payload, *model);
          (void)img;
        } else {
          NormalizedGrid g = payload.codec == CodecId::block_dct
                                 ? dct_decode_grid(payload, cfg.grid)
                                 : ae_decode_grid(payload, *model, cfg.grid);
          (void)g;
        }
      }
    } catch (const Error&) {
      ++result.decode_failures;  // drop the frame, keep the stream alive
      continue;
    }
    uint64_t dec_end = now_ns();
    rec.t_decode_ms = ms_between(dec_start, dec_end);
    if (cfg.shared_clock) rec.wall_ms = ms_between(frame->header.t_capture_ns, dec_end);
    result.records.push_back(rec);
  }
  result.malformed_frames = reader.malformed_count();
  return result;
}

ReceiverResult run_receiver(TcpListener& listener, const ReceiverConfig& cfg) {
  TcpStream stream = listener.accept();
  SocketSource source(stream);
  return run_receiver_on(source, cfg);
}

namespace {

StageStats stats_of(std::vector<double> values) {
  StageStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / double(values.size());
  size_t n = values.size();
  s.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  // nearest rank: 100 ascending samples put p99 at the largest one
  size_t idx = size_t(std::ceil(0.99 * double(n - 1)));
  s.p99 = values[std::min(n - 1, idx)];
  return s;
}

}  // namespace

BenchReport aggregate_timings(const std::vector<TimingRecord>& records, double window_seconds) {
  require(!records.empty(), Status::invalid_argument, "no timing records");
  BenchReport report;
  report.window_seconds = window_seconds;

  uint64_t last_capture = 0;
  for (const TimingRecord& r : records) last_capture = std::max(last_capture, r.t_capture_ns);
  uint64_t window_ns = uint64_t(window_seconds * 1e9);
  uint64_t cutoff = last_capture > window_ns ? last_capture - window_ns : 0;

  std::vector<double> pre, enc, ser, net, dec, e2e, wall;
  uint64_t first_capture = UINT64_MAX;
  for (const TimingRecord& r : records) {
    if (r.t_capture_ns < cutoff) continue;
    ++report.frames;
    first_capture = std::min(first_capture, r.t_capture_ns);
    pre.push_back(r.t_preprocess_ms);
    if (r.t_encode_ms >= 0) enc.push_back(r.t_encode_ms);
    if (r.t_serialize_ms >= 0) ser.push_back(r.t_serialize_ms);
    if (r.t_network_ms >= 0) net.push_back(r.t_network_ms);
    if (r.t_decode_ms >= 0) dec.push_back(r.t_decode_ms);
    double sum = r.t_preprocess_ms;
    if (r.t_encode_ms >= 0) sum += r.t_encode_ms;
    if (r.t_serialize_ms >= 0) sum += r.t_serialize_ms;
    if (r.t_network_ms >= 0) sum += r.t_network_ms;
    if (r.t_decode_ms >= 0) sum += r.t_decode_ms;
    e2e.push_back(sum);
    if (r.wall_ms >= 0) wall.push_back(r.wall_ms);
  }
  report.preprocess = stats_of(std::move(pre));
  report.encode = stats_of(std::move(enc));
  report.serialize = stats_of(std::move(ser));
  report.network = stats_of(std::move(net));
  report.decode = stats_of(std::move(dec));
  report.end_to_end_mean_ms = stats_of(std::move(e2e)).mean;
  if (!wall.empty()) report.wall_mean_ms = stats_of(std::move(wall)).mean;
  if (report.frames >= 2 && last_capture > first_capture)
    report.fps = double(report.frames - 1) / (double(last_capture - first_capture) / 1e9);
  return report;
}

BenchOutput bench_loopback(FrameSource& source, const SenderConfig& sender_cfg,
                           const ReceiverConfig& receiver_cfg, double window_seconds) {
  TcpListener listener("127.0.0.1", 0);
  ReceiverConfig rcfg = receiver_cfg;
  rcfg.shared_clock = true;

  ReceiverResult receiver_result;
  std::thread receiver_thread([&] { receiver_result = run_receiver(listener, rcfg); });
  SenderResult sender_result;
  Error sender_error(Status::ok, "");
  bool sender_failed = false;
  try {
    sender_result = run_sender(source, sender_cfg, "127.0.0.1", listener.port());
  } catch (const Error& e) {
    sender_failed = true;
    sender_error = e;
  }
  receiver_thread.join();
  if (sender_failed) throw sender_error;

  std::map<uint64_t, TimingRecord> merged;
  for (const TimingRecord& r : sender_result.records) merged[r.frame_id] = r;
  BenchOutput out;
  for (const TimingRecord& r : receiver_result.records) {
    auto it = merged.find(r.frame_id);
    if (it == merged.end()) continue;
    TimingRecord full = it->second;
    full.t_network_ms = r.t_network_ms;
    full.t_decode_ms = r.t_decode_ms;
    full.wall_ms = r.wall_ms;
    out.records.push_back(full);
  }
  require(!out.records.empty(), Status::internal, "loopback bench produced no complete frames");
  out.report = aggregate_timings(out.records, window_seconds);
  out.report.dropped_frames = sender_result.dropped_frames;
  out.report.malformed_frames = receiver_result.malformed_frames;
  out.report.decode_failures = receiver_result.decode_failures;
  out.report.skipped_source_files = sender_result.skipped_source_files;
  return out;
}

}  // namespace rasc
